"""JSON documents on disk and Graphviz DOT output."""

from __future__ import annotations

import json
from pathlib import Path

from .order import Structure
from .topology import Topology


class DocumentError(Exception):
    """A file could not be read or parsed; the message carries the location."""


def load_json(path: str | Path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _quote(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def hasse_edges(S: Structure) -> list[tuple[int, int]]:
    """Covering pairs p < q with nothing strictly between."""
    L = S.leq
    n = S.n
    edges = []
    for p in range(n):
        for q in range(n):
            if p == q or not L[p, q]:
                continue
            if not any(r != p and r != q and L[p, r] and L[r, q] for r in range(n)):
                edges.append((p, q))
    return edges


def structure_dot(S: Structure, name: str = "structure") -> str:
    """Hasse diagram of the order, with the extra relation as dashed edges."""
    lines = [f"digraph {_quote(name)} {{", "\trankdir=BT;", "\tnode [shape=circle];"]
    for i, x in enumerate(S.elements):
        lines.append(f"\tn{i} [label={_quote(x)}];")
    for p, q in hasse_edges(S):
        lines.append(f"\tn{p} -> n{q} [style=solid];")
    for p in range(S.n):
        for q in range(S.n):
            if S.prec[p, q]:
                lines.append(f"\tn{p} -> n{q} [style=dashed, color=gray40, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def specialization_dot(T: Topology, name: str = "space") -> str:
    """Covering pairs of the specialization order, x -> y when x is in cl{y}."""
    cl = T.point_closures
    m = T.m
    below = [[x != y and cl[y] >> x & 1 == 1 for y in range(m)] for x in range(m)]
    lines = [f"digraph {_quote(name)} {{", "\trankdir=BT;", "\tnode [shape=box];"]
    for i, x in enumerate(T.labels):
        lines.append(f"\tp{i} [label={_quote(x)}];")
    for x in range(m):
        for y in range(m):
            if below[x][y] and not any(below[x][z] and below[z][y] for z in range(m)):
                lines.append(f"\tp{x} -> p{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"
