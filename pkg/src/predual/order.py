"""Finite (S, <=, <, v, 0) structures and their filter/ideal machinery.

Subsets of the carrier are plain Python ints used as bitmasks: bit ``i`` is
set when element ``i`` is a member.  Carriers are capped at
:data:`MAX_ELEMENTS` so every subset fits in a machine word.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    CarrierTooLarge,
    JoinMismatch,
    NoBottom,
    NoJoin,
    NotDirected,
    NotPartialOrder,
    StructureError,
)
from . import kernels

MAX_ELEMENTS = 24


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in ascending order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


class Structure:
    """A validated finite join-semilattice with bottom and an extra relation.

    Build instances with :func:`validate_structure` or :func:`make_structure`;
    the constructor assumes its tables are already consistent.
    """

    def __init__(self, elements, leq, prec, join, bottom):
        self.elements = tuple(elements)
        self.leq = _frozen(np.asarray(leq, dtype=bool))
        self.prec = _frozen(np.asarray(prec, dtype=bool))
        self.join = _frozen(np.asarray(join, dtype=np.int64))
        self.bottom = int(bottom)
        self._index = {label: i for i, label in enumerate(self.elements)}

    @property
    def n(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"Structure({list(self.elements)!r})"

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self.elements == other.elements
            and self.bottom == other.bottom
            and np.array_equal(self.leq, other.leq)
            and np.array_equal(self.prec, other.prec)
            and np.array_equal(self.join, other.join)
        )

    def __hash__(self):
        return hash((self.elements, self.bottom, self.leq.tobytes(), self.prec.tobytes()))

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown element {label!r}") from None

    def label(self, i: int):
        return self.elements[i]

    @cached_property
    def full(self) -> int:
        return (1 << self.n) - 1

    # bitmask tables; row i lists the partners of element i
    @cached_property
    def up_masks(self) -> np.ndarray:
        return _row_masks(self.leq)

    @cached_property
    def down_masks(self) -> np.ndarray:
        return _row_masks(self.leq.T)

    @cached_property
    def prec_down_masks(self) -> np.ndarray:
        """Row p holds {r : r < p}."""
        return _row_masks(self.prec.T)

    @cached_property
    def prec_up_masks(self) -> np.ndarray:
        """Row p holds {r : p < r}."""
        return _row_masks(self.prec)

    def with_prec(self, prec) -> "Structure":
        """Same semilattice, different extra relation."""
        return Structure(self.elements, self.leq, np.asarray(prec, dtype=bool), self.join, self.bottom)

    def subset(self, labels: Iterable) -> "ElementSet":
        return ElementSet(self, mask_of(self.index(x) for x in labels))

    def set_of(self, mask: int) -> "ElementSet":
        return ElementSet(self, int(mask))


def _row_masks(rel: np.ndarray) -> np.ndarray:
    n = rel.shape[0]
    weights = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    out = (rel.astype(np.int64) * weights[None, :]).sum(axis=1).astype(np.int64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ElementSet:
    owner: Structure
    members: int

    def __post_init__(self):
        if self.members < 0 or self.members >> self.owner.n:
            raise ValueError(f"mask {self.members:#x} references elements outside the carrier")

    def __contains__(self, item) -> bool:
        i = item if isinstance(item, int) else self.owner.index(item)
        return bool(self.members >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return bits(self.members)

    def __len__(self) -> int:
        return bin(self.members).count("1")

    def __lt__(self, other: "ElementSet") -> bool:
        return self.members < other.members

    def labels(self) -> list:
        return [self.owner.elements[i] for i in self]

    def complement(self) -> "ElementSet":
        return ElementSet(self.owner, self.owner.full & ~self.members)

    def __repr__(self) -> str:
        return "{" + ", ".join(str(x) for x in self.labels()) + "}"


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------


def _closure_rt(rel: np.ndarray) -> np.ndarray:
    rel = rel.copy()
    np.fill_diagonal(rel, True)
    n = rel.shape[0]
    for k in range(n):
        rel |= rel[:, k][:, None] & rel[k, :][None, :]
    return rel


def _check_partial_order(leq: np.ndarray, elements: Sequence) -> None:
    n = leq.shape[0]
    for i in range(n):
        if not leq[i, i]:
            raise NotPartialOrder(f"leq is not reflexive at {elements[i]!r}", (elements[i],))
    for i in range(n):
        for j in range(i + 1, n):
            if leq[i, j] and leq[j, i]:
                raise NotPartialOrder(
                    f"leq is not antisymmetric: {elements[i]!r} and {elements[j]!r}",
                    (elements[i], elements[j]),
                )
    for i in range(n):
        for j in range(n):
            if not leq[i, j]:
                continue
            for k in range(n):
                if leq[j, k] and not leq[i, k]:
                    raise NotPartialOrder(
                        f"leq is not transitive: {elements[i]!r} <= {elements[j]!r} <= {elements[k]!r}",
                        (elements[i], elements[j], elements[k]),
                    )


def _compute_join(leq: np.ndarray, elements: Sequence) -> np.ndarray:
    n = leq.shape[0]
    join = np.empty((n, n), dtype=np.int64)
    for p in range(n):
        for q in range(p, n):
            ubs = np.flatnonzero(leq[p] & leq[q])
            least = [u for u in ubs if leq[u, ubs].all()]
            if not least:
                raise NoJoin(
                    f"{elements[p]!r} and {elements[q]!r} have no least upper bound",
                    (elements[p], elements[q]),
                )
            join[p, q] = join[q, p] = least[0]
    return join


def make_structure(elements, leq, prec, join=None, bottom=None) -> Structure:
    """Validate raw tables (index-based) and return an immutable Structure."""
    elements = tuple(elements)
    n = len(elements)
    if n < 1:
        raise StructureError("a structure needs at least one element")
    if n > MAX_ELEMENTS:
        raise CarrierTooLarge(f"carrier has {n} elements, limit is {MAX_ELEMENTS}")
    if len(set(elements)) != n:
        raise StructureError("element labels must be distinct")
    leq = np.asarray(leq, dtype=bool)
    prec = np.asarray(prec, dtype=bool)
    if leq.shape != (n, n) or prec.shape != (n, n):
        raise StructureError(f"relations must be {n}x{n}")
    _check_partial_order(leq, elements)
    computed = _compute_join(leq, elements)
    if join is not None:
        join = np.asarray(join, dtype=np.int64)
        if join.shape != (n, n):
            raise StructureError(f"join table must be {n}x{n}")
        bad = np.argwhere(join != computed)
        if len(bad):
            p, q = (int(x) for x in bad[0])
            raise JoinMismatch(
                f"join[{elements[p]!r}][{elements[q]!r}] disagrees with the least upper bound",
                (elements[p], elements[q]),
            )
    minima = [i for i in range(n) if leq[i].all()]
    if not minima:
        raise NoBottom("no element is below every element")
    if bottom is None:
        bottom = minima[0]
    elif bottom != minima[0]:
        raise NoBottom(f"{elements[bottom]!r} is not below every element", (elements[bottom],))
    return Structure(elements, leq, prec, computed, bottom)


def _relation(spec, elements: Sequence, index: Mapping, name: str) -> np.ndarray:
    n = len(elements)
    rel = np.zeros((n, n), dtype=bool)
    if spec is None:
        return rel
    spec = list(spec)
    is_matrix = len(spec) == n and all(
        isinstance(row, (list, tuple)) and len(row) == n and all(isinstance(v, bool) for v in row)
        for row in spec
    ) and n > 0
    if is_matrix:
        return np.array(spec, dtype=bool)
    for pair in spec:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise StructureError(f"{name}: expected a pair, got {pair!r}")
        try:
            a, b = index[_label(pair[0])], index[_label(pair[1])]
        except KeyError as exc:
            raise StructureError(f"{name}: unknown element {exc.args[0]!r}") from None
        rel[a, b] = True
    return rel


def _label(x):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise StructureError(f"labels must be strings or integers, got {x!r}")
    return str(x)


def validate_structure(raw) -> Structure:
    """Validate a structure document (mapping) or re-validate a Structure.

    Document keys: ``elements``, ``leq`` (boolean matrix or label pairs),
    ``prec`` (same forms), optional ``join`` (label table), optional
    ``bottom`` and optional ``"closure": "reflexive-transitive"``, which
    closes the ``leq`` pair list before validation.
    """
    if isinstance(raw, Structure):
        return make_structure(raw.elements, raw.leq, raw.prec, raw.join, raw.bottom)
    if not isinstance(raw, Mapping):
        raise StructureError(f"expected a mapping, got {type(raw).__name__}")
    if "elements" not in raw:
        raise StructureError("missing key 'elements'")
    elements = [_label(x) for x in raw["elements"]]
    if len(elements) > MAX_ELEMENTS:
        raise CarrierTooLarge(f"carrier has {len(elements)} elements, limit is {MAX_ELEMENTS}")
    index = {x: i for i, x in enumerate(elements)}
    if len(index) != len(elements):
        raise StructureError("element labels must be distinct")
    if "leq" not in raw:
        raise StructureError("missing key 'leq'")
    leq = _relation(raw["leq"], elements, index, "leq")
    closure = raw.get("closure")
    if closure is not None:
        if closure != "reflexive-transitive":
            raise StructureError(f"unsupported closure {closure!r}")
        leq = _closure_rt(leq)
    prec = _relation(raw.get("prec"), elements, index, "prec")
    join = None
    if raw.get("join") is not None:
        table = raw["join"]
        try:
            join = [[index[_label(x)] for x in row] for row in table]
        except KeyError as exc:
            raise StructureError(f"join: unknown element {exc.args[0]!r}") from None
    bottom = None
    if raw.get("bottom") is not None:
        try:
            bottom = index[_label(raw["bottom"])]
        except KeyError:
            raise StructureError(f"bottom: unknown element {raw['bottom']!r}") from None
    return make_structure(elements, leq, prec, join, bottom)


def structure_document(S: Structure) -> dict:
    """Inverse of :func:`validate_structure`, using label-pair relations."""
    el = S.elements
    n = S.n
    return {
        "elements": list(el),
        "leq": [[el[i], el[j]] for i in range(n) for j in range(n) if S.leq[i, j]],
        "prec": [[el[i], el[j]] for i in range(n) for j in range(n) if S.prec[i, j]],
        "join": [[el[S.join[i, j]] for j in range(n)] for i in range(n)],
        "bottom": el[S.bottom],
    }


# ---------------------------------------------------------------------------
# derived sets
# ---------------------------------------------------------------------------


def down_set(S: Structure, p) -> ElementSet:
    """{r : r < p}"""
    i = p if isinstance(p, int) else S.index(p)
    return ElementSet(S, int(S.prec_down_masks[i]))


def up_set(S: Structure, p) -> ElementSet:
    """{r : p < r}"""
    i = p if isinstance(p, int) else S.index(p)
    return ElementSet(S, int(S.prec_up_masks[i]))


def up_closure(S: Structure, mask: int) -> int:
    out = 0
    for i in bits(mask):
        out |= int(S.up_masks[i])
    return out


def down_closure(S: Structure, mask: int) -> int:
    out = 0
    for i in bits(mask):
        out |= int(S.down_masks[i])
    return out


def prec_up_closure(S: Structure, mask: int) -> int:
    """F^< = {p : some f in F has f < p}"""
    out = 0
    for i in bits(mask):
        out |= int(S.prec_up_masks[i])
    return out


# ---------------------------------------------------------------------------
# predicates; all take either an ElementSet or a raw mask
# ---------------------------------------------------------------------------


def _mask(S: Structure, F) -> int:
    if isinstance(F, ElementSet):
        if F.owner is not S and F.owner != S:
            raise ValueError("element set belongs to a different structure")
        return F.members
    return int(F)


def is_up_closed(S: Structure, F) -> bool:
    m = _mask(S, F)
    return all(int(S.up_masks[p]) & ~m == 0 for p in bits(m))


def is_filter(S: Structure, F) -> bool:
    """Up-closed, and every pair of members has a lower bound inside."""
    m = _mask(S, F)
    if not is_up_closed(S, m):
        return False
    members = list(bits(m))
    down = S.down_masks
    for k, p in enumerate(members):
        for q in members[k:]:
            if int(down[p]) & int(down[q]) & m == 0:
                return False
    return True


def is_ideal(S: Structure, I) -> bool:
    """Down-closed and closed under binary joins."""
    m = _mask(S, I)
    if any(int(S.down_masks[p]) & ~m for p in bits(m)):
        return False
    members = list(bits(m))
    J = S.join
    return all(m >> int(J[p, q]) & 1 for k, p in enumerate(members) for q in members[k + 1 :])


def is_prime_filter(S: Structure, P) -> bool:
    m = _mask(S, P)
    return is_filter(S, m) and is_ideal(S, S.full & ~m)


def is_round_filter(S: Structure, R) -> bool:
    m = _mask(S, R)
    if not is_filter(S, m):
        return False
    return all(int(S.prec_down_masks[p]) & m for p in bits(m))


def is_spectrum_point(S: Structure, P) -> bool:
    """Nonempty proper round prime filter."""
    m = _mask(S, P)
    return m != 0 and m != S.full and is_round_filter(S, m) and is_prime_filter(S, m)


# ---------------------------------------------------------------------------
# closures
# ---------------------------------------------------------------------------


def generate_ideal(S: Structure, seeds) -> ElementSet:
    m = _mask(S, seeds)
    J = S.join
    while True:
        grown = down_closure(S, m)
        members = list(bits(grown))
        for k, p in enumerate(members):
            for q in members[k + 1 :]:
                grown |= 1 << int(J[p, q])
        if grown == m:
            return ElementSet(S, m)
        m = grown


def generate_filter(S: Structure, seeds) -> ElementSet:
    """Up-closure of ``seeds``; they must be directed, as no meets exist."""
    m = _mask(S, seeds)
    closed = up_closure(S, m)
    members = list(bits(m))
    down = S.down_masks
    for k, p in enumerate(members):
        for q in members[k + 1 :]:
            if int(down[p]) & int(down[q]) & closed == 0:
                raise NotDirected(
                    f"{S.elements[p]!r} and {S.elements[q]!r} have no common lower bound "
                    "in the generated up-set",
                    (S.elements[p], S.elements[q]),
                )
    return ElementSet(S, closed)


# ---------------------------------------------------------------------------
# lower preorder
# ---------------------------------------------------------------------------


def lower_preorder(S: Structure) -> tuple[np.ndarray, bool]:
    """Relation {(p, q) : p^> is contained in q^>} and whether it equals leq."""
    rel = kernels.lower_preorder_matrix(S.prec)
    return rel, bool(np.array_equal(rel, S.leq))


# ---------------------------------------------------------------------------
# helpers for tests and exemplars
# ---------------------------------------------------------------------------


def leq_pairs(S: Structure) -> list[tuple[int, int]]:
    return [(int(i), int(j)) for i, j in np.argwhere(S.leq)]


def relation_from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    rel = np.zeros((n, n), dtype=bool)
    for a, b in pairs:
        rel[a, b] = True
    return rel
