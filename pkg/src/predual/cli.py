"""Command-line front end: ``predual <verb> ...``.

Exit codes: 0 pass, 1 fail, 2 usage, parse or validation error.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

from . import io
from .axioms import BUNDLES, check_axioms, expand_bundle
from .errors import (
    DimensionMismatch,
    NotAMorphism,
    NotSober,
    NotT0,
    PredualError,
    UnknownProperty,
)
from .exemplars import (
    FAIL,
    PROPERTIES,
    SearchSpec,
    omega_plus_two,
    rational_intervals,
    sampled_verdicts,
    search,
    window_verdicts,
)
from .morphism import (
    check_morphism,
    compose,
    morphism_from_document,
    spectrum_map,
    vee_closure,
    MORPHISM_AXIOMS,
    RelMorphism,
)
from .order import MAX_ELEMENTS, Structure, structure_document, validate_structure
from .space import (
    derive_structure,
    space_from_document,
    verify_basis_axioms,
    verify_point_duality,
)
from .spectrum import enumerate_spectrum, verify_representation


class UsageError(Exception):
    pass


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_structure(path: str) -> Structure:
    return validate_structure(io.load_json(path))


def _structure_ref(ref, base: Path) -> Structure:
    if isinstance(ref, str):
        return _load_structure(str(base / ref))
    return validate_structure(ref)


def _load_morphism(path: str) -> RelMorphism:
    doc = io.load_json(path)
    if not isinstance(doc, dict) or "source" not in doc or "target" not in doc:
        raise UsageError(f"{path}: morphism document needs 'source', 'target' and 'pairs'")
    base = Path(path).parent
    S = _structure_ref(doc["source"], base)
    T = _structure_ref(doc["target"], base)
    return morphism_from_document(doc, S, T)


def _morphism_document(M: RelMorphism) -> dict:
    return {
        "source": structure_document(M.source),
        "target": structure_document(M.target),
        "pairs": [list(p) for p in M.pair_labels()],
    }


def _write_dot(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    S = _load_structure(args.file)
    names = expand_bundle(args.bundle.split(",")) if args.bundle else expand_bundle(["dvp"])
    report = check_axioms(S, names)
    _write_dot(args.dot, io.structure_dot(S))
    if args.json:
        _out(io.dump_json({"passed": report.passed(), **report.to_json()}))
    else:
        _out("\n".join(report.lines()))
        _out("result: " + ("pass" if report.passed() else "FAIL"))
    return 0 if report.passed() else 1


def cmd_spectrum(args) -> int:
    S = _load_structure(args.file)
    sp = enumerate_spectrum(S)
    _write_dot(args.dot, io.specialization_dot(sp.topology, "spectrum"))
    if args.json:
        _out(io.dump_json(sp.to_json()))
    else:
        _out(f"points: {len(sp.points)}")
        for k in range(len(sp.points)):
            _out(f"  P{k} = {sp.point_label(k)}")
        for i, x in enumerate(S.elements):
            pts = ",".join(f"P{k}" for k in range(len(sp.points)) if sp.basic_opens[i] >> k & 1)
            _out(f"  basic open {x}: {{{pts}}}")
    return 0


def cmd_dualize(args) -> int:
    X = space_from_document(io.load_json(args.file))
    S = derive_structure(X)
    _write_dot(args.dot, io.structure_dot(S, "dual"))
    _out(io.dump_json(structure_document(S)))
    return 0


def cmd_roundtrip(args) -> int:
    X = space_from_document(io.load_json(args.file))
    checks: list[tuple[str, bool, str]] = []
    axioms, _ = verify_basis_axioms(X)
    for name, ok in axioms.checks.items():
        checks.append((f"axiom {name}", ok, axioms.details.get(name, "")))
    try:
        duality = verify_point_duality(X)
        for name, ok in duality.checks.items():
            checks.append((f"point map {name}", ok, duality.details.get(name, "")))
    except (NotT0, NotSober) as exc:
        checks.append((f"point map ({type(exc).__name__})", False, str(exc)))
    rep = verify_representation(X.structure)
    checks.append(("order represented by inclusion", rep.order_holds, repr(rep.order_violations[:1])))
    checks.append(("extra relation represented by way-below", rep.prec_holds, repr(rep.prec_violations[:1])))
    _write_dot(args.dot, io.specialization_dot(X, "space"))
    failed = [c for c in checks if not c[1]]
    if args.json:
        _out(io.dump_json({
            "passed": not failed,
            "checks": {name: ok for name, ok, _ in checks},
            "first_failure": failed[0][0] if failed else None,
        }))
    else:
        for name, ok, detail in checks:
            _out(f"{name}: {'pass' if ok else 'FAIL'}" + (f" {detail}" if not ok and detail else ""))
        _out("result: " + ("pass" if not failed else f"FAIL ({failed[0][0]})"))
    return 0 if not failed else 1


def cmd_morphism(args) -> int:
    sub = args.sub
    files = args.files
    need = 2 if sub == "compose" else 1
    if len(files) != need:
        raise UsageError(f"morphism {sub} takes {need} file(s), got {len(files)}")
    if sub == "check":
        M = _load_morphism(files[0])
        report = check_morphism(M)
        ok = report.passed(MORPHISM_AXIOMS)
        if args.json:
            _out(io.dump_json({"is_morphism": ok, **report.to_json()}))
        else:
            _out("\n".join(report.lines()))
            _out("result: " + ("pass" if ok else "FAIL"))
        return 0 if ok else 1
    if sub == "compose":
        a, b = _load_morphism(files[0]), _load_morphism(files[1])
        _out(io.dump_json(_morphism_document(compose(a, b))))
        return 0
    M = _load_morphism(files[0])
    if sub == "vee":
        _out(io.dump_json(_morphism_document(vee_closure(M))))
        return 0
    try:
        phi = spectrum_map(M)
    except NotAMorphism as exc:
        _out(f"not a morphism: {exc.axiom} fails, witness {exc.witness!r}")
        return 1
    _out(io.dump_json(phi.to_json()))
    return 0 if phi.continuous else 1


def cmd_search(args) -> int:
    bound = args.max_size if args.max_size is not None else 4
    if not 1 <= bound <= MAX_ELEMENTS:
        raise UsageError(f"--max-size must lie in 1..{MAX_ELEMENTS}")
    spec = SearchSpec(args.property, bound, args.seed, args.budget, not args.sampled)
    outcome = search(spec)
    if args.json:
        _out(io.dump_json(outcome.to_json()))
    else:
        _out(outcome.render())
    return 1 if outcome.status == "witness" else 0


def cmd_exemplar(args) -> int:
    name = args.name
    if name in ("omega-A", "omega-B"):
        L = omega_plus_two(name[-1])
    elif name == "intervals":
        L = rational_intervals(args.denominator, args.width)
    else:
        raise UsageError(f"unknown exemplar {name!r} (omega-A, omega-B, intervals)")
    k = args.window
    if name == "intervals" and k is None:
        k = len(L.codes)
    k = 3 if k is None else k
    lines: list[str] = [f"exemplar: {L.name}", f"window: {k}"]
    result: dict = {"exemplar": L.name, "window": k}
    codes = L.window_codes(k)
    failed = False
    if name == "intervals" and len(codes) > MAX_ELEMENTS:
        tallies = sampled_verdicts(L, codes, args.samples, args.seed)
        result["sampled"] = {
            axiom: {"verdict": t.verdict, "pass": t.passed, "fail": t.failed, "unknown": t.unknown}
            for axiom, t in tallies.items()
        }
        for axiom, t in tallies.items():
            lines.append(f"{axiom}: {t.verdict} (pass {t.passed}, fail {t.failed}, unknown {t.unknown})")
            failed |= t.verdict == FAIL
    else:
        S = L.window(k)
        verdicts = window_verdicts(S)
        result["elements"] = list(S.elements)
        result["verdicts"] = {a: {"verdict": v, "witness": list(w)} for a, (v, w) in verdicts.items()}
        lines.append("elements: " + " ".join(S.elements))
        for axiom, (v, w) in verdicts.items():
            lines.append(f"{axiom}: {v}" + (f" {w!r}" if w else ""))
            failed |= v == FAIL
        _write_dot(args.dot, io.structure_dot(S, L.name))
    if args.json:
        _out(io.dump_json(result))
    else:
        _out("\n".join(lines))
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="predual", description=__doc__.splitlines()[0])
    verbs = parser.add_subparsers(dest="verb", required=True)

    def common(p, dot=True):
        p.add_argument("--json", action="store_true", help="emit JSON")
        if dot:
            p.add_argument("--dot", metavar="PATH", help="write a Graphviz DOT file")

    p = verbs.add_parser("check", help="check axioms of a structure")
    p.add_argument("file")
    p.add_argument("--bundle", help="comma-separated axioms or bundles: " + ", ".join(BUNDLES))
    common(p)
    p.set_defaults(func=cmd_check)

    p = verbs.add_parser("spectrum", help="enumerate the spectrum of a structure")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = verbs.add_parser("dualize", help="structure of a finite space with a basis")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_dualize)

    p = verbs.add_parser("roundtrip", help="check that a finite space is recovered from its basis")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_roundtrip)

    p = verbs.add_parser("morphism", help="relational morphisms")
    p.add_argument("sub", choices=("check", "compose", "spectrum-map", "vee"))
    p.add_argument("files", nargs="+")
    common(p, dot=False)
    p.set_defaults(func=cmd_morphism)

    p = verbs.add_parser("search", help="search for counterexamples")
    p.add_argument("property", help="one of: " + ", ".join(PROPERTIES))
    p.add_argument("--max-size", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int)
    p.add_argument("--sampled", action="store_true", help="random sampling instead of enumeration")
    common(p, dot=False)
    p.set_defaults(func=cmd_search)

    p = verbs.add_parser("exemplar", help="windowed checks of an infinite exemplar")
    p.add_argument("name", help="omega-A, omega-B or intervals")
    p.add_argument("--window", type=int)
    p.add_argument("--denominator", type=int, default=1)
    p.add_argument("--width", type=int, default=3)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_exemplar)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (io.DocumentError, UsageError, UnknownProperty, DimensionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PredualError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
