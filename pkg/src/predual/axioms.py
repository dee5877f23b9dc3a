"""Axiom predicates on the extra relation of a structure.

Each axiom is decided by a kernel (see :mod:`predual.kernels`) returning the
lexicographically least violating tuple.  :func:`violates` re-checks such a
tuple with plain scalar code, independent of the kernels.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

from . import kernels
from .order import Structure

AXIOMS = (
    "prec_transitive",
    "auxiliary",
    "distributive",
    "interpolative",
    "approximating",
    "join_preserving",
    "strong_distributive",
)

PREDOMAIN = ("auxiliary", "approximating", "interpolative", "join_preserving")

# witness layout per axiom, used in reports
WITNESS_VARIABLES = {
    "prec_transitive": ("p", "q", "r"),
    "auxiliary": ("p", "p'", "q'", "q"),
    "distributive": ("p", "s", "t", "p'"),
    "interpolative": ("p", "q"),
    "approximating": ("p", "q"),
    "join_preserving": ("p'", "p", "q'", "q"),
    "strong_distributive": ("p", "s", "t", "p'"),
}

BUNDLES = {
    "predomain": PREDOMAIN,
    "dvp": PREDOMAIN + ("distributive",),
    "all": AXIOMS,
}


@dataclass
class AxiomReport:
    """Verdict per axiom plus one labelled counterexample per failure."""

    verdicts: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, tuple] = field(default_factory=dict)
    indices: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def passed(self, names: Iterable[str] | None = None) -> bool:
        names = self.verdicts if names is None else names
        return all(self.verdicts[name] for name in names)

    @property
    def failures(self) -> list[str]:
        return [name for name, ok in self.verdicts.items() if not ok]

    @property
    def is_predomain(self) -> bool:
        return self.passed(PREDOMAIN)

    def lines(self) -> list[str]:
        out = []
        for name, ok in self.verdicts.items():
            if ok:
                out.append(f"{name}: pass")
            else:
                out.append(f"{name}: FAIL witness {self.witnesses[name]!r}")
        return out

    def to_json(self) -> dict:
        return {
            "verdicts": dict(self.verdicts),
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
        }


def find_violation(S: Structure, name: str) -> tuple[int, ...] | None:
    if name not in AXIOMS and name != "approximating_forward":
        raise KeyError(f"unknown axiom {name!r}")
    return kernels.axiom_witness(name, S.leq, S.prec, S.join)


def holds(S: Structure, name: str) -> bool:
    return find_violation(S, name) is None


def is_prec_transitive(S: Structure) -> bool:
    return holds(S, "prec_transitive")


def is_auxiliary(S: Structure) -> bool:
    return holds(S, "auxiliary")


def is_distributive(S: Structure) -> bool:
    return holds(S, "distributive")


def is_interpolative(S: Structure) -> bool:
    return holds(S, "interpolative")


def is_approximating(S: Structure) -> bool:
    return holds(S, "approximating")


def is_join_preserving(S: Structure) -> bool:
    return holds(S, "join_preserving")


def is_strong_distributive(S: Structure) -> bool:
    return holds(S, "strong_distributive")


def is_predomain(S: Structure) -> bool:
    return all(holds(S, name) for name in PREDOMAIN)


def expand_bundle(names: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    for name in names:
        for item in BUNDLES.get(name, (name,)):
            if item not in AXIOMS:
                raise KeyError(f"unknown axiom {item!r}")
            if item not in out:
                out.append(item)
    return tuple(out)


def witness_labels(S: Structure, idx: tuple[int, ...]) -> tuple:
    return tuple(S.elements[i] for i in idx if i >= 0)


def check_axioms(S: Structure, names: Iterable[str] = AXIOMS) -> AxiomReport:
    report = AxiomReport()
    for name in expand_bundle(names):
        w = find_violation(S, name)
        report.verdicts[name] = w is None
        if w is not None:
            report.indices[name] = w
            report.witnesses[name] = witness_labels(S, w)
    return report


# ---------------------------------------------------------------------------
# scalar re-check of a single witness tuple
# ---------------------------------------------------------------------------


def violates(S: Structure, name: str, idx: tuple[int, ...]) -> bool:
    """True when ``idx`` is a genuine counterexample to ``name`` in ``S``."""
    L, P, J = S.leq, S.prec, S.join
    n = S.n
    rng = range(n)
    if name == "prec_transitive":
        p, q, r = idx
        return bool(P[p, q] and P[q, r] and not P[p, r])
    if name == "auxiliary":
        p, pp, qq, q = idx
        hyp = L[p, pp] and P[pp, qq] and L[qq, q]
        return bool(hyp and not (P[p, q] and L[p, q]))
    if name == "distributive":
        p, s, t, pp = idx
        if not (P[p, J[s, t]] and P[pp, p]):
            return False
        return not any(
            P[ss, s] and P[tt, t] and L[pp, J[ss, tt]] and L[J[ss, tt], p] for ss in rng for tt in rng
        )
    if name == "interpolative":
        p, q = idx
        return bool(P[p, q]) and not any(P[p, s] and P[s, q] for s in rng)
    if name == "approximating":
        p, q = idx
        sub = all(P[r, q] for r in rng if P[r, p])
        return bool(L[p, q]) != sub
    if name == "join_preserving":
        a, b, c, d = idx
        return bool(P[a, b] and P[c, d] and not P[J[a, c], J[b, d]])
    if name == "strong_distributive":
        p, s, t = idx[:3]
        pp = idx[3] if len(idx) > 3 else -1

        def approximated(x):
            return any(
                P[ss, s] and P[tt, t] and P[x, J[ss, tt]] and P[J[ss, tt], p] for ss in rng for tt in rng
            )

        if pp >= 0:
            return bool(L[p, J[s, t]] and P[pp, p]) and not approximated(pp)
        return not L[p, J[s, t]] and all(approximated(x) for x in rng if P[x, p])
    raise KeyError(f"unknown axiom {name!r}")
