"""The spectrum of proper round prime filters and its topology."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property

from . import kernels
from .axioms import check_axioms, find_violation, PREDOMAIN
from .errors import (
    BadInput,
    CarrierTooLarge,
    HypothesesFail,
    HypothesisWarning,
    NoExtension,
    NotPrec,
)
from .order import (
    MAX_ELEMENTS,
    ElementSet,
    Structure,
    bits,
    generate_ideal,
    is_ideal,
    is_prime_filter,
    is_round_filter,
    mask_of,
    up_closure,
    _mask,
)
from .topology import Topology, is_compact, sober_check, union_closure, way_below


@dataclass
class SpectrumResult:
    structure: Structure
    points: list[ElementSet]
    basic_opens: list[int]
    opens: list[int] = field(default_factory=list)

    @property
    def point_masks(self) -> list[int]:
        return [P.members for P in self.points]

    def basic_open(self, p) -> int:
        i = p if isinstance(p, int) else self.structure.index(p)
        return self.basic_opens[i]

    def point_label(self, k: int) -> str:
        return "{" + ",".join(str(x) for x in self.points[k].labels()) + "}"

    @cached_property
    def topology(self) -> Topology:
        return Topology([self.point_label(k) for k in range(len(self.points))], self.opens)

    def index_of(self, P) -> int | None:
        m = P.members if isinstance(P, ElementSet) else int(P)
        for k, Q in enumerate(self.points):
            if Q.members == m:
                return k
        return None

    def points_containing_all(self, mask: int) -> int:
        """Point-index set of the points containing every element of ``mask``."""
        out = 0
        for k, P in enumerate(self.points):
            if P.members & mask == mask:
                out |= 1 << k
        return out

    def to_json(self) -> dict:
        S = self.structure
        return {
            "points": [P.labels() for P in self.points],
            "basic_opens": {S.elements[i]: list(bits(m)) for i, m in enumerate(self.basic_opens)},
        }


def enumerate_spectrum(S: Structure) -> SpectrumResult:
    if S.n > MAX_ELEMENTS:
        raise CarrierTooLarge(f"carrier has {S.n} elements, limit is {MAX_ELEMENTS}")
    masks = kernels.spectrum_masks(S.n, S.up_masks, S.down_masks, S.join, S.prec_down_masks)
    points = [ElementSet(S, int(m)) for m in masks]
    basic = []
    for p in range(S.n):
        b = 0
        for k, m in enumerate(masks):
            if int(m) >> p & 1:
                b |= 1 << k
        basic.append(b)
    return SpectrumResult(S, points, basic, union_closure(basic))


def spectrum_bruteforce(S: Structure) -> list[int]:
    """Reference enumeration through the scalar predicates, for small carriers."""
    out = []
    for m in range(1, S.full):
        if is_round_filter(S, m) and is_prime_filter(S, m):
            out.append(m)
    return out


# ---------------------------------------------------------------------------
# prime filter extension
# ---------------------------------------------------------------------------


def _warn_hypotheses(S: Structure, names, what: str) -> list[str]:
    failing = [name for name in names if find_violation(S, name) is not None]
    if failing:
        warnings.warn(
            f"{what}: hypotheses fail ({', '.join(failing)}); running anyway",
            HypothesisWarning,
            stacklevel=3,
        )
    return failing


def extend_to_prime(S: Structure, I, F) -> ElementSet:
    """Extend round filter F to a proper round prime filter avoiding ideal I.

    The maximal ideal is grown greedily in element order: an element joins
    J when the ideal generated by J and it stays disjoint from F.  A single
    pass is enough, since later growth of J only shrinks the candidates.
    """
    i_mask, f_mask = _mask(S, I), _mask(S, F)
    if not is_ideal(S, i_mask):
        raise BadInput("I is not an ideal")
    if not is_round_filter(S, f_mask):
        raise BadInput("F is not a round filter")
    if f_mask == 0:
        raise BadInput("F is empty")
    if i_mask & f_mask:
        raise BadInput("I and F intersect")
    if f_mask >> S.bottom & 1:
        raise BadInput("F contains the bottom element, so no proper extension exists")
    _warn_hypotheses(S, ("distributive", "auxiliary"), "extend_to_prime")
    J = i_mask
    for x in range(S.n):
        if J >> x & 1:
            continue
        grown = generate_ideal(S, J | 1 << x).members
        if grown & f_mask == 0:
            J = grown
    P = S.full & ~J
    ok = P != S.full and is_round_filter(S, P) and is_prime_filter(S, P)
    if not ok:
        raise NoExtension(
            "the complement of the maximal ideal is not a proper round prime filter",
            ideal=ElementSet(S, J),
        )
    return ElementSet(S, P)


def extensions_bruteforce(S: Structure, I, F) -> list[int]:
    """All spectrum points containing F and disjoint from I."""
    i_mask, f_mask = _mask(S, I), _mask(S, F)
    return [m for m in spectrum_bruteforce(S) if m & f_mask == f_mask and m & i_mask == 0]


# ---------------------------------------------------------------------------
# compact interpolants and core compactness
# ---------------------------------------------------------------------------


@dataclass
class Interpolant:
    chain: list[int]
    filter: ElementSet
    points: int
    lower: int
    upper: int
    compact: bool

    @property
    def sandwiched(self) -> bool:
        return self.lower & ~self.points == 0 and self.points & ~self.upper == 0


def interpolation_chain(S: Structure, p: int, q: int) -> list[int]:
    """q = c_0 > c_1 > ... with p < c_k throughout, stopping at a repeat."""
    P = S.prec
    chain = [q]
    while True:
        last = chain[-1]
        nxt = next((s for s in range(S.n) if P[p, s] and P[s, last]), None)
        if nxt is None:
            raise HypothesesFail(f"no interpolant between {S.elements[p]!r} and {S.elements[last]!r}")
        if nxt in chain:
            return chain
        chain.append(nxt)


def compact_interpolant(S: Structure, p, q, spectrum: SpectrumResult | None = None) -> Interpolant:
    p = p if isinstance(p, int) else S.index(p)
    q = q if isinstance(q, int) else S.index(q)
    if not S.prec[p, q]:
        raise NotPrec(f"{S.elements[p]!r} is not below {S.elements[q]!r} for the extra relation")
    failing = [n for n in ("distributive", "auxiliary", "interpolative") if find_violation(S, n) is not None]
    if failing:
        raise HypothesesFail("compact_interpolant needs " + ", ".join(failing), failing)
    sp = spectrum if spectrum is not None else enumerate_spectrum(S)
    chain = interpolation_chain(S, p, q)
    F = up_closure(S, mask_of(chain))
    assert is_round_filter(S, F), "interpolation chain did not give a round filter"
    C = sp.points_containing_all(F)
    T = sp.topology
    return Interpolant(chain, ElementSet(S, F), C, sp.basic_opens[p], sp.basic_opens[q], is_compact(T, C))


def core_compact_via_interpolants(S: Structure, spectrum: SpectrumResult | None = None) -> bool:
    """Every P in a basic open of p sits in the compact set between some q < p and p."""
    sp = spectrum if spectrum is not None else enumerate_spectrum(S)
    for k, P in enumerate(sp.points):
        for p in P:
            ok = False
            for q in P:
                if S.prec[q, p]:
                    C = compact_interpolant(S, q, p, sp)
                    if C.compact and C.sandwiched and sp.basic_opens[q] >> k & 1:
                        ok = True
                        break
            if not ok:
                return False
    return True


# ---------------------------------------------------------------------------
# representation of <= and < on the spectrum
# ---------------------------------------------------------------------------


@dataclass
class RepresentationReport:
    hypotheses: dict[str, bool]
    order_violations: list[tuple]
    prec_violations: list[tuple]

    @property
    def order_holds(self) -> bool:
        return not self.order_violations

    @property
    def prec_holds(self) -> bool:
        return not self.prec_violations

    @property
    def ok(self) -> bool:
        return self.order_holds and self.prec_holds


def verify_representation(S: Structure, spectrum: SpectrumResult | None = None) -> RepresentationReport:
    """Compare p <= q with inclusion and p < q with way-below of basic opens."""
    sp = spectrum if spectrum is not None else enumerate_spectrum(S)
    report = check_axioms(S, PREDOMAIN + ("distributive",))
    T = sp.topology
    B = sp.basic_opens
    order_bad, prec_bad = [], []
    for p in range(S.n):
        for q in range(S.n):
            if bool(S.leq[p, q]) != (B[p] & ~B[q] == 0):
                order_bad.append((S.elements[p], S.elements[q]))
            if bool(S.prec[p, q]) != way_below(T, B[p], B[q]):
                prec_bad.append((S.elements[p], S.elements[q]))
    return RepresentationReport(dict(report.verdicts), order_bad, prec_bad)


def spectrum_sober(S: Structure) -> bool:
    rep = sober_check(enumerate_spectrum(S).topology)
    return rep.is_sober and rep.is_t0
