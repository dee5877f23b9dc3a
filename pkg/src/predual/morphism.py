"""Relational morphisms between structures, their spectrum maps, and partial
continuous maps between finite spaces."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .axioms import AxiomReport, is_predomain, PREDOMAIN, check_axioms
from .errors import (
    DimensionMismatch,
    HypothesesFail,
    ImageNotPoint,
    NotAMorphism,
    NotContinuous,
)
from .order import ElementSet, Structure, bits, is_spectrum_point
from .space import FiniteSpace, point_filter
from .spectrum import SpectrumResult, enumerate_spectrum
from .topology import covered_by_every_cover, way_below

MORPHISM_AXIOMS = ("faithful", "auxiliary", "pushforward", "vee_pullback")
OPTIONAL_AXIOMS = ("left_interpolation", "vee_preserving", "total")
ALL_CONDITIONS = MORPHISM_AXIOMS + OPTIONAL_AXIOMS

CONDITION_VARIABLES = {
    "faithful": ("p",),
    "auxiliary": ("p", "q", "q'", "p'"),
    "pushforward": ("p", "q", "r'", "s'"),
    "vee_pullback": ("p", "q", "r'", "s'"),
    "left_interpolation": ("p", "p'"),
    "vee_preserving": ("q", "r", "p'"),
    "total": ("p", "q"),
}

# which slots of a witness tuple index the target carrier
_TARGET_SLOTS = {
    "faithful": (),
    "auxiliary": (2, 3),
    "pushforward": (2, 3),
    "vee_pullback": (2, 3),
    "left_interpolation": (1,),
    "vee_preserving": (2,),
    "total": (),
}


@dataclass(frozen=True, eq=False)
class RelMorphism:
    source: Structure
    target: Structure
    pairs: np.ndarray

    def __post_init__(self):
        R = np.array(self.pairs, dtype=bool)
        if R.shape != (self.source.n, self.target.n):
            raise DimensionMismatch(
                f"relation has shape {R.shape}, carriers need {(self.source.n, self.target.n)}"
            )
        R.setflags(write=False)
        object.__setattr__(self, "pairs", R)

    def __eq__(self, other):
        if not isinstance(other, RelMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and np.array_equal(self.pairs, other.pairs)
        )

    def __hash__(self):
        return hash(self.pairs.tobytes())

    @classmethod
    def from_pairs(cls, source: Structure, target: Structure, pairs) -> "RelMorphism":
        idx = [(source.index(p), target.index(q)) for p, q in pairs]
        R = np.zeros((source.n, target.n), dtype=bool)
        for i, j in idx:
            R[i, j] = True
        return cls(source, target, R)

    @classmethod
    def identity(cls, S: Structure) -> "RelMorphism":
        return cls(S, S, S.leq)

    @classmethod
    def empty(cls, S: Structure, T: Structure) -> "RelMorphism":
        return cls(S, T, np.zeros((S.n, T.n), dtype=bool))

    def image(self, P) -> int:
        """P^R = {p' : p R p' for some p in P}, as a target mask."""
        m = P.members if isinstance(P, ElementSet) else int(P)
        out = 0
        rows = self.row_masks
        for p in bits(m):
            out |= rows[p]
        return out

    @cached_property
    def row_masks(self) -> list[int]:
        return [sum(1 << j for j in np.flatnonzero(row)) for row in self.pairs]

    def pair_labels(self) -> list[tuple]:
        s, t = self.source.elements, self.target.elements
        return [(s[i], t[j]) for i, j in zip(*np.nonzero(self.pairs))]

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.pair_labels()]}


def morphism_from_document(doc: Mapping, source: Structure, target: Structure) -> RelMorphism:
    try:
        pairs = [(str(a), str(b)) for a, b in doc["pairs"]]
    except (KeyError, TypeError, ValueError):
        raise NotAMorphism("morphism document needs a 'pairs' list of [p, p'] entries") from None
    try:
        return RelMorphism.from_pairs(source, target, pairs)
    except KeyError as exc:
        raise NotAMorphism(f"unknown element {exc.args[0]!r}") from None


# ---------------------------------------------------------------------------
# the morphism conditions
# ---------------------------------------------------------------------------


def _first(mask: np.ndarray) -> tuple[int, ...] | None:
    hit = np.argwhere(mask)
    if len(hit) == 0:
        return None
    return tuple(int(v) for v in hit[0])


def _bmm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.int64) @ b.astype(np.int64)) > 0


def _violation(M: RelMorphism, name: str) -> tuple[int, ...] | None:
    S, T, R = M.source, M.target, M.pairs
    P, L, J = S.prec, S.leq, S.join
    P2, L2, J2 = T.prec, T.leq, T.join
    if name == "faithful":
        bad = R[:, T.bottom].copy()
        bad[S.bottom] = False
        return _first(bad)
    if name == "auxiliary":
        # p <= q R q' <= p'  and not p R p'
        hyp = L[:, :, None, None] & R[None, :, :, None] & L2[None, None, :, :]
        return _first(hyp & ~R[:, None, None, :])
    if name == "pushforward":
        hyp = P[:, :, None, None] & R[None, :, :, None] & R[None, :, None, :]
        # exists q': p R q' < r', s'
        conc = np.einsum("pq,qr,qs->prs", R.astype(np.int64), P2.astype(np.int64), P2.astype(np.int64)) > 0
        return _first(hyp & ~conc[:, None, :, :])
    if name == "vee_pullback":
        hyp = P[:, :, None, None] & R[:, J2][None]
        below = P[:, J]  # below[p, r, s] = p < r v s
        conc = np.einsum("prs,ra,sb->pab", below.astype(np.int64), R.astype(np.int64), R.astype(np.int64)) > 0
        return _first(hyp & ~conc[:, None, :, :])
    if name == "left_interpolation":
        return _first(R & ~_bmm(P, R))
    if name == "vee_preserving":
        # q R p' and r R p' but not (q v r) R p'
        hyp = R[:, None, :] & R[None, :, :]
        return _first(hyp & ~R[J])
    if name == "total":
        return _first(P & ~R.any(axis=1)[:, None])
    raise KeyError(f"unknown morphism condition {name!r}")


def violates_condition(M: RelMorphism, name: str, idx: tuple[int, ...]) -> bool:
    """Scalar re-check of one witness tuple."""
    S, T, R = M.source, M.target, M.pairs
    P, L, J = S.prec, S.leq, S.join
    P2, L2, J2 = T.prec, T.leq, T.join
    src, tgt = range(S.n), range(T.n)
    if name == "faithful":
        (p,) = idx
        return bool(R[p, T.bottom]) and p != S.bottom
    if name == "auxiliary":
        p, q, qq, pp = idx
        return bool(L[p, q] and R[q, qq] and L2[qq, pp] and not R[p, pp])
    if name == "pushforward":
        p, q, r, s = idx
        if not (P[p, q] and R[q, r] and R[q, s]):
            return False
        return not any(R[p, x] and P2[x, r] and P2[x, s] for x in tgt)
    if name == "vee_pullback":
        p, q, r, s = idx
        if not (P[p, q] and R[q, J2[r, s]]):
            return False
        return not any(R[a, r] and R[b, s] and P[p, J[a, b]] for a in src for b in src)
    if name == "left_interpolation":
        p, pp = idx
        return bool(R[p, pp]) and not any(P[p, q] and R[q, pp] for q in src)
    if name == "vee_preserving":
        q, r, pp = idx
        return bool(R[q, pp] and R[r, pp] and not R[J[q, r], pp])
    if name == "total":
        p, q = idx
        return bool(P[p, q]) and not R[p].any()
    raise KeyError(f"unknown morphism condition {name!r}")


def _labels(M: RelMorphism, name: str, idx: tuple[int, ...]) -> tuple:
    tslots = _TARGET_SLOTS[name]
    return tuple(
        (M.target if k in tslots else M.source).elements[i] for k, i in enumerate(idx)
    )


def check_morphism(M: RelMorphism, names=ALL_CONDITIONS) -> AxiomReport:
    report = AxiomReport()
    for name in names:
        w = _violation(M, name)
        report.verdicts[name] = w is None
        if w is not None:
            report.indices[name] = w
            report.witnesses[name] = _labels(M, name, w)
    return report


def is_morphism(M: RelMorphism) -> bool:
    return all(_violation(M, name) is None for name in MORPHISM_AXIOMS)


def _require_morphism(M: RelMorphism) -> None:
    for name in MORPHISM_AXIOMS:
        w = _violation(M, name)
        if w is not None:
            raise NotAMorphism(
                f"{name} fails at {_labels(M, name, w)!r}", axiom=name, witness=_labels(M, name, w)
            )


# ---------------------------------------------------------------------------
# composition and the join closure
# ---------------------------------------------------------------------------


def compose(a: RelMorphism, b: RelMorphism, *, self_check: bool = True) -> RelMorphism:
    """p (a;b) p'' iff p a p' b p'' for some p'."""
    if a.target.n != b.source.n or a.target != b.source:
        raise DimensionMismatch("target of the first relation is not the source of the second")
    out = RelMorphism(a.source, b.target, _bmm(a.pairs, b.pairs))
    if self_check and all(is_predomain(S) for S in (a.source, a.target, b.target)):
        if is_morphism(a) and is_morphism(b):
            assert is_morphism(out), "composite of morphisms failed the morphism conditions"
    return out


def join_closure(S: Structure, mask: int) -> int:
    """Joins of all finite subsets of ``mask``, the empty join included."""
    J = S.join
    closed = 1 << S.bottom
    frontier = [x for x in bits(mask)]
    while frontier:
        x = frontier.pop()
        if closed >> x & 1:
            continue
        new = [int(J[x, y]) for y in bits(closed)]
        closed |= 1 << x
        frontier.extend(v for v in new if not closed >> v & 1)
    return closed


def vee_closure(M: RelMorphism) -> RelMorphism:
    """p R_v p' iff p < VF for some finite F related to p'."""
    S, T, R = M.source, M.target, M.pairs
    out = np.zeros_like(R)
    for j in range(T.n):
        joins = join_closure(S, sum(1 << i for i in np.flatnonzero(R[:, j])))
        cols = list(bits(joins))
        out[:, j] = S.prec[:, cols].any(axis=1)
    V = RelMorphism(S, T, out)
    if is_predomain(S) and is_morphism(M):
        W = _vee_once(V)
        assert np.array_equal(W, out), "join closure is not idempotent"
    return V


def _vee_once(M: RelMorphism) -> np.ndarray:
    S, R = M.source, M.pairs
    out = np.zeros_like(R)
    for j in range(M.target.n):
        cols = list(bits(join_closure(S, sum(1 << i for i in np.flatnonzero(R[:, j])))))
        out[:, j] = S.prec[:, cols].any(axis=1)
    return out


def is_vee_morphism(M: RelMorphism) -> bool:
    return is_morphism(M) and np.array_equal(vee_closure(M).pairs, M.pairs)


# ---------------------------------------------------------------------------
# spectrum maps
# ---------------------------------------------------------------------------


@dataclass
class SpectrumMap:
    morphism: RelMorphism
    source: SpectrumResult
    target: SpectrumResult
    mapping: dict[int, int]
    continuous: bool

    @property
    def domain(self) -> int:
        return sum(1 << k for k in self.mapping)

    def preimage(self, target_points: int) -> int:
        return sum(1 << k for k, v in self.mapping.items() if target_points >> v & 1)

    def to_json(self) -> dict:
        return {
            "mapping": [
                {"from": self.source.points[k].labels(), "to": self.target.points[v].labels()}
                for k, v in sorted(self.mapping.items())
            ],
            "undefined": [
                self.source.points[k].labels() for k in range(len(self.source.points)) if k not in self.mapping
            ],
            "continuous": self.continuous,
        }


def spectrum_map(
    M: RelMorphism,
    source: SpectrumResult | None = None,
    target: SpectrumResult | None = None,
) -> SpectrumMap:
    """P -> P^R on the points where the image is nonempty."""
    _require_morphism(M)
    sp = source if source is not None else enumerate_spectrum(M.source)
    tp = target if target is not None else enumerate_spectrum(M.target)
    index = {Q.members: k for k, Q in enumerate(tp.points)}
    mapping = {}
    for k, P in enumerate(sp.points):
        img = M.image(P)
        if img == 0:
            continue
        if not is_spectrum_point(M.target, img):
            raise ImageNotPoint(f"image of point {sp.point_label(k)} is not a spectrum point")
        mapping[k] = index[img]
    phi = SpectrumMap(M, sp, tp, mapping, True)
    for j in range(M.target.n):
        expected = 0
        for i in np.flatnonzero(M.pairs[:, j]):
            expected |= sp.basic_opens[i]
        if phi.preimage(tp.basic_opens[j]) != expected:
            phi.continuous = False
            break
    return phi


# ---------------------------------------------------------------------------
# partial continuous maps between finite spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PartialMap:
    source: FiniteSpace
    target: FiniteSpace
    assignment: tuple[tuple[int, int], ...]

    def __post_init__(self):
        items = self.assignment.items() if isinstance(self.assignment, Mapping) else self.assignment
        object.__setattr__(self, "assignment", tuple(sorted((int(a), int(b)) for a, b in items)))

    @cached_property
    def table(self) -> dict[int, int]:
        return dict(self.assignment)

    @property
    def domain(self) -> int:
        return sum(1 << x for x in self.table)

    def preimage(self, mask: int) -> int:
        return sum(1 << x for x, y in self.table.items() if mask >> y & 1)

    def validate(self) -> None:
        if not self.source.is_open(self.domain):
            raise NotContinuous(f"domain {self.source.describe(self.domain)} is not open")
        for b in self.target.basis:
            pre = self.preimage(b)
            if not self.source.is_open(pre):
                raise NotContinuous(
                    f"preimage of {self.target.describe(b)} is {self.source.describe(pre)}, not open"
                )

    def is_continuous(self) -> bool:
        try:
            self.validate()
        except NotContinuous:
            return False
        return True

    def then(self, other: "PartialMap") -> "PartialMap":
        """other after self."""
        t = other.table
        return PartialMap(self.source, other.target, {x: t[y] for x, y in self.table.items() if y in t})

    @classmethod
    def identity(cls, X: FiniteSpace) -> "PartialMap":
        return cls(X, X, {x: x for x in range(X.m)})


def morphism_of_map(phi: PartialMap) -> RelMorphism:
    """p R p' iff p is compactly contained in the preimage of p'."""
    phi.validate()
    X, Y = phi.source, phi.target
    R = np.zeros((len(X.basis), len(Y.basis)), dtype=bool)
    for j, b in enumerate(Y.basis):
        pre = phi.preimage(b)
        for i, a in enumerate(X.basis):
            R[i, j] = way_below(X, a, pre)
    return RelMorphism(X.structure, Y.structure, R)


# ---------------------------------------------------------------------------
# functor laws
# ---------------------------------------------------------------------------


@dataclass
class LawReport:
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks[name] = self.checks.get(name, True) and ok
        if not ok and detail and name not in self.details:
            self.details[name] = detail


def check_spectrum_functor(a: RelMorphism, b: RelMorphism, report: LawReport | None = None) -> LawReport:
    """phi of the composite equals the composite of the phis, domains included."""
    report = report if report is not None else LawReport()
    sa, sb, sc = (enumerate_spectrum(S) for S in (a.source, a.target, b.target))
    ab = compose(a, b)
    f, g, h = spectrum_map(a, sa, sb), spectrum_map(b, sb, sc), spectrum_map(ab, sa, sc)
    expected = {k: g.mapping[v] for k, v in f.mapping.items() if v in g.mapping}
    report.record("spectrum_functor", h.mapping == expected, f"{h.mapping} != {expected}")
    report.record("spectrum_continuous", f.continuous and g.continuous and h.continuous)
    return report


def check_map_composition(phi: PartialMap, psi: PartialMap, report: LawReport | None = None) -> LawReport:
    report = report if report is not None else LawReport()
    left = morphism_of_map(phi.then(psi))
    right = compose(morphism_of_map(phi), morphism_of_map(psi), self_check=False)
    report.record("map_composition", np.array_equal(left.pairs, right.pairs))
    return report


def check_point_naturality(phi: PartialMap, report: LawReport | None = None) -> LawReport:
    """S'_{phi(x)} = phi_R(S_x) for x in the domain; undefined elsewhere."""
    report = report if report is not None else LawReport()
    X, Y = phi.source, phi.target
    R = morphism_of_map(phi)
    ok = True
    for x in range(X.m):
        img = R.image(point_filter(X, x))
        if x in phi.table:
            ok &= img == point_filter(Y, phi.table[x]).members
        else:
            ok &= img == 0
    report.record("point_naturality", bool(ok))
    return report


def check_category_laws(a: RelMorphism, b: RelMorphism, c: RelMorphism | None = None,
                        report: LawReport | None = None) -> LawReport:
    report = report if report is not None else LawReport()
    ab = compose(a, b)
    report.record("composite_is_morphism", is_morphism(ab), repr(check_morphism(ab, MORPHISM_AXIOMS).witnesses))
    ia, ib = RelMorphism.identity(a.source), RelMorphism.identity(a.target)
    report.record("left_identity", np.array_equal(compose(ia, a).pairs, a.pairs))
    report.record("right_identity", np.array_equal(compose(a, ib).pairs, a.pairs))
    if c is not None:
        report.record(
            "associative",
            np.array_equal(compose(compose(a, b), c).pairs, compose(a, compose(b, c)).pairs),
        )
    return report


def verify_functor_laws(morphisms=(), maps=()) -> LawReport:
    """Run every law on composable morphism pairs and partial-map pairs."""
    report = LawReport()
    for a, b in morphisms:
        check_category_laws(a, b, report=report)
        check_spectrum_functor(a, b, report)
        vi = vee_closure(RelMorphism.identity(a.source))
        report.record("vee_identity", np.array_equal(vi.pairs, a.source.prec))
    for phi, psi in maps:
        check_map_composition(phi, psi, report)
        check_point_naturality(phi, report)
        check_point_naturality(psi, report)
    return report


def verify_vee_representation(M: RelMorphism) -> LawReport:
    """The join closure equals the relation induced by the spectrum map."""
    failing = []
    for side, S in (("source", M.source), ("target", M.target)):
        rep = check_axioms(S, PREDOMAIN + ("distributive",))
        failing += [f"{side}:{name}" for name in rep.failures]
    if failing:
        raise HypothesesFail("both structures must be distributive predomains", failing)
    sp, tp = enumerate_spectrum(M.source), enumerate_spectrum(M.target)
    phi = spectrum_map(M, sp, tp)
    T = sp.topology
    right = np.zeros_like(M.pairs)
    for i in range(M.source.n):
        for j in range(M.target.n):
            right[i, j] = covered_by_every_cover(T, sp.basic_opens[i], phi.preimage(tp.basic_opens[j]))
    left = vee_closure(M).pairs
    report = LawReport()
    diff = np.argwhere(left != right)
    detail = ""
    if len(diff):
        i, j = diff[0]
        detail = f"disagree at ({M.source.elements[i]!r}, {M.target.elements[j]!r})"
    report.record("vee_matches_spectrum", len(diff) == 0, detail)
    return report


# ---------------------------------------------------------------------------
# random morphisms
# ---------------------------------------------------------------------------


def auxiliary_closure(S: Structure, T: Structure, R0: np.ndarray) -> np.ndarray:
    return _bmm(_bmm(S.leq, R0), T.leq)


def random_morphism(
    S: Structure, T: Structure, rng: np.random.Generator, *, attempts: int = 200, density: float = 0.3
) -> RelMorphism:
    """Rejection-sample the auxiliary closure of a random seed relation.

    Seeds never relate a nonzero element to the target bottom, so Faithful
    holds by construction.  Falls back to the empty relation.
    """
    for _ in range(attempts):
        R0 = rng.random((S.n, T.n)) < density
        R0[:, T.bottom] = False
        if rng.random() < 0.8:
            R0[S.bottom, T.bottom] = True
        M = RelMorphism(S, T, auxiliary_closure(S, T, R0))
        if is_morphism(M):
            return M
    return RelMorphism.empty(S, T)


def random_partial_map(X: FiniteSpace, Y: FiniteSpace, rng: np.random.Generator,
                       *, attempts: int = 200) -> PartialMap:
    """A random continuous partial map, falling back to the empty map."""
    for _ in range(attempts):
        dom = X.opens[int(rng.integers(len(X.opens)))]
        phi = PartialMap(X, Y, {x: int(rng.integers(Y.m)) for x in bits(dom)})
        if phi.is_continuous():
            return phi
    return PartialMap(X, Y, {})

