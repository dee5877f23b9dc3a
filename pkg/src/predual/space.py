"""Finite spaces with a designated union-closed basis, and the passage from a
space to its structure (basis, inclusion, way-below)."""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .axioms import check_axioms, AxiomReport
from .errors import NotABasis, NotATopology, NotSober, NotT0
from .order import ElementSet, Structure, bits, make_structure
from .spectrum import enumerate_spectrum
from .topology import Topology, core_compact_check, sober_check, way_below

MAX_POINTS = 16
REQUIRED_AXIOMS = ("distributive", "interpolative", "auxiliary", "approximating", "join_preserving")


@dataclass(frozen=True, eq=False)
class FiniteSpace(Topology):
    basis: tuple[int, ...] | None = None

    def __post_init__(self):
        super().__post_init__()
        basis = tuple(self.basis) if self.basis is not None else self.opens
        object.__setattr__(self, "basis", basis)

    @classmethod
    def build(cls, labels: Sequence, opens, basis=None, *, check: bool = True) -> "FiniteSpace":
        X = cls(tuple(labels), tuple(opens), tuple(basis) if basis is not None else None)
        if check:
            X.validate()
        return X

    def validate(self) -> None:
        if self.m > MAX_POINTS:
            raise NotATopology(f"{self.m} points exceed the limit of {MAX_POINTS}")
        if len(set(self.labels)) != self.m:
            raise NotATopology("point labels must be distinct")
        super().validate()
        B = self.basis
        if len(set(B)) != len(B):
            raise NotABasis("basis lists a member twice")
        for b in B:
            if not self.is_open(b):
                raise NotABasis(f"basis member {self.describe(b)} is not open")
        members = set(B)
        if 0 not in members:
            raise NotABasis("basis does not contain the empty set")
        for a, b in itertools.combinations(B, 2):
            if a | b not in members:
                raise NotABasis(f"basis not closed under union: {self.describe(a)}, {self.describe(b)}")
        for O in self.opens:
            u = 0
            for b in B:
                if b & ~O == 0:
                    u |= b
            if u != O:
                raise NotABasis(f"open set {self.describe(O)} is not a union of basis members")

    @cached_property
    def structure(self) -> Structure:
        return derive_structure(self)

    def basis_labels(self) -> list[str]:
        return [self.describe(b) for b in self.basis]


def space_from_document(doc: Mapping) -> FiniteSpace:
    """Parse ``{"points": [...], "opens": [[...]], "basis": [indices]}``."""
    if not isinstance(doc, Mapping):
        raise NotATopology("space document must be a mapping")
    try:
        labels = [str(x) for x in doc["points"]]
        raw_opens = doc["opens"]
    except KeyError as exc:
        raise NotATopology(f"missing key {exc.args[0]!r}") from None
    index = {x: i for i, x in enumerate(labels)}
    if len(index) != len(labels):
        raise NotATopology("point labels must be distinct")
    opens = []
    for O in raw_opens:
        m = 0
        for x in O:
            if str(x) not in index:
                raise NotATopology(f"unknown point {x!r}")
            m |= 1 << index[str(x)]
        opens.append(m)
    basis = None
    if doc.get("basis") is not None:
        try:
            basis = [opens[i] for i in doc["basis"]]
        except (IndexError, TypeError):
            raise NotABasis("basis must list indices into 'opens'") from None
    return FiniteSpace.build(labels, opens, basis)


def space_document(X: FiniteSpace) -> dict:
    opens = list(X.opens)
    return {
        "points": list(X.labels),
        "opens": [[X.labels[i] for i in bits(O)] for O in opens],
        "basis": [opens.index(b) for b in X.basis],
    }


def derive_structure(X: FiniteSpace) -> Structure:
    """Basis members ordered by inclusion, with way-below as extra relation."""
    B = X.basis
    k = len(B)
    pos = {b: i for i, b in enumerate(B)}
    leq = np.array([[a & ~b == 0 for b in B] for a in B], dtype=bool).reshape(k, k)
    prec = np.array([[way_below(X, a, b) for b in B] for a in B], dtype=bool).reshape(k, k)
    join = np.array([[pos[a | b] for b in B] for a in B], dtype=np.int64).reshape(k, k)
    return make_structure(X.basis_labels(), leq, prec, join, pos[0])


def point_filter(X: FiniteSpace, x) -> ElementSet:
    """Basis members containing the point ``x``."""
    i = x if isinstance(x, int) else X.labels.index(str(x))
    S = X.structure
    m = 0
    for k, b in enumerate(X.basis):
        if b >> i & 1:
            m |= 1 << k
    return ElementSet(S, m)


# ---------------------------------------------------------------------------
# duality checks
# ---------------------------------------------------------------------------


@dataclass
class DualityReport:
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def first_failure(self) -> str | None:
        return next((name for name, ok in self.checks.items() if not ok), None)


def verify_point_duality(X: FiniteSpace) -> DualityReport:
    """x -> S_x is a bijection onto the spectrum carrying basis members to basic opens."""
    sober = sober_check(X)
    if not sober.is_t0:
        raise NotT0("space is not T0")
    if not sober.is_sober:
        raise NotSober("space is not sober")
    report = DualityReport()
    report.checks["core_compact"] = core_compact_check(X)
    S = X.structure
    sp = enumerate_spectrum(S)
    filters = [point_filter(X, x).members for x in range(X.m)]
    report.checks["injective"] = len(set(filters)) == X.m
    index = {P.members: k for k, P in enumerate(sp.points)}
    images = [index.get(f) for f in filters]
    report.checks["lands_in_spectrum"] = all(k is not None for k in images)
    report.checks["surjective"] = set(images) == set(range(len(sp.points)))
    opens_match = True
    if report.checks["lands_in_spectrum"]:
        for s, b in enumerate(X.basis):
            image = 0
            for x in bits(b):
                image |= 1 << images[x]
            if image != sp.basic_opens[s]:
                opens_match = False
                report.details["opens_match"] = f"basis member {X.describe(b)} maps to a different set"
                break
    else:
        opens_match = False
    report.checks["opens_match"] = opens_match
    return report


def verify_basis_axioms(X: FiniteSpace) -> tuple[DualityReport, AxiomReport]:
    axioms = check_axioms(X.structure, REQUIRED_AXIOMS)
    report = DualityReport({name: axioms.verdicts[name] for name in REQUIRED_AXIOMS})
    for name in axioms.failures:
        report.details[name] = f"witness {axioms.witnesses[name]!r}"
    return report, axioms


# ---------------------------------------------------------------------------
# enumeration of small spaces
# ---------------------------------------------------------------------------


def up_sets(rel: np.ndarray) -> list[int]:
    """Up-sets of a preorder given as a boolean matrix, ascending."""
    m = rel.shape[0]
    ups = [sum(1 << j for j in range(m) if rel[i, j]) for i in range(m)]
    out = []
    for mask in range(1 << m):
        if all(ups[i] & ~mask == 0 for i in bits(mask)):
            out.append(mask)
    return out


def alexandrov_space(rel: np.ndarray, labels: Sequence | None = None) -> FiniteSpace:
    m = rel.shape[0]
    labels = list(labels) if labels is not None else [f"x{i}" for i in range(m)]
    return FiniteSpace.build(labels, up_sets(rel))


def partial_orders(m: int) -> Iterator[np.ndarray]:
    """Every partial order on m labelled points, as boolean matrices."""
    pairs = [(i, j) for i in range(m) for j in range(m) if i != j]
    for choice in range(1 << len(pairs)):
        rel = np.eye(m, dtype=bool)
        for k in bits(choice):
            rel[pairs[k]] = True
        if np.any(rel & rel.T & ~np.eye(m, dtype=bool)):
            continue
        ri = rel.astype(np.int64)
        if np.any(((ri @ ri) > 0) & ~rel):
            continue
        yield rel


def random_partial_order(m: int, rng: np.random.Generator, density: float = 0.4) -> np.ndarray:
    perm = rng.permutation(m)
    rel = np.eye(m, dtype=bool)
    for a in range(m):
        for b in range(a + 1, m):
            if rng.random() < density:
                rel[perm[a], perm[b]] = True
    for k in range(m):
        rel |= rel[:, k][:, None] & rel[k, :][None, :]
    return rel


def union_bases(X: Topology) -> Iterator[tuple[int, ...]]:
    """Every union-closed basis of X containing the empty set.

    A basis must contain each minimal neighbourhood, so only families that
    include those are tried.
    """
    required = {0} | set(X.minimal_neighbourhoods)
    optional = [O for O in X.opens if O not in required]
    for choice in range(1 << len(optional)):
        fam = sorted(required | {optional[i] for i in bits(choice)})
        members = set(fam)
        if any(a | b not in members for a, b in itertools.combinations(fam, 2)):
            continue
        ok = True
        for O in X.opens:
            u = 0
            for b in fam:
                if b & ~O == 0:
                    u |= b
            if u != O:
                ok = False
                break
        if ok:
            yield tuple(fam)
