"""Finite topologies given by an explicit family of open sets.

Point subsets are Python int bitmasks, so the number of points is unbounded
here; :class:`predual.space.FiniteSpace` adds its own cap.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .errors import NotATopology, NotOpen
from .order import bits


def union_closure(masks: Iterable[int]) -> list[int]:
    """All finite unions of ``masks`` (including the empty union), ascending."""
    closed = {0}
    frontier = set(masks)
    while frontier:
        new = set()
        for m in frontier:
            if m in closed:
                continue
            new |= {m | c for c in closed}
            closed.add(m)
        frontier = new - closed
    return sorted(closed)


@dataclass(frozen=True, eq=False)
class Topology:
    labels: tuple
    opens: tuple[int, ...]
    _open_set: frozenset = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "opens", tuple(sorted(set(self.opens))))
        object.__setattr__(self, "_open_set", frozenset(self.opens))

    @classmethod
    def from_opens(cls, labels: Sequence, opens: Iterable[int], *, check: bool = True) -> "Topology":
        T = cls(tuple(labels), tuple(opens))
        if check:
            T.validate()
        return T

    @property
    def m(self) -> int:
        return len(self.labels)

    @cached_property
    def full(self) -> int:
        return (1 << self.m) - 1

    def validate(self) -> None:
        ops = self._open_set
        if any(o < 0 or o & ~self.full for o in ops):
            raise NotATopology("an open set mentions a point outside the space")
        if 0 not in ops:
            raise NotATopology("the empty set is not open")
        if self.full not in ops:
            raise NotATopology("the whole space is not open")
        for a, b in combinations(self.opens, 2):
            if a | b not in ops:
                raise NotATopology(f"not closed under union: {self.describe(a)} and {self.describe(b)}")
            if a & b not in ops:
                raise NotATopology(f"not closed under intersection: {self.describe(a)} and {self.describe(b)}")

    def is_open(self, mask: int) -> bool:
        return mask in self._open_set

    def describe(self, mask: int) -> str:
        return "{" + ",".join(str(self.labels[i]) for i in bits(mask)) + "}"

    @cached_property
    def closed_sets(self) -> tuple[int, ...]:
        return tuple(sorted(self.full & ~o for o in self.opens))

    @cached_property
    def point_closures(self) -> tuple[int, ...]:
        """cl{x}: complement of the union of the opens missing x."""
        out = []
        for x in range(self.m):
            outside = 0
            for o in self.opens:
                if not o >> x & 1:
                    outside |= o
            out.append(self.full & ~outside)
        return tuple(out)

    @cached_property
    def minimal_neighbourhoods(self) -> tuple[int, ...]:
        out = []
        for x in range(self.m):
            nb = self.full
            for o in self.opens:
                if o >> x & 1:
                    nb &= o
            out.append(nb)
        return tuple(out)

    def specialization(self) -> list[tuple[int, int]]:
        """Pairs (x, y) with x in cl{y}."""
        cl = self.point_closures
        return [(x, y) for y in range(self.m) for x in range(self.m) if cl[y] >> x & 1]


# ---------------------------------------------------------------------------
# way-below
# ---------------------------------------------------------------------------


def covered_by_every_cover(T: Topology, U: int, V: int) -> bool:
    """Every directed family of opens covering V has a member containing U.

    A finite directed family contains its own union, so the members that
    matter are exactly the opens containing V.
    """
    return all(U & ~O == 0 for O in T.opens if V & ~O == 0)


def way_below(T: Topology, U: int, V: int) -> bool:
    if not T.is_open(U):
        raise NotOpen(f"{T.describe(U)} is not open")
    if not T.is_open(V):
        raise NotOpen(f"{T.describe(V)} is not open")
    result = covered_by_every_cover(T, U, V)
    # finite spaces: compact containment is plain containment
    assert result == (U & ~V == 0), "way-below disagrees with inclusion on a finite space"
    return result


def way_below_bruteforce(T: Topology, U: int, V: int, limit: int = 16) -> bool:
    """Quantify over every subfamily of opens and every finite subfamily of it."""
    opens = T.opens
    if len(opens) > limit:
        raise ValueError(f"{len(opens)} opens exceed the brute-force limit {limit}")
    k = len(opens)
    for fam in range(1 << k):
        members = [opens[i] for i in bits(fam)]
        union = 0
        for o in members:
            union |= o
        if V & ~union:
            continue
        found = False
        for sub in range(1 << len(members)):
            u = 0
            for i in bits(sub):
                u |= members[i]
            if U & ~u == 0:
                found = True
                break
        if not found:
            return False
    return True


def is_compact(T: Topology, C: int) -> bool:
    """Every cover of C by opens has a finite subcover (C need not be open)."""
    return covered_by_every_cover(T, C, C)


# ---------------------------------------------------------------------------
# sobriety and core compactness
# ---------------------------------------------------------------------------


@dataclass
class SoberReport:
    irreducibles: list[int]
    generic_points: dict[int, tuple[int, ...]]
    is_sober: bool
    is_t0: bool

    def failures(self) -> dict[int, tuple[int, ...]]:
        return {C: pts for C, pts in self.generic_points.items() if len(pts) != 1}


def _is_irreducible(C: int, closed: Sequence[int]) -> bool:
    # the proper closed subsets form an ideal iff their union is still proper
    if C == 0:
        return False
    union = 0
    for A in closed:
        if A != C and A & ~C == 0:
            union |= A
    return union != C


def sober_check(T: Topology) -> SoberReport:
    T.validate()
    closed = T.closed_sets
    cl = T.point_closures
    irreducibles = [C for C in closed if _is_irreducible(C, closed)]
    generic = {C: tuple(x for x in range(T.m) if cl[x] == C) for C in irreducibles}
    is_t0 = len(set(cl)) == T.m
    is_sober = all(len(pts) == 1 for pts in generic.values())
    return SoberReport(irreducibles, generic, is_sober, is_t0)


def core_compact_check(T: Topology) -> bool:
    """Each neighbourhood filter is round for way-below."""
    T.validate()
    for x in range(T.m):
        nbhds = [O for O in T.opens if O >> x & 1]
        for O in nbhds:
            if not any(way_below(T, U, O) for U in nbhds):
                return False
    return True
