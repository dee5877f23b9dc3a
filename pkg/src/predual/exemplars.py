"""Random structures, windowed infinite exemplars and counterexample search."""

from __future__ import annotations

import itertools
import json
from collections.abc import Callable, Hashable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .axioms import AXIOMS, PREDOMAIN, find_violation, is_predomain
from .catalog import auxiliary_relations, lattices
from .errors import UnknownProperty
from .order import (
    MAX_ELEMENTS,
    Structure,
    bits,
    is_ideal,
    is_round_filter,
    make_structure,
    structure_document,
)
from .spectrum import enumerate_spectrum, extensions_bruteforce
from .topology import sober_check

PASS, FAIL, UNKNOWN = "PASS", "FAIL", "UNKNOWN"

# a violation of these is a genuine failure of the whole structure
UNIVERSAL = ("prec_transitive", "auxiliary", "join_preserving")
# these need a witness that may sit outside the window
EXISTENTIAL = ("distributive", "interpolative", "strong_distributive")


# ---------------------------------------------------------------------------
# lazily described structures
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LazyStructure:
    """A possibly infinite structure given by decidable predicates on codes."""

    name: str
    label: Callable[[Hashable], str]
    leq: Callable[[Hashable, Hashable], bool]
    prec: Callable[[Hashable, Hashable], bool]
    join: Callable[[Hashable, Hashable], Hashable]
    bottom: Hashable
    window_codes: Callable[[int], list]
    codes: tuple = ()

    def window(self, k: int) -> Structure:
        codes = self.closed_codes(k)
        pos = {c: i for i, c in enumerate(codes)}
        n = len(codes)
        leq = np.array([[self.leq(a, b) for b in codes] for a in codes], dtype=bool).reshape(n, n)
        prec = np.array([[self.prec(a, b) for b in codes] for a in codes], dtype=bool).reshape(n, n)
        join = np.array([[pos[self.join(a, b)] for b in codes] for a in codes], dtype=np.int64).reshape(n, n)
        return make_structure([self.label(c) for c in codes], leq, prec, join, pos[self.bottom])

    def closed_codes(self, k: int) -> list:
        """The first k codes plus the bottom, closed under joins, in first-seen order."""
        codes = list(dict.fromkeys([self.bottom, *self.window_codes(k)]))
        seen = set(codes)
        i = 0
        while i < len(codes):
            for j in range(i + 1):
                c = self.join(codes[i], codes[j])
                if c not in seen:
                    seen.add(c)
                    codes.append(c)
            i += 1
        if len(codes) > MAX_ELEMENTS:
            raise ValueError(f"window({k}) of {self.name} has {len(codes)} elements")
        return sorted(codes, key=codes.index)


# ω + 2 ----------------------------------------------------------------------

OMEGA = 1 << 62
OMEGA_PLUS_ONE = OMEGA + 1


def _ordinal_label(c: int) -> str:
    if c == OMEGA:
        return "w"
    if c == OMEGA_PLUS_ONE:
        return "w+1"
    return str(c)


def omega_plus_two(variant: str = "A") -> LazyStructure:
    """The chain 0 < 1 < ... < w < w+1; variant B drops w < w from the extra relation."""
    variant = variant.upper()
    if variant not in ("A", "B"):
        raise ValueError("variant must be 'A' or 'B'")

    def prec(a, b):
        if variant == "B" and a == b == OMEGA:
            return False
        return a <= b

    def window_codes(k: int) -> list[int]:
        return [*range(k), OMEGA, OMEGA_PLUS_ONE]

    return LazyStructure(
        name=f"omega+2/{variant}",
        label=_ordinal_label,
        leq=lambda a, b: a <= b,
        prec=prec,
        join=max,
        bottom=0,
        window_codes=window_codes,
    )


def claimed_points(variant: str, k: int) -> dict[str, int]:
    """Generator of each window spectrum point -> ordinal of the represented point.

    Variant A represents the basis (w+3) minus {w} of w+2 with opens the
    initial segments, variant B the whole open-set lattice of w+1.  The point
    x of the space corresponds to the principal filter of the least basis
    member containing it.
    """
    pts = {str(p): p - 1 for p in range(1, k)}
    if variant.upper() == "A":
        pts["w"] = OMEGA
        pts["w+1"] = OMEGA_PLUS_ONE
    else:
        pts["w+1"] = OMEGA
    return pts


@dataclass
class WindowSpectrumCheck:
    generators: list[str]
    is_chain: bool
    matches_claim: bool


def check_window_spectrum(variant: str, k: int) -> WindowSpectrumCheck:
    """Spectrum points are principal, ordered as a chain like the claimed points."""
    S = omega_plus_two(variant).window(k)
    sp = enumerate_spectrum(S)
    T = sp.topology
    gens = []
    for P in sp.points:
        least = [p for p in P if all(S.leq[p, q] for q in P)]
        principal = len(least) == 1 and all(S.leq[least[0], q] == (q in P) for q in range(S.n))
        gens.append(S.elements[least[0]] if principal else None)
    spec = T.specialization()
    m = len(sp.points)
    rel = {(x, y) for x, y in spec}
    is_chain = all((x, y) in rel or (y, x) in rel for x in range(m) for y in range(m))
    claim = claimed_points(variant, k)
    matches = None not in gens and sorted(gens) == sorted(claim)
    if matches:
        # x in cl{y} iff y <= x among the represented points
        for x in range(m):
            for y in range(m):
                if ((x, y) in rel) != (claim[gens[y]] <= claim[gens[x]]):
                    matches = False
    return WindowSpectrumCheck(gens, is_chain, bool(matches))


# rational intervals ----------------------------------------------------------


Intervals = tuple[tuple[Fraction, Fraction], ...]


def normalize(intervals) -> Intervals:
    """Sorted disjoint open intervals; overlapping ones are merged, touching ones kept."""
    items = sorted((Fraction(a), Fraction(b)) for a, b in intervals if Fraction(a) < Fraction(b))
    out: list[list[Fraction]] = []
    for a, b in items:
        if out and a < out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


def union(p: Intervals, q: Intervals) -> Intervals:
    return normalize(p + q)


def contained(p: Intervals, q: Intervals) -> bool:
    return all(any(c <= a and b <= d for c, d in q) for a, b in p)


def closure(p: Intervals) -> tuple[tuple[Fraction, Fraction], ...]:
    """Closed intervals of the closure, touching pieces merged."""
    out: list[list[Fraction]] = []
    for a, b in p:
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


def compactly_contained(p: Intervals, q: Intervals) -> bool:
    """The closure of p lies inside q."""
    return all(any(c < a and b < d for c, d in q) for a, b in closure(p))


def interval_label(p: Intervals) -> str:
    if not p:
        return "{}"
    return "U".join(f"({a},{b})" for a, b in p)


def all_interval_sets(denominator: int, width: int) -> list[Intervals]:
    """Every union of open intervals with endpoints in {i/d : 0 <= i <= width*d}.

    Ordered by number of pieces, then endpoints.
    """
    grid = [Fraction(i, denominator) for i in range(width * denominator + 1)]
    segs = len(grid) - 1
    out = set()
    # each unit segment is in or out; each interior grid point between two
    # included segments is in (merged) or out (touching pieces)
    for inc in range(1 << segs):
        joints = [i for i in range(1, segs) if inc >> (i - 1) & 1 and inc >> i & 1]
        for fill in range(1 << len(joints)):
            merged = {joints[j] for j in range(len(joints)) if fill >> j & 1}
            pieces: list[list[Fraction]] = []
            for s in range(segs):
                if not inc >> s & 1:
                    continue
                if pieces and s in merged:
                    pieces[-1][1] = grid[s + 1]
                else:
                    pieces.append([grid[s], grid[s + 1]])
            out.add(tuple((a, b) for a, b in pieces))
    return sorted(out, key=lambda p: (len(p), p))


def rational_intervals(denominator: int = 1, width: int = 3) -> LazyStructure:
    if denominator < 1 or width < 1:
        raise ValueError("caps must be positive")
    codes = all_interval_sets(denominator, width)

    def window_codes(k: int) -> list:
        return codes[:k]

    return LazyStructure(
        name=f"intervals/{denominator}/{width}",
        label=interval_label,
        leq=contained,
        prec=compactly_contained,
        join=union,
        bottom=(),
        window_codes=window_codes,
        codes=tuple(codes),
    )


# ---------------------------------------------------------------------------
# three-valued window verdicts
# ---------------------------------------------------------------------------


def window_verdicts(S: Structure, names: Sequence[str] = AXIOMS) -> dict[str, tuple[str, tuple]]:
    """PASS, FAIL or UNKNOWN per axiom on a window of a larger structure.

    A violation of a universal axiom inside the window is a genuine failure.
    An existential axiom that fails in the window may have its witness
    outside, so it is UNKNOWN.  Approximating is split: its forward half is
    universal, its backward half existential.
    """
    out = {}
    for name in names:
        if name == "approximating":
            w = find_violation(S, "approximating_forward")
            if w is not None:
                out[name] = (FAIL, tuple(S.elements[i] for i in w))
                continue
            w = find_violation(S, name)
            out[name] = (PASS, ()) if w is None else (UNKNOWN, tuple(S.elements[i] for i in w))
            continue
        w = find_violation(S, name)
        if w is None:
            out[name] = (PASS, ())
        elif name in UNIVERSAL:
            out[name] = (FAIL, tuple(S.elements[i] for i in w if i >= 0))
        else:
            out[name] = (UNKNOWN, tuple(S.elements[i] for i in w if i >= 0))
    return out


@dataclass
class SampleTally:
    passed: int = 0
    failed: int = 0
    unknown: int = 0
    first_failure: tuple | None = None

    @property
    def verdict(self) -> str:
        if self.failed:
            return FAIL
        return UNKNOWN if self.unknown else PASS


def sampled_verdicts(L: LazyStructure, codes: Sequence, samples: int, seed: int = 0) -> dict[str, SampleTally]:
    """Check sampled tuples of ``codes`` directly through the predicates.

    Existential witnesses are searched among ``codes`` only; a tuple without
    one counts as unknown.
    """
    rng = np.random.default_rng(seed)
    codes = list(codes)
    n = len(codes)
    le, pr, jn = L.leq, L.prec, L.join
    tallies = {name: SampleTally() for name in ("auxiliary", "join_preserving", "interpolative", "approximating")}

    def pick(k):
        return [codes[i] for i in rng.integers(n, size=k)]

    def note(name, ok, tup):
        t = tallies[name]
        if ok is True:
            t.passed += 1
        elif ok is False:
            t.failed += 1
            if t.first_failure is None:
                t.first_failure = tuple(L.label(c) for c in tup)
        else:
            t.unknown += 1

    for _ in range(samples):
        p, pp, qq, q = pick(4)
        hyp = le(p, pp) and pr(pp, qq) and le(qq, q)
        note("auxiliary", (not hyp) or (pr(p, q) and le(p, q)), (p, pp, qq, q))
        a, b, c, d = pick(4)
        note("join_preserving", not (pr(a, b) and pr(c, d)) or pr(jn(a, c), jn(b, d)), (a, b, c, d))
        p, q = pick(2)
        if pr(p, q):
            note("interpolative", True if any(pr(p, s) and pr(s, q) for s in codes) else None, (p, q))
        else:
            note("interpolative", True, (p, q))
        p, q, r = pick(3)
        if le(p, q):
            note("approximating", not pr(r, p) or pr(r, q), (p, q, r))
        elif any(pr(s, p) and not pr(s, q) for s in codes):
            note("approximating", True, (p, q))
        else:
            note("approximating", None, (p, q))
    return tallies


# ---------------------------------------------------------------------------
# random structures
# ---------------------------------------------------------------------------


def _union_family(n: int, rng: np.random.Generator) -> list[int]:
    """A union-closed family of exactly n sets containing the empty set."""
    fam = [0]
    members = {0}
    atoms = 0
    while len(fam) < n:
        top = 0
        for f in fam:
            top |= f
        added = False
        for _ in range(8):
            base = fam[int(rng.integers(len(fam)))]
            extra = int(rng.integers(1, 1 << max(atoms, 1))) & ((1 << atoms) - 1) if atoms else 0
            if rng.random() < 0.5:
                extra |= 1 << atoms
            cand = base | extra
            if cand in members:
                continue
            new = {cand} | {cand | f for f in fam}
            new -= members
            if len(fam) + len(new) <= n:
                uses_fresh = any(m >> atoms & 1 for m in new)
                fam.extend(sorted(new))
                members |= new
                atoms += uses_fresh
                added = True
                break
        if not added:
            # a fresh top always adds exactly one set
            cand = top | 1 << atoms
            atoms += 1
            fam.append(cand)
            members.add(cand)
    return fam


PREC_MODES = ("subset", "transitive", "leq", "arbitrary")


def gen_structure(n: int, seed: int, prec: str = "subset", density: float = 0.7) -> Structure:
    """A random structure of size n, deterministic per (n, seed, prec).

    The carrier is a random union-closed family of sets ordered by inclusion,
    which covers every finite join-semilattice with a bottom, though not
    uniformly.  The extra relation is a random subset of the order
    ("subset"), that subset closed transitively ("transitive"), the order
    itself ("leq"), or any random relation ("arbitrary").
    """
    if not 1 <= n <= MAX_ELEMENTS:
        raise ValueError(f"n must lie in 1..{MAX_ELEMENTS}")
    if prec not in PREC_MODES:
        raise ValueError(f"prec mode must be one of {PREC_MODES}")
    rng = np.random.default_rng([n, seed])
    fam = sorted(_union_family(n, rng), key=lambda m: (bin(m).count("1"), m))
    pos = {m: i for i, m in enumerate(fam)}
    leq = np.array([[a & ~b == 0 for b in fam] for a in fam], dtype=bool).reshape(n, n)
    join = np.array([[pos[a | b] for b in fam] for a in fam], dtype=np.int64).reshape(n, n)
    if prec == "leq":
        P = leq.copy()
    elif prec == "arbitrary":
        P = rng.random((n, n)) < density / 2
    else:
        P = leq & (rng.random((n, n)) < density)
        if prec == "transitive":
            for k in range(n):
                P |= P[:, k][:, None] & P[k, :][None, :]
    return make_structure([str(i) for i in range(n)], leq, P, join, 0)


# ---------------------------------------------------------------------------
# counterexample search
# ---------------------------------------------------------------------------

PROPERTIES = {
    "prime-extension-failure": "prime filter extension fails without distributivity",
    "finite-predomain-with-strict-prec": "finite predomain whose extra relation differs from the order",
    "unsober-spectrum": "spectrum that is not sober",
}
ALIASES = {
    "a": "prime-extension-failure",
    "b": "finite-predomain-with-strict-prec",
    "c": "unsober-spectrum",
}


@dataclass(frozen=True)
class SearchSpec:
    property: str
    bound: int = 4
    seed: int = 0
    budget: int | None = None
    exhaustive: bool = True


@dataclass
class SearchOutcome:
    status: str  # "witness", "exhausted" or "budget-spent"
    checked: int
    witness: Structure | None = None
    detail: dict = field(default_factory=dict)
    transcript: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "checked": self.checked,
            "witness": structure_document(self.witness) if self.witness is not None else None,
            "detail": self.detail,
            "transcript": self.transcript,
        }

    def render(self) -> str:
        return "\n".join(self.transcript) + "\n"


def _canonical_property(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in PROPERTIES:
        raise UnknownProperty(f"unknown property {name!r}; known: {', '.join(PROPERTIES)}")
    return name


def _labelled(S: Structure, mask: int) -> list[str]:
    return [S.elements[i] for i in bits(mask)]


def _extension_failure(S: Structure) -> dict | None:
    """Least (round filter, nonempty ideal) pair with no extension."""
    ideals = [m for m in range(1, S.full + 1) if is_ideal(S, m)]
    filters = [m for m in range(1, S.full + 1) if not m >> S.bottom & 1 and is_round_filter(S, m)]
    for F in filters:
        for I in ideals:
            if I & F == 0 and not extensions_bruteforce(S, I, F):
                return {"filter": _labelled(S, F), "ideal": _labelled(S, I)}
    return None


def _instances(prop: str, spec: SearchSpec) -> Iterator[tuple[int, Structure]]:
    if prop == "prime-extension-failure":
        for n in range(1, spec.bound + 1):
            for S in lattices(n):
                yield n, S
    elif prop == "finite-predomain-with-strict-prec":
        for n in range(1, spec.bound + 1):
            for S in lattices(n):
                for R in auxiliary_relations(S):
                    yield n, S.with_prec(R)
    else:
        if spec.exhaustive:
            for n in range(1, spec.bound + 1):
                for S in lattices(n):
                    k = S.n * S.n
                    for code in range(1 << k):
                        P = np.array([(code >> i) & 1 for i in range(k)], dtype=bool).reshape(S.n, S.n)
                        yield n, S.with_prec(P)
        else:
            for t in itertools.count():
                n = 1 + t % spec.bound
                yield n, gen_structure(n, spec.seed * 1_000_003 + t, prec="arbitrary")


def search(spec: SearchSpec) -> SearchOutcome:
    prop = _canonical_property(spec.property)
    budget = spec.budget
    if budget is None and not spec.exhaustive and prop == "unsober-spectrum":
        budget = 10_000
    mode = "exhaustive" if spec.exhaustive or prop != "unsober-spectrum" else "sampled"
    log = [
        f"property: {prop}",
        f"bound: {spec.bound}",
        f"seed: {spec.seed}",
        f"budget: {budget if budget is not None else 'none'}",
        f"mode: {mode}",
    ]
    checked = 0
    per_size: dict[int, int] = {}

    def finish(status: str, witness=None, detail=None) -> SearchOutcome:
        for n in sorted(per_size):
            log.append(f"size {n}: {per_size[n]} instances")
        log.append(f"checked: {checked}")
        log.append(f"status: {status}")
        if witness is not None:
            log.append("witness: " + json.dumps(structure_document(witness), sort_keys=True))
            for key, value in (detail or {}).items():
                log.append(f"{key}: {json.dumps(value)}")
        return SearchOutcome(status, checked, witness, detail or {}, log)

    for n, S in _instances(prop, spec):
        if budget is not None and checked >= budget:
            return finish("exhausted" if mode == "sampled" else "budget-spent")
        checked += 1
        per_size[n] = per_size.get(n, 0) + 1
        if prop == "prime-extension-failure":
            if find_violation(S, "auxiliary") is not None or find_violation(S, "distributive") is None:
                continue
            detail = _extension_failure(S)
            if detail is not None:
                return finish("witness", S, detail)
        elif prop == "finite-predomain-with-strict-prec":
            if is_predomain(S) and not np.array_equal(S.prec, S.leq):
                return finish("witness", S, {"axioms": list(PREDOMAIN)})
        else:
            rep = sober_check(enumerate_spectrum(S).topology)
            if not (rep.is_sober and rep.is_t0):
                return finish("witness", S, {"failures": {str(k): list(v) for k, v in rep.failures().items()}})
    return finish("exhausted")
