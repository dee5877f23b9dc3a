"""Named small structures and exhaustive enumeration of small lattices.

A finite join-semilattice with a bottom is a lattice, so enumerating the
structures of a given size means enumerating lattices up to isomorphism.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from functools import lru_cache

import numpy as np

from .order import Structure, make_structure

MIDDLE_LABELS = "xyzwvutsrqponmlkjihgfedcba"


def _labels(n: int) -> list[str]:
    if n == 1:
        return ["0"]
    return ["0", *MIDDLE_LABELS[: n - 2], "1"]


def _build(labels, leq: np.ndarray, prec) -> Structure:
    if prec is None or (isinstance(prec, str) and prec == "leq"):
        prec = leq
    return make_structure(labels, leq, np.asarray(prec, dtype=bool))


def chain(n: int, prec=None) -> Structure:
    leq = np.triu(np.ones((n, n), dtype=bool))
    return _build(_labels(n), leq, prec)


def one_point(prec=None) -> Structure:
    return chain(1, prec)


def s2(prec=None) -> Structure:
    return _build(["0", "a"], np.triu(np.ones((2, 2), dtype=bool)), prec)


def c3(prec=None) -> Structure:
    return _build(["0", "a", "1"], np.triu(np.ones((3, 3), dtype=bool)), prec)


def _bounded(n: int, strict: list[tuple[int, int]], close: bool = True) -> np.ndarray:
    """Bottom 0, top n-1, given strict pairs among the middle."""
    leq = np.eye(n, dtype=bool)
    leq[0, :] = True
    leq[:, n - 1] = True
    for a, b in strict:
        leq[a, b] = True
    if close:
        for k in range(n):
            leq |= leq[:, k][:, None] & leq[k, :][None, :]
    return leq


def m3(prec=None) -> Structure:
    return _build(_labels(5), _bounded(5, []), prec)


def n5(prec=None) -> Structure:
    # 0 < x < y < 1 and 0 < z < 1
    return _build(_labels(5), _bounded(5, [(1, 2)]), prec)


def boolean(k: int, prec=None) -> Structure:
    """Subsets of a k-set ordered by inclusion."""
    n = 1 << k
    leq = np.array([[a & ~b == 0 for b in range(n)] for a in range(n)], dtype=bool).reshape(n, n)
    labels = ["{" + ",".join(str(i) for i in range(k) if a >> i & 1) + "}" for a in range(n)]
    return _build(labels, leq, prec)


NAMED = {
    "one": one_point,
    "s2": s2,
    "c3": c3,
    "m3": m3,
    "n5": n5,
    "b4": lambda prec=None: boolean(2, prec),
}


# ---------------------------------------------------------------------------
# lattices up to isomorphism
# ---------------------------------------------------------------------------


def _has_joins(leq: np.ndarray) -> bool:
    n = leq.shape[0]
    for a in range(n):
        for b in range(a + 1, n):
            ub = leq[a] & leq[b]
            # the least upper bound is the upper bound below every other one
            if not any(ub[c] and np.all(leq[c] | ~ub) for c in range(n)):
                return False
    return True


def _key(leq: np.ndarray, perm: tuple[int, ...]) -> bytes:
    idx = np.array(perm)
    return np.packbits(leq[np.ix_(idx, idx)]).tobytes()


def _canonical_key(leq: np.ndarray) -> bytes:
    n = leq.shape[0]
    middle = range(1, n - 1)
    return min(_key(leq, (0, *p, n - 1)) for p in itertools.permutations(middle))


@lru_cache(maxsize=None)
def _lattice_matrices(n: int) -> tuple[np.ndarray, ...]:
    if n <= 2:
        return (np.triu(np.ones((n, n), dtype=bool)),)
    pairs = [(a, b) for a in range(1, n - 1) for b in range(a + 1, n - 1)]
    seen: dict[bytes, np.ndarray] = {}
    for choice in range(1 << len(pairs)):
        strict = [pairs[k] for k in range(len(pairs)) if choice >> k & 1]
        leq = _bounded(n, strict, close=False)
        if not np.array_equal(leq, _bounded(n, strict)):
            continue
        if not _has_joins(leq):
            continue
        key = _canonical_key(leq)
        if key not in seen:
            leq.setflags(write=False)
            seen[key] = leq
    ordered = sorted(seen.items(), key=lambda kv: (int(kv[1].sum()), kv[0]))
    return tuple(m for _, m in ordered)


def lattices(n: int, prec=None) -> Iterator[Structure]:
    """Every lattice with n elements up to isomorphism, fewest comparabilities first."""
    if n < 1:
        raise ValueError("n must be positive")
    for leq in _lattice_matrices(n):
        yield _build(_labels(n), leq, prec)


def count_lattices(n: int) -> int:
    return len(_lattice_matrices(n))


# ---------------------------------------------------------------------------
# auxiliary relations
# ---------------------------------------------------------------------------


def auxiliary_relations(S: Structure) -> Iterator[np.ndarray]:
    """Every relation contained in <= that is closed under p <= p' < q' <= q.

    These are the up-sets of the comparable pairs under the order
    (p', q') below (p, q) iff p <= p' and q' <= q.  Yielded in a fixed order,
    the empty relation first.
    """
    L = S.leq
    pairs = [(int(a), int(b)) for a, b in np.argwhere(L)]
    k = len(pairs)
    # above[i]: pairs forced once pair i is in
    above = []
    for a, b in pairs:
        m = 0
        for j, (c, d) in enumerate(pairs):
            if L[c, a] and L[b, d]:
                m |= 1 << j
        above.append(m)

    def extend(i: int, chosen: int, banned: int) -> Iterator[int]:
        if i == k:
            yield chosen
            return
        if chosen >> i & 1 or banned >> i & 1:
            yield from extend(i + 1, chosen, banned)
            return
        # leave pair i out: everything below it must stay out too
        below = sum(1 << j for j in range(k) if above[j] >> i & 1)
        if below & chosen == 0:
            yield from extend(i + 1, chosen, banned | below)
        if above[i] & banned == 0:
            yield from extend(i + 1, chosen | above[i], banned)

    for mask in extend(0, 0, 0):
        rel = np.zeros_like(L)
        for j in range(k):
            if mask >> j & 1:
                rel[pairs[j]] = True
        yield rel
