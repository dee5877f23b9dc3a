"""Hot enumeration kernels with two interchangeable implementations.

Every kernel exists twice: a loop version compiled with ``numba.njit`` and a
vectorised pure-numpy version.  Both scan in the same lexicographic order and
report the same (least) witness, so results never depend on the backend.

The active backend is chosen at import time from ``PREDUAL_BACKEND``
(``numba`` or ``numpy``); numba is the default when it imports.  Use
:func:`use_backend` to switch temporarily, e.g. in benchmarks and tests.
"""

from __future__ import annotations

import contextlib
import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")
_CHUNK = 1 << 16


def _initial_backend() -> str:
    name = os.environ.get("PREDUAL_BACKEND", "").strip().lower()
    if not name:
        return "numba" if HAVE_NUMBA else "numpy"
    if name not in BACKENDS:
        raise ValueError(f"PREDUAL_BACKEND must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("PREDUAL_BACKEND=numba but numba is not importable")
    return name


_active = _initial_backend()


def get_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("numba is not available")
    _active = name


@contextlib.contextmanager
def use_backend(name: str):
    previous = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def _njit(fn):
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------------------
# spectrum scan
# ---------------------------------------------------------------------------


@_njit
def _spectrum_flags_nb(n, up, down, join, prec_down, lo, hi):
    out = np.zeros(hi - lo, dtype=np.bool_)
    full = (np.int64(1) << n) - 1
    for m in range(lo, hi):
        if m == 0 or m == full:
            continue
        ok = True
        # up-closed and round
        for p in range(n):
            if (m >> p) & 1:
                if up[p] & ~m:
                    ok = False
                    break
                if prec_down[p] & m == 0:
                    ok = False
                    break
        if not ok:
            continue
        # complement closed under joins
        for p in range(n):
            if ok and not (m >> p) & 1:
                for q in range(p + 1, n):
                    if not (m >> q) & 1 and (m >> join[p, q]) & 1:
                        ok = False
                        break
        if not ok:
            continue
        # pairwise lower bounds inside
        for p in range(n):
            if ok and (m >> p) & 1:
                for q in range(p + 1, n):
                    if (m >> q) & 1 and down[p] & down[q] & m == 0:
                        ok = False
                        break
        out[m - lo] = ok
    return out


def _spectrum_flags_np(n, up, down, join, prec_down, lo, hi):
    m = np.arange(lo, hi, dtype=np.int64)
    full = (1 << n) - 1
    ok = (m != 0) & (m != full)
    bits = [((m >> p) & 1).astype(bool) for p in range(n)]
    for p in range(n):
        good = ((m & up[p]) == up[p]) & ((m & prec_down[p]) != 0)
        ok &= ~bits[p] | good
    for p in range(n):
        for q in range(p + 1, n):
            both_out = ~bits[p] & ~bits[q]
            ok &= ~(both_out & bits[join[p, q]])
            both_in = bits[p] & bits[q]
            ok &= ~both_in | ((m & down[p] & down[q]) != 0)
    return ok


def spectrum_masks(n: int, up, down, join, prec_down) -> np.ndarray:
    """Bitmasks of all nonempty proper round prime filters, ascending."""
    up = np.ascontiguousarray(up, dtype=np.int64)
    down = np.ascontiguousarray(down, dtype=np.int64)
    join = np.ascontiguousarray(join, dtype=np.int64)
    prec_down = np.ascontiguousarray(prec_down, dtype=np.int64)
    total = 1 << n
    found = []
    if _active == "numba":
        flags = _spectrum_flags_nb(n, up, down, join, prec_down, 0, total)
        return np.flatnonzero(flags).astype(np.int64)
    for lo in range(0, total, _CHUNK):
        hi = min(total, lo + _CHUNK)
        flags = _spectrum_flags_np(n, up, down, join, prec_down, lo, hi)
        found.append(np.flatnonzero(flags) + lo)
    return np.concatenate(found).astype(np.int64) if found else np.zeros(0, np.int64)


# ---------------------------------------------------------------------------
# axiom kernels; each returns an int64 witness vector whose first entry is -1
# when the axiom holds
# ---------------------------------------------------------------------------


def _first(violations: np.ndarray, width: int) -> np.ndarray:
    hits = np.argwhere(violations)
    if len(hits) == 0:
        return np.full(width, -1, dtype=np.int64)
    return hits[0].astype(np.int64)


@_njit
def _transitive_nb(P):
    n = P.shape[0]
    w = np.full(3, -1, dtype=np.int64)
    for p in range(n):
        for q in range(n):
            if not P[p, q]:
                continue
            for r in range(n):
                if P[q, r] and not P[p, r]:
                    w[0], w[1], w[2] = p, q, r
                    return w
    return w


def _transitive_np(P):
    v = P[:, :, None] & P[None, :, :] & ~P[:, None, :]
    return _first(v, 3)


@_njit
def _auxiliary_nb(L, P):
    # (p, p', q', q): p <= p' < q' <= q must give p < q and p <= q
    n = P.shape[0]
    w = np.full(4, -1, dtype=np.int64)
    for p in range(n):
        for pp in range(n):
            if not L[p, pp]:
                continue
            for qq in range(n):
                if not P[pp, qq]:
                    continue
                for q in range(n):
                    if L[qq, q] and not (P[p, q] and L[p, q]):
                        w[0], w[1], w[2], w[3] = p, pp, qq, q
                        return w
    return w


def _auxiliary_np(L, P):
    hyp = L[:, :, None, None] & P[None, :, :, None] & L[None, None, :, :]
    v = hyp & ~(P & L)[:, None, None, :]
    return _first(v, 4)


@_njit
def _distributive_nb(L, P, J):
    # (p, s, t, p'): p < s v t, p' < p, and no s' < s, t' < t with p' <= s' v t' <= p
    n = P.shape[0]
    w = np.full(4, -1, dtype=np.int64)
    for p in range(n):
        for s in range(n):
            for t in range(n):
                if not P[p, J[s, t]]:
                    continue
                for pp in range(n):
                    if not P[pp, p]:
                        continue
                    found = False
                    for ss in range(n):
                        if not P[ss, s]:
                            continue
                        for tt in range(n):
                            if P[tt, t]:
                                j = J[ss, tt]
                                if L[pp, j] and L[j, p]:
                                    found = True
                                    break
                        if found:
                            break
                    if not found:
                        w[0], w[1], w[2], w[3] = p, s, t, pp
                        return w
    return w


def _between_np(lo_rel, hi_rel, P, J):
    """G[p', p, s, t] = exists s' < s, t' < t with lo_rel[p', s'vt'] and hi_rel[s'vt', p]."""
    A = lo_rel[:, J].transpose(1, 2, 0)[:, :, :, None] & hi_rel[J][:, :, None, :]
    # A[s', t', p', p]
    Pf = P.astype(np.float64)
    T = np.tensordot(Pf.T, A.astype(np.float64), axes=(1, 0))  # [s, t', p', p]
    T = np.tensordot(Pf.T, T, axes=(1, 1))  # [t, s, p', p]
    return (T > 0).transpose(2, 3, 1, 0)  # [p', p, s, t]


def _distributive_np(L, P, J):
    G = _between_np(L, L, P, J)
    hyp = P[:, J]  # [p, s, t]
    v = hyp[:, :, :, None] & P.T[:, None, None, :] & ~G.transpose(1, 2, 3, 0)
    return _first(v, 4)


@_njit
def _interpolative_nb(P):
    n = P.shape[0]
    w = np.full(2, -1, dtype=np.int64)
    for p in range(n):
        for q in range(n):
            if not P[p, q]:
                continue
            found = False
            for s in range(n):
                if P[p, s] and P[s, q]:
                    found = True
                    break
            if not found:
                w[0], w[1] = p, q
                return w
    return w


def _interpolative_np(P):
    Pi = P.astype(np.int64)
    return _first(P & ~((Pi @ Pi) > 0), 2)


@_njit
def _approximating_nb(L, P):
    n = P.shape[0]
    w = np.full(2, -1, dtype=np.int64)
    for p in range(n):
        for q in range(n):
            sub = True
            for r in range(n):
                if P[r, p] and not P[r, q]:
                    sub = False
                    break
            if sub != L[p, q]:
                w[0], w[1] = p, q
                return w
    return w


def _lower_preorder_np(P):
    Pi = P.astype(np.int64)
    missing = Pi.T @ (1 - Pi)  # count of r with r < p and not r < q
    return missing == 0


def _approximating_np(L, P):
    return _first(_lower_preorder_np(P) != L, 2)


@_njit
def _join_preserving_nb(P, J):
    # (p', p, q', q): p' < p, q' < q, not p' v q' < p v q
    n = P.shape[0]
    w = np.full(4, -1, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            if not P[a, b]:
                continue
            for c in range(n):
                for d in range(n):
                    if P[c, d] and not P[J[a, c], J[b, d]]:
                        w[0], w[1], w[2], w[3] = a, b, c, d
                        return w
    return w


def _join_preserving_np(P, J):
    lhs = J[:, None, :, None]
    rhs = J[None, :, None, :]
    v = P[:, :, None, None] & P[None, None, :, :] & ~P[lhs, rhs]
    return _first(v, 4)


@_njit
def _strong_distributive_nb(L, P, J):
    # (p, s, t, p') when p <= s v t but p' has no approximants;
    # (p, s, t, -1) when p is not below s v t yet every p' < p is approximated
    n = P.shape[0]
    w = np.full(4, -1, dtype=np.int64)
    for p in range(n):
        for s in range(n):
            for t in range(n):
                lhs = L[p, J[s, t]]
                bad = -1
                for pp in range(n):
                    if not P[pp, p]:
                        continue
                    found = False
                    for ss in range(n):
                        if not P[ss, s]:
                            continue
                        for tt in range(n):
                            if P[tt, t]:
                                j = J[ss, tt]
                                if P[pp, j] and P[j, p]:
                                    found = True
                                    break
                        if found:
                            break
                    if not found:
                        bad = pp
                        break
                if lhs and bad >= 0:
                    w[0], w[1], w[2], w[3] = p, s, t, bad
                    return w
                if not lhs and bad < 0:
                    w[0], w[1], w[2] = p, s, t
                    w[3] = -1
                    return w
    return w


def _strong_distributive_np(L, P, J):
    G = _between_np(P, P, P, J)  # [p', p, s, t]
    missing = P[:, :, None, None] & ~G  # p' < p without approximants
    rhs = ~missing.any(axis=0)  # [p, s, t]
    lhs = L[:, J]
    v = lhs != rhs
    hits = np.argwhere(v)
    if len(hits) == 0:
        return np.full(4, -1, dtype=np.int64)
    p, s, t = (int(x) for x in hits[0])
    if lhs[p, s, t]:
        bad = int(np.flatnonzero(missing[:, p, s, t])[0])
    else:
        bad = -1
    return np.array([p, s, t, bad], dtype=np.int64)


@_njit
def _approximating_forward_nb(L, P):
    # (p, q, r): p <= q, r < p, not r < q
    n = P.shape[0]
    w = np.full(3, -1, dtype=np.int64)
    for p in range(n):
        for q in range(n):
            if not L[p, q]:
                continue
            for r in range(n):
                if P[r, p] and not P[r, q]:
                    w[0], w[1], w[2] = p, q, r
                    return w
    return w


def _approximating_forward_np(L, P):
    v = L[:, :, None] & P.T[:, None, :] & ~P.T[None, :, :]
    return _first(v, 3)


_KERNELS = {
    "prec_transitive": (_transitive_nb, _transitive_np, ("P",)),
    "auxiliary": (_auxiliary_nb, _auxiliary_np, ("L", "P")),
    "distributive": (_distributive_nb, _distributive_np, ("L", "P", "J")),
    "interpolative": (_interpolative_nb, _interpolative_np, ("P",)),
    "approximating": (_approximating_nb, _approximating_np, ("L", "P")),
    "join_preserving": (_join_preserving_nb, _join_preserving_np, ("P", "J")),
    "strong_distributive": (_strong_distributive_nb, _strong_distributive_np, ("L", "P", "J")),
    "approximating_forward": (_approximating_forward_nb, _approximating_forward_np, ("L", "P")),
}

KERNEL_NAMES = tuple(_KERNELS)


def axiom_witness(name: str, L, P, J) -> tuple[int, ...] | None:
    """Least violating index tuple for axiom ``name`` or None when it holds."""
    nb_fn, np_fn, argnames = _KERNELS[name]
    tables = {
        "L": np.ascontiguousarray(L, dtype=np.bool_),
        "P": np.ascontiguousarray(P, dtype=np.bool_),
        "J": np.ascontiguousarray(J, dtype=np.int64),
    }
    args = [tables[a] for a in argnames]
    fn = nb_fn if _active == "numba" else np_fn
    w = fn(*args)
    if w[0] < 0:
        return None
    return tuple(int(x) for x in w)


def lower_preorder_matrix(P) -> np.ndarray:
    return _lower_preorder_np(np.asarray(P, dtype=bool))
