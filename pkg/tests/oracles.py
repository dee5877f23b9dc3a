"""Naive reference implementations, written from the definitions with plain
loops and no shared code with the package kernels."""

import itertools

import numpy as np


def _rng(S):
    return range(S.n)


def prec_transitive(S):
    P = S.prec
    return all(
        not (P[p, q] and P[q, r]) or P[p, r] for p, q, r in itertools.product(_rng(S), repeat=3)
    )


def auxiliary(S):
    L, P = S.leq, S.prec
    for p, q in itertools.product(_rng(S), repeat=2):
        if P[p, q] and not L[p, q]:
            return False
    for p, pp, qq, q in itertools.product(_rng(S), repeat=4):
        if L[p, pp] and P[pp, qq] and L[qq, q] and not P[p, q]:
            return False
    return True


def distributive(S):
    L, P, J = S.leq, S.prec, S.join
    R = _rng(S)
    for p, s, t in itertools.product(R, repeat=3):
        if not P[p, J[s, t]]:
            continue
        for pp in R:
            if not P[pp, p]:
                continue
            if not any(
                P[ss, s] and P[tt, t] and L[pp, J[ss, tt]] and L[J[ss, tt], p]
                for ss in R
                for tt in R
            ):
                return False
    return True


def interpolative(S):
    P = S.prec
    return all(
        not P[p, q] or any(P[p, s] and P[s, q] for s in _rng(S))
        for p, q in itertools.product(_rng(S), repeat=2)
    )


def down(S, p):
    return {r for r in _rng(S) if S.prec[r, p]}


def approximating(S):
    return all(
        bool(S.leq[p, q]) == (down(S, p) <= down(S, q)) for p, q in itertools.product(_rng(S), repeat=2)
    )


def approximating_forward(S):
    return all(
        not S.leq[p, q] or down(S, p) <= down(S, q) for p, q in itertools.product(_rng(S), repeat=2)
    )


def join_preserving(S):
    P, J = S.prec, S.join
    return all(
        not (P[a, b] and P[c, d]) or P[J[a, c], J[b, d]]
        for a, b, c, d in itertools.product(_rng(S), repeat=4)
    )


def strong_distributive(S):
    L, P, J = S.leq, S.prec, S.join
    R = _rng(S)
    for p, s, t in itertools.product(R, repeat=3):
        rhs = all(
            any(P[ss, s] and P[tt, t] and P[pp, J[ss, tt]] and P[J[ss, tt], p] for ss in R for tt in R)
            for pp in R
            if P[pp, p]
        )
        if bool(L[p, J[s, t]]) != rhs:
            return False
    return True


AXIOM_ORACLES = {
    "prec_transitive": prec_transitive,
    "auxiliary": auxiliary,
    "distributive": distributive,
    "interpolative": interpolative,
    "approximating": approximating,
    "join_preserving": join_preserving,
    "strong_distributive": strong_distributive,
}


def spectrum(S):
    """Proper nonempty round prime filters, straight from the definitions."""
    n = S.n
    L, P, J = S.leq, S.prec, S.join
    out = []
    for mask in range(1, (1 << n) - 1):
        F = {i for i in range(n) if mask >> i & 1}
        up = all(q in F for p in F for q in range(n) if L[p, q])
        directed = all(any(r in F and L[r, p] and L[r, q] for r in range(n)) for p in F for q in F)
        prime = all(p in F or q in F for p in range(n) for q in range(n) if J[p, q] in F)
        round_ = all(any(r in F and P[r, p] for r in range(n)) for p in F)
        if up and directed and prime and round_:
            out.append(mask)
    return out


def subset_family_way_below(opens, U, V):
    """U way-below V in a finite space: every cover of V by opens has a
    finite subcover of U. Finite families, so the subcover may be the family."""
    opens = list(opens)
    for k in range(len(opens) + 1):
        for fam in itertools.combinations(opens, k):
            union = 0
            for o in fam:
                union |= o
            if V & ~union == 0 and U & ~union != 0:
                return False
    return True


def prime_extension_exists(S, I, F):
    return any(m & F == F and m & I == 0 for m in spectrum(S))


def relation_compose(a, b):
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=bool)
    for i in range(n):
        for j in range(m):
            out[i, j] = any(a[i, t] and b[t, j] for t in range(k))
    return out
