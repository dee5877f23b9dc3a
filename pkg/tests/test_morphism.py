import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from predual.catalog import boolean, c3, chain, m3, s2
from predual.errors import DimensionMismatch, HypothesesFail, NotAMorphism, NotContinuous
from predual.morphism import (
    ALL_CONDITIONS,
    MORPHISM_AXIOMS,
    PartialMap,
    RelMorphism,
    check_category_laws,
    check_morphism,
    compose,
    is_morphism,
    is_vee_morphism,
    join_closure,
    morphism_from_document,
    morphism_of_map,
    random_morphism,
    random_partial_map,
    spectrum_map,
    vee_closure,
    verify_functor_laws,
    verify_vee_representation,
    violates_condition,
)
from predual.order import bits
from predual.space import FiniteSpace, alexandrov_space, partial_orders

import oracles

SIERPINSKI = FiniteSpace.build(["x", "y"], [0b00, 0b10, 0b11])


def spaces():
    out = [FiniteSpace.build(["x"], [0, 1])]
    for m in (2, 3):
        for rel in partial_orders(m):
            out.append(alexandrov_space(rel))
    return out


SPACES = spaces()
STRUCTURES = [X.structure for X in SPACES if X.structure.n <= 6] + [chain(4), boolean(2)]


def pick(data, pool):
    return pool[data.draw(st.integers(0, len(pool) - 1))]


class TestConditions:
    def test_identity_on_c3(self, C3):
        report = check_morphism(RelMorphism.identity(C3))
        assert report.passed(MORPHISM_AXIOMS)

    def test_empty_relation(self, C3):
        report = check_morphism(RelMorphism.empty(C3, C3))
        assert report.passed(MORPHISM_AXIOMS)
        assert report.verdicts["total"] is False

    def test_full_relation(self, C3):
        M = RelMorphism(C3, C3, np.ones((3, 3), dtype=bool))
        report = check_morphism(M)
        assert report.witnesses["faithful"] == ("a",)
        assert not is_morphism(M)

    def test_witness_labels_use_both_carriers(self, C3):
        S = s2()
        M = RelMorphism.from_pairs(C3, S, [("a", "a")])
        report = check_morphism(M, ["auxiliary"])
        w = report.witnesses["auxiliary"]
        assert w[0] in C3.elements and w[3] in S.elements

    def test_dimension_mismatch(self, C3):
        with pytest.raises(DimensionMismatch):
            RelMorphism(C3, s2(), np.zeros((3, 3), dtype=bool))

    def test_document(self, C3):
        S = s2()
        M = morphism_from_document({"pairs": [["0", "0"], ["1", "a"]]}, C3, S)
        assert M.pair_labels() == [("0", "0"), ("1", "a")]
        with pytest.raises(NotAMorphism):
            morphism_from_document({"pairs": [["0", "q"]]}, C3, S)
        with pytest.raises(NotAMorphism):
            morphism_from_document({}, C3, S)


def _condition_oracle(M, name):
    S, T, R = M.source, M.target, M.pairs
    P, L, J = S.prec, S.leq, S.join
    P2, L2, J2 = T.prec, T.leq, T.join
    src, tgt = range(S.n), range(T.n)
    if name == "faithful":
        return all(not R[p, T.bottom] or p == S.bottom for p in src)
    if name == "auxiliary":
        return all(
            not (L[p, q] and R[q, qq] and L2[qq, pp]) or R[p, pp]
            for p in src for q in src for qq in tgt for pp in tgt
        )
    if name == "pushforward":
        return all(
            not (P[p, q] and R[q, r] and R[q, s]) or any(R[p, x] and P2[x, r] and P2[x, s] for x in tgt)
            for p in src for q in src for r in tgt for s in tgt
        )
    if name == "vee_pullback":
        return all(
            not (P[p, q] and R[q, J2[r, s]])
            or any(R[a, r] and R[b, s] and P[p, J[a, b]] for a in src for b in src)
            for p in src for q in src for r in tgt for s in tgt
        )
    if name == "left_interpolation":
        return all(not R[p, pp] or any(P[p, q] and R[q, pp] for q in src) for p in src for pp in tgt)
    if name == "vee_preserving":
        return all(not (R[q, pp] and R[r, pp]) or R[J[q, r], pp] for q in src for r in src for pp in tgt)
    if name == "total":
        return all(not P[p, q] or R[p].any() for p in src for q in src)
    raise KeyError(name)


@given(st.data())
@settings(max_examples=80)
def test_conditions_match_oracle(data):
    S, T = pick(data, STRUCTURES), pick(data, STRUCTURES)
    seed = data.draw(st.integers(0, 2**32 - 1))
    R = np.random.default_rng(seed).random((S.n, T.n)) < data.draw(st.sampled_from([0.2, 0.5, 0.8]))
    M = RelMorphism(S, T, R)
    report = check_morphism(M)
    for name in ALL_CONDITIONS:
        assert report.verdicts[name] == _condition_oracle(M, name), name
        if not report.verdicts[name]:
            assert violates_condition(M, name, report.indices[name])


class TestCompose:
    def test_identity_squared(self, C3):
        I = RelMorphism.identity(C3)
        assert np.array_equal(compose(I, I).pairs, C3.leq)

    def test_empty_absorbs(self, C3):
        E = RelMorphism.empty(C3, C3)
        I = RelMorphism.identity(C3)
        assert not compose(E, I).pairs.any()
        assert not compose(I, E).pairs.any()

    def test_prec_squared(self, C3):
        P = RelMorphism(C3, C3, C3.prec)
        assert np.array_equal(compose(P, P).pairs, C3.prec)

    def test_mismatch(self, C3):
        a = RelMorphism.identity(C3)
        b = RelMorphism.identity(s2())
        with pytest.raises(DimensionMismatch):
            compose(a, b)

    def test_matches_boolean_product(self, C3):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = RelMorphism(C3, C3, rng.random((3, 3)) < 0.5)
            b = RelMorphism(C3, C3, rng.random((3, 3)) < 0.5)
            assert np.array_equal(compose(a, b).pairs, oracles.relation_compose(a.pairs, b.pairs))


@given(st.data())
@settings(max_examples=60)
def test_category_laws_on_random_morphisms(data):
    S, T, U, V = (pick(data, STRUCTURES) for _ in range(4))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    a, b, c = random_morphism(S, T, rng), random_morphism(T, U, rng), random_morphism(U, V, rng)
    assert is_morphism(a) and is_morphism(b) and is_morphism(c)
    report = check_category_laws(a, b, c)
    assert report.ok, report.details


class TestSpectrumMap:
    def test_identity(self, C3):
        phi = spectrum_map(RelMorphism.identity(C3))
        assert phi.mapping == {0: 0, 1: 1} and phi.continuous

    def test_empty(self, C3):
        phi = spectrum_map(RelMorphism.empty(C3, C3))
        assert phi.mapping == {} and phi.domain == 0
        assert phi.to_json()["undefined"] == [["1"], ["a", "1"]]

    def test_c3_to_s2(self, C3):
        S = s2()
        M = RelMorphism.from_pairs(C3, S, [("0", "0"), ("0", "a"), ("a", "a"), ("1", "a")])
        assert is_morphism(M)
        phi = spectrum_map(M)
        assert phi.mapping == {0: 0, 1: 0}
        assert phi.to_json()["mapping"] == [
            {"from": ["1"], "to": ["a"]},
            {"from": ["a", "1"], "to": ["a"]},
        ]

    def test_not_a_morphism(self, C3):
        with pytest.raises(NotAMorphism) as info:
            spectrum_map(RelMorphism(C3, C3, np.ones((3, 3), dtype=bool)))
        assert info.value.axiom == "faithful"


class TestMapsOfSpaces:
    def test_identity_map(self):
        M = morphism_of_map(PartialMap.identity(SIERPINSKI))
        assert np.array_equal(M.pairs, SIERPINSKI.structure.leq)
        assert np.array_equal(M.pairs, c3().leq)

    def test_constant_map_to_open_point(self):
        phi = PartialMap(SIERPINSKI, SIERPINSKI, {0: 1, 1: 1})
        M = morphism_of_map(phi)
        basis = SIERPINSKI.basis
        for i, p in enumerate(basis):
            for j, q in enumerate(basis):
                # preimage of q is everything when y is in q, else empty
                assert M.pairs[i, j] == (bool(q >> 1 & 1) or p == 0)

    def test_empty_map(self):
        M = morphism_of_map(PartialMap(SIERPINSKI, SIERPINSKI, {}))
        expected = np.zeros((3, 3), dtype=bool)
        expected[0, :] = True
        assert np.array_equal(M.pairs, expected)

    def test_discontinuous(self):
        # swapping the points of the Sierpinski space is not continuous
        phi = PartialMap(SIERPINSKI, SIERPINSKI, {0: 1, 1: 0})
        assert not phi.is_continuous()
        with pytest.raises(NotContinuous):
            morphism_of_map(phi)

    def test_domain_must_be_open(self):
        phi = PartialMap(SIERPINSKI, SIERPINSKI, {0: 0})
        with pytest.raises(NotContinuous, match="domain"):
            phi.validate()

    def test_then(self):
        phi = PartialMap(SIERPINSKI, SIERPINSKI, {1: 1})
        psi = PartialMap.identity(SIERPINSKI)
        assert phi.then(psi).table == {1: 1}
        assert psi.then(phi).table == {1: 1}

    def test_sierpinski_identity_laws(self):
        I = PartialMap.identity(SIERPINSKI)
        assert verify_functor_laws(maps=[(I, I)]).ok


@given(st.data())
@settings(max_examples=60)
def test_functor_laws_on_random_maps(data):
    X, Y, Z = (pick(data, SPACES) for _ in range(3))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    phi, psi = random_partial_map(X, Y, rng), random_partial_map(Y, Z, rng)
    a, b = morphism_of_map(phi), morphism_of_map(psi)
    report = verify_functor_laws(morphisms=[(a, b)], maps=[(phi, psi)])
    assert report.ok, report.details


@given(st.data())
@settings(max_examples=60)
def test_spectrum_functor_on_random_morphisms(data):
    S, T, U = (pick(data, STRUCTURES) for _ in range(3))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    a, b = random_morphism(S, T, rng), random_morphism(T, U, rng)
    ab = compose(a, b)
    f, g, h = spectrum_map(a), spectrum_map(b), spectrum_map(ab)
    # domain of the composite is the preimage of the second domain
    assert h.domain == f.preimage(g.domain)
    for k, v in h.mapping.items():
        assert v == g.mapping[f.mapping[k]]


class TestVeeClosure:
    def test_identity_becomes_prec(self, C3):
        assert np.array_equal(vee_closure(RelMorphism.identity(C3)).pairs, C3.prec)

    def test_empty(self, C3):
        V = vee_closure(RelMorphism.empty(C3, C3))
        expected = np.zeros((3, 3), dtype=bool)
        expected[:, :] = C3.prec[:, [C3.bottom]]
        assert np.array_equal(V.pairs, expected)
        assert V.pair_labels() == [("0", "0"), ("0", "a"), ("0", "1")]

    def test_single_pair(self, C3):
        V = vee_closure(RelMorphism.from_pairs(C3, C3, [("0", "a")]))
        # the joins of subsets of {0} are just 0, so p is related to a iff p < 0
        assert V.pairs[:, 1].tolist() == [True, False, False]
        assert V.pairs[0, 1]

    def test_join_closure(self, M3):
        x, y = M3.index("x"), M3.index("y")
        assert join_closure(M3, 1 << x | 1 << y) == sum(1 << M3.index(v) for v in ("0", "x", "y", "1"))
        assert join_closure(M3, 0) == 1 << M3.bottom

    def test_vee_identity_is_a_vee_morphism(self, C3):
        assert is_vee_morphism(RelMorphism(C3, C3, C3.prec))


def _vee_oracle(M):
    S, R = M.source, M.pairs
    out = np.zeros_like(R)
    for j in range(M.target.n):
        related = [i for i in range(S.n) if R[i, j]]
        joins = set()
        for k in range(1 << len(related)):
            v = S.bottom
            for t in bits(k):
                v = S.join[v, related[t]]
            joins.add(v)
        for p in range(S.n):
            out[p, j] = any(S.prec[p, v] for v in joins)
    return out


@given(st.data())
@settings(max_examples=60)
def test_vee_closure_properties(data):
    S, T = pick(data, STRUCTURES), pick(data, STRUCTURES)
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    M = random_morphism(S, T, rng)
    V = vee_closure(M)
    assert np.array_equal(V.pairs, _vee_oracle(M))
    report = check_morphism(V)
    assert report.passed(MORPHISM_AXIOMS + ("left_interpolation", "vee_preserving"))
    assert np.array_equal(vee_closure(V).pairs, V.pairs)
    assert verify_vee_representation(M).ok


class TestVeeRepresentation:
    def test_identity(self, C3):
        assert verify_vee_representation(RelMorphism.identity(C3)).ok

    def test_empty(self, C3):
        assert verify_vee_representation(RelMorphism.empty(C3, C3)).ok

    def test_hypotheses(self, M3, C3):
        with pytest.raises(HypothesesFail):
            verify_vee_representation(RelMorphism.empty(M3, C3))
