import numpy as np
import pytest
from hypothesis import given, settings

from predual import kernels
from predual.axioms import AXIOMS, find_violation, violates
from predual.catalog import c3, m3, n5, boolean
from predual.order import lower_preorder, make_structure
from predual.spectrum import enumerate_spectrum, spectrum_bruteforce

import oracles
from conftest import BACKENDS, structures

KERNELS = AXIOMS + ("approximating_forward",)


def test_backend_flag_round_trip():
    start = kernels.get_backend()
    with kernels.use_backend("numpy"):
        assert kernels.get_backend() == "numpy"
    assert kernels.get_backend() == start
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


@pytest.mark.parametrize("name", KERNELS)
@given(S=structures())
def test_kernels_match_oracle(backend, name, S):
    w = find_violation(S, name)
    oracle = getattr(oracles, name)
    assert (w is None) == oracle(S)


@pytest.mark.parametrize("name", AXIOMS)
@given(S=structures(modes=("arbitrary", "transitive")))
def test_witnesses_recheck(backend, name, S):
    w = find_violation(S, name)
    if w is not None:
        assert violates(S, name, w)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="needs both backends")
@pytest.mark.parametrize("name", KERNELS)
@given(S=structures())
@settings(max_examples=80)
def test_backends_agree_on_witness(name, S):
    results = []
    for b in BACKENDS:
        with kernels.use_backend(b):
            results.append(find_violation(S, name))
    assert results[0] == results[1]


@pytest.mark.skipif(len(BACKENDS) < 2, reason="needs both backends")
@given(S=structures())
def test_backends_agree_on_spectrum(S):
    masks = []
    for b in BACKENDS:
        with kernels.use_backend(b):
            masks.append(enumerate_spectrum(S).point_masks)
    assert masks[0] == masks[1]


@given(S=structures())
def test_spectrum_matches_definition(backend, S):
    got = enumerate_spectrum(S).point_masks
    assert got == spectrum_bruteforce(S)
    assert got == oracles.spectrum(S)


@pytest.mark.parametrize("make", [c3, m3, n5, lambda: boolean(3)])
def test_named_spectra_match_definition(backend, make):
    S = make()
    assert enumerate_spectrum(S).point_masks == oracles.spectrum(S)


def test_spectrum_scan_crosses_chunks(backend):
    # 2**17 subsets, so the scan runs over more than one chunk
    n = 17
    leq = np.triu(np.ones((n, n), dtype=bool))
    chain17 = make_structure([str(i) for i in range(n)], leq, leq)
    pts = enumerate_spectrum(chain17).point_masks
    # proper up-sets of a chain avoiding the bottom
    expected = sorted(((1 << n) - 1) & ~((1 << k) - 1) for k in range(1, n))
    assert pts == expected


def test_boolean_algebra_spectrum_is_its_atoms(backend):
    S = boolean(4)
    pts = enumerate_spectrum(S).points
    assert len(pts) == 4
    assert all(len(P) == 8 for P in pts)


@given(S=structures())
def test_lower_preorder_kernel(S):
    rel, same = lower_preorder(S)
    for p in range(S.n):
        for q in range(S.n):
            assert rel[p, q] == (oracles.down(S, p) <= oracles.down(S, q))
    assert same == oracles.approximating(S)
