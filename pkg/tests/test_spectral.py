"""Dominant eigendata: stretch factors, eigenvectors, cyclic structure.

Closed-form oracles: the Fibonacci matrix [[1,1],[1,0]] has characteristic
polynomial x^2 - x - 1 with root the golden ratio, and the rank-4 swap has
x^4 - x^2 - 1, so its stretch is the square root of the golden ratio.  The
generic oracle is numpy's dense eigensolver on small random irreducible
matrices.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from traintracks import (
    NotIrreducibleError,
    PowerIterationError,
    cyclic_index,
    eigenmetric,
    is_irreducible_matrix,
    is_simplicial,
    path_length,
    pf_eigen,
)

PHI = (1.0 + math.sqrt(5.0)) / 2.0


# ------------------------------------------------------------ closed forms


def test_fibonacci_stretch_factor(fib_tt):
    pf = fib_tt.pf
    assert pf.lam == pytest.approx(PHI, abs=1e-12)
    # nu = (1/phi, 1/phi^2), the probability eigenvector
    assert pf.nu[0] == pytest.approx(1 / PHI, abs=1e-9)
    assert pf.nu[1] == pytest.approx(1 / PHI**2, abs=1e-9)
    assert pf.k == 1
    assert pf.blocks == (("a", "b"),)
    assert pf.residual < 1e-10
    assert pf.primitive_first_return == (True,)
    assert pf.expanding


def test_rank4_stretch_factor(rank4_tt):
    pf = rank4_tt.pf
    lam = math.sqrt(PHI)
    assert pf.lam == pytest.approx(lam, abs=1e-12)
    assert pf.k == 2
    assert pf.blocks == (("a", "b"), ("c", "d"))
    assert pf.primitive_first_return == (True, True)
    # closed form from nu A = lam nu: nu_c = lam nu_a, nu_d = nu_a / lam,
    # nu_b = nu_a / phi, normalized to sum 1
    nu_a = 1.0 / (1.0 + 1.0 / PHI + lam + 1.0 / lam)
    expected = np.array([nu_a, nu_a / PHI, nu_a * lam, nu_a / lam])
    np.testing.assert_allclose(pf.nu, expected, atol=1e-9)
    assert pf.residual < 1e-10


def test_swap_is_simplicial(swap_tt):
    pf = swap_tt.pf
    assert pf.lam == pytest.approx(1.0, abs=1e-12)
    assert pf.k == 2
    assert not pf.expanding
    assert is_simplicial(swap_tt.matrix)
    np.testing.assert_allclose(pf.nu, [0.5, 0.5], atol=1e-9)


def test_one_by_one_matrix():
    pf = pf_eigen([[3]])
    assert pf.lam == 3.0
    assert pf.k == 1
    assert list(pf.nu) == [1.0]
    with pytest.raises(NotIrreducibleError):
        pf_eigen([[0]])


# --------------------------------------------------------- irreducibility


def test_irreducibility_cases():
    assert is_irreducible_matrix([[1, 1], [1, 0]])
    assert is_irreducible_matrix([[0, 1], [1, 0]])
    assert not is_irreducible_matrix([[1, 1], [0, 1]])
    assert not is_irreducible_matrix([[1, 0], [0, 1]])
    assert is_irreducible_matrix([[2]])
    assert not is_irreducible_matrix([[0]])


def test_pf_requires_irreducible():
    with pytest.raises(NotIrreducibleError):
        pf_eigen([[1, 1], [0, 1]])
    with pytest.raises(NotIrreducibleError):
        pf_eigen([[1, -1], [1, 1]])


def test_cyclic_index_cases():
    k, blocks = cyclic_index([[1, 1], [1, 0]])
    assert k == 1 and blocks == (("a", "b"),)
    k, blocks = cyclic_index([[0, 1], [1, 0]])
    assert k == 2 and blocks == (("a",), ("b",))
    with pytest.raises(NotIrreducibleError):
        cyclic_index([[1, 0], [0, 1]])


def test_simplicial_cases(identity2_tt, fib_tt):
    assert is_simplicial(identity2_tt.matrix)
    assert not is_simplicial(fib_tt.matrix)


# ------------------------------------------------- generic eigen oracle


@st.composite
def irreducible_matrices(draw):
    n = draw(st.integers(min_value=2, max_value=5))
    mat = draw(
        st.lists(
            st.lists(st.integers(min_value=0, max_value=4), min_size=n, max_size=n),
            min_size=n,
            max_size=n,
        )
    )
    mat = np.array(mat, dtype=np.int64)
    # make every row/column pattern a single cycle plus noise: guarantees
    # strong connectivity without filtering too hard
    for i in range(n):
        mat[(i + 1) % n, i] = max(1, mat[(i + 1) % n, i])
    return mat


@settings(max_examples=60, deadline=None)
@given(irreducible_matrices())
def test_pf_matches_dense_eigensolver(mat):
    pf = pf_eigen(mat)
    dense = np.max(np.abs(np.linalg.eigvals(mat.astype(float))))
    assert pf.lam == pytest.approx(float(dense), rel=1e-9, abs=1e-9)
    assert (pf.nu > 0).all()
    assert pf.nu.sum() == pytest.approx(1.0, abs=1e-12)
    assert float(np.abs(pf.nu @ mat - pf.lam * pf.nu).max()) < 1e-8


def test_power_iteration_budget(fib_tt):
    with pytest.raises(PowerIterationError):
        pf_eigen(fib_tt.matrix, tol=1e-15, max_iter=2)


# ------------------------------------------------------------- eigenmetric


@pytest.mark.parametrize("name", ["fibonacci", "fibonacci-conj-a", "swap-fibonacci", "swap"])
def test_eigenmetric_homothety(name, all_tts):
    tt = all_tts[name]
    metric = eigenmetric(tt.pf)
    assert metric.volume() == pytest.approx(1.0, abs=1e-12)
    for i, w in enumerate(tt.gmap.edge_images):
        assert path_length(w, metric) == pytest.approx(
            tt.pf.lam * metric.of_pair(i), rel=1e-10
        )
    assert tt.homothety_defect() < 1e-10


def test_homothety_defect_needs_metric(unipotent_tt):
    assert unipotent_tt.pf is None and unipotent_tt.metric is None
    assert not unipotent_tt.expanding
    with pytest.raises(NotIrreducibleError):
        unipotent_tt.homothety_defect()
