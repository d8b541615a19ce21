import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pccsolve.errors import ConvergenceFailure, NonFinite, NonSquare, NotHermitian, NotNormalized, NotUnitary
from pccsolve.numerics import (
    SubspaceBasis,
    Tolerance,
    as_state,
    canonical_basis,
    cluster_eigenvalues,
    contains,
    direct_sum,
    eigh,
    fix_phase,
    intersect,
    kernel,
    kron_all,
    mutual_containment_residual,
    orthonormalize,
    random_hermitian,
    random_unitary,
    rank,
    require_unitary,
    same_subspace,
    subspace_contained,
)

from helpers import unit


def test_tolerance_threshold_and_validation():
    tol = Tolerance(1e-9, 1e-12)
    assert tol.threshold(1000.0) == pytest.approx(1e-9 + 1e-9)
    with pytest.raises(ValueError):
        Tolerance(abs=0.0)
    with pytest.raises(ValueError):
        Tolerance(rel=-1.0)


def test_as_state_rejects_unnormalized_and_nonfinite():
    with pytest.raises(NotNormalized):
        as_state([1, 1])
    with pytest.raises(NonFinite):
        as_state([np.nan, 1])
    np.testing.assert_allclose(as_state([0.6, 0.8j]), [0.6, 0.8j])


def test_fix_phase_makes_largest_component_real_positive():
    v = np.array([0.1, -0.9j, 0.3])
    w = fix_phase(v)
    assert w[1].real > 0 and w[1].imag == 0
    np.testing.assert_allclose(np.abs(w), np.abs(v))


def test_eigh_pauli_x():
    w, V = eigh([[0, 1], [1, 0]])
    np.testing.assert_allclose(w, [-1, 1], atol=1e-12)
    np.testing.assert_allclose(np.abs(V[:, 1]), [2 ** -0.5] * 2, atol=1e-12)


def test_eigh_errors():
    with pytest.raises(NonSquare):
        eigh(np.zeros((2, 3)))
    with pytest.raises(NotHermitian):
        eigh([[0, 1], [0, 0]])
    with pytest.raises(NonFinite):
        eigh([[np.inf, 0], [0, 1]])


def test_eigh_convergence_failure(monkeypatch):
    def broken(*_a, **_k):
        raise np.linalg.LinAlgError("no convergence")

    monkeypatch.setattr(np.linalg, "eigh", broken)
    with pytest.raises(ConvergenceFailure):
        eigh(np.eye(2))


def test_cluster_eigenvalues_merges_near_ties():
    assert cluster_eigenvalues([-1.0, 1.0, 1.0 + 1e-12, 2.0]) == [[0], [1, 2], [3]]


def test_orthonormalize_drops_dependent_columns():
    Q = orthonormalize(np.array([[1, 2, 0], [0, 0, 1], [0, 0, 0]], dtype=complex))
    assert Q.shape == (3, 2)
    np.testing.assert_allclose(Q.conj().T @ Q, np.eye(2), atol=1e-12)


def test_kernel_and_rank_of_known_matrix():
    M = np.array([[1, 1, 0], [0, 0, 0]], dtype=complex)
    K = kernel(M)
    assert K.rank == 2 and rank(M) == 1
    assert contains(K, [1, -1, 0]) and contains(K, unit(3, 3))
    assert not contains(K, unit(1, 3))


def test_intersection_of_coordinate_planes():
    U = SubspaceBasis.span([unit(1, 3), unit(2, 3)])
    W = SubspaceBasis.span([unit(2, 3), unit(3, 3)])
    X = intersect(U, W)
    assert X.rank == 1 and contains(X, unit(2, 3))


def test_direct_sum_and_containment():
    U = SubspaceBasis.span([unit(1, 4)])
    W = SubspaceBasis.span([unit(3, 4)])
    S = direct_sum(U, W)
    assert S.rank == 2
    assert subspace_contained(S, U) and not subspace_contained(U, S)


def test_canonical_basis_is_independent_of_spanning_set():
    a = SubspaceBasis.span([unit(2, 4) + unit(3, 4), unit(2, 4) - unit(3, 4)])
    b = SubspaceBasis.span([unit(3, 4), 1j * unit(2, 4)])
    ca, cb = canonical_basis(a), canonical_basis(b)
    np.testing.assert_allclose(ca.vectors, cb.vectors, atol=1e-12)
    np.testing.assert_allclose(ca.vectors, np.eye(4)[:, 1:3], atol=1e-12)


def test_require_unitary():
    with pytest.raises(NotUnitary):
        require_unitary([[1, 1], [0, 1]])
    U = random_unitary(3, np.random.default_rng(0))
    np.testing.assert_allclose(require_unitary(U).conj().T @ U, np.eye(3), atol=1e-12)


def test_kron_all_order():
    a, b = np.diag([1, 2]), np.diag([1, 10])
    np.testing.assert_allclose(np.diag(kron_all([a, b])), [1, 10, 2, 20])


matrices = st.tuples(st.integers(1, 6), st.integers(1, 6), st.integers(0, 5), st.integers(0, 2**32 - 1))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_nullity_duality(spec):
    m, n, r, seed = spec
    rng = np.random.default_rng(seed)
    r = min(r, m, n)
    M = (rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))) @ (
        rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
    )
    K = kernel(M)
    assert rank(M) + K.rank == n
    assert rank(M) == r
    if K.rank:
        assert np.linalg.norm(M @ K.vectors) <= 1e-8 * max(1.0, np.linalg.norm(M))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_hermitian_eigendecomposition_reconstructs(n, seed):
    H = random_hermitian(n, np.random.default_rng(seed))
    w, V = eigh(H)
    np.testing.assert_allclose(V @ np.diag(w) @ V.conj().T, H, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_same_subspace_under_basis_change(n, seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, n))
    U = SubspaceBasis(orthonormalize(rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))))
    G = random_unitary(k, rng)
    W = SubspaceBasis(U.vectors @ G)
    assert same_subspace(U, W)
    assert mutual_containment_residual(U, W) <= 1e-9
