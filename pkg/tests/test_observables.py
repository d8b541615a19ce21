import numpy as np
import pytest

from pccsolve.errors import (
    DimensionMismatch,
    DuplicateOutcome,
    IncompleteSpan,
    NotDichotomous,
    NotHermitian,
    NotProjector,
    ObservableError,
    OverlappingEigenspaces,
    SlotOutOfRange,
    UnknownOutcome,
)
from pccsolve.observables import (
    GammaSet,
    Observable,
    commutes,
    conjugate,
    diagonal,
    from_eigenspaces,
    from_matrix,
    lift_local,
    require_dichotomous,
    sign_label,
    value_label,
)

from helpers import dichotomous, unit

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def test_labels():
    assert value_label(1) == "+1" and value_label(-1.0) == "-1" and value_label(0.5) == "0.5"
    assert sign_label(1) == "+" and sign_label(-1) == "-" and sign_label(2) == "+2"


def test_from_matrix_pauli_z():
    A = from_matrix(SZ)
    assert A.values == (-1.0, 1.0) and A.is_dichotomous
    np.testing.assert_allclose(A.projector(1), np.diag([1, 0]))
    np.testing.assert_allclose(A.matrix, SZ)


def test_degenerate_spectrum_groups_into_one_projector():
    A = from_matrix(np.diag([2.0, 2.0, -1.0]))
    assert A.values == (-1.0, 2.0)
    assert A.eigenspace(2).rank == 2


def test_from_eigenspaces_orthonormalizes_within_group():
    A = from_eigenspaces([(1, [[1, 1, 0], [1, -1, 0]]), (-1, [[0, 0, 1]])])
    np.testing.assert_allclose(A.projector(1), np.diag([1, 1, 0]), atol=1e-12)


def test_incomplete_span_names_the_identity_resolution():
    with pytest.raises(IncompleteSpan, match="Σ E\\(α\\) ≠ I"):
        from_eigenspaces([(1, [unit(1, 3)]), (-1, [unit(2, 3)])])


def test_overlap_and_dependence_rejected():
    with pytest.raises(OverlappingEigenspaces):
        from_eigenspaces([(1, [[1, 0]]), (-1, [[1, 1]])])
    with pytest.raises(ObservableError):
        from_eigenspaces([(1, [[1, 0, 0], [2, 0, 0]]), (-1, [[0, 1, 0], [0, 0, 1]])])


def test_from_projectors_validation():
    with pytest.raises(NotProjector):
        Observable.from_projectors([1, -1], [np.diag([2, 0]), np.diag([0, 1])])
    with pytest.raises(DuplicateOutcome):
        Observable.from_projectors([1, 1], [np.diag([1, 0]), np.diag([0, 1])])
    with pytest.raises(IncompleteSpan):
        Observable.from_projectors([1, -1], [np.diag([1, 0]), np.diag([0, 0])])


def test_non_hermitian_matrix_rejected():
    with pytest.raises(NotHermitian):
        from_matrix([[0, 1], [0, 0]])


def test_unknown_outcome_has_readable_message():
    A = diagonal([1, -1])
    with pytest.raises(UnknownOutcome) as info:
        A.projector(3)
    assert "not an outcome" in str(info.value)
    assert not str(info.value).startswith("'")


def test_require_dichotomous():
    with pytest.raises(NotDichotomous):
        require_dichotomous(diagonal([0, 1]))


def test_commutes(dim4):
    A, B = dim4
    assert commutes(A, B)
    assert not commutes(from_matrix(SX), from_matrix(SZ))


def test_lift_local_is_kron_with_identity():
    a = from_matrix(SZ)
    A = lift_local(a, 1, (3, 2))
    np.testing.assert_allclose(A.matrix, np.kron(np.eye(3), SZ))
    assert A.eigenspace(1).rank == 3
    with pytest.raises(SlotOutOfRange):
        lift_local(a, 2, (2, 2))
    with pytest.raises(DimensionMismatch):
        lift_local(a, 0, (3, 2))


def test_conjugate_rotates_eigenspaces():
    H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    A = conjugate(from_matrix(SZ), H)
    np.testing.assert_allclose(A.matrix, SX, atol=1e-12)


def test_gamma_set():
    g = GammaSet([(1, -1), (-1, 1)])
    A = dichotomous([1], [2], 2)
    assert g.is_complete(A, A)
    assert not GammaSet([(1, -1), (1, 1)]).is_complete(A, A)
    with pytest.raises(ValueError):
        GammaSet([(1, 1), (1, 1)])
    with pytest.raises(ValueError):
        GammaSet([])
