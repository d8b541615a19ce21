"""Dense complex linear algebra under a single tolerance policy.

Every rank decision in the package goes through :meth:`Tolerance.threshold`:
a singular value (or residual norm) ``s`` counts as zero iff
``s <= tol.abs + tol.rel * scale``. Kernel, rank, containment and
intersection all share it, so feasibility verdicts stay consistent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NonFinite,
    NonSquare,
    NotHermitian,
    NotNormalized,
    NotUnitary,
)

# eigenvalues closer than this (times max(1, |lambda|_max)) are one outcome
EIGENVALUE_CLUSTER = 1e-8
# |component| below this is reported as an exact zero
ZERO_COMPONENT = 1e-12


@dataclass(frozen=True)
class Tolerance:
    abs: float = 1e-9
    rel: float = 1e-12

    def __post_init__(self):
        if not (np.isfinite(self.abs) and self.abs > 0):
            raise ValueError(f"tolerance abs must be positive, got {self.abs!r}")
        if not (np.isfinite(self.rel) and self.rel >= 0):
            raise ValueError(f"tolerance rel must be non-negative, got {self.rel!r}")

    def threshold(self, scale: float = 1.0) -> float:
        return self.abs + self.rel * float(scale)


DEFAULT_TOL = Tolerance()


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-dimensional, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFinite(f"{name} has non-finite entries")
    return M


def as_vector(v, name: str = "vector") -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-dimensional, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFinite(f"{name} has non-finite entries")
    return v


def as_state(psi, tol: Tolerance = DEFAULT_TOL, dim: int | None = None) -> np.ndarray:
    """Validate a unit-norm state vector and return it as a complex array."""
    psi = as_vector(psi, "state")
    if dim is not None and psi.shape[0] != dim:
        raise DimensionMismatch(f"state has dimension {psi.shape[0]}, expected {dim}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol.threshold(1.0):
        raise NotNormalized(f"state norm is {norm!r}, expected 1")
    return psi


def normalize(v) -> np.ndarray:
    v = as_vector(v)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise NotNormalized("cannot normalize the zero vector")
    return v / norm


def max_abs(M) -> float:
    M = np.asarray(M)
    return float(np.max(np.abs(M))) if M.size else 0.0


def dagger(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so its first largest-modulus component is real positive."""
    mods = np.abs(v)
    top = mods.max() if v.size else 0.0
    if top == 0:
        return v
    # "first" among near-ties keeps the choice stable under rounding noise
    k = int(np.argmax(mods >= top * (1 - 1e-9)))
    return v * (abs(v[k]) / v[k])


def is_hermitian(H, tol: Tolerance = DEFAULT_TOL) -> bool:
    H = as_matrix(H)
    if H.shape[0] != H.shape[1]:
        return False
    return max_abs(H - dagger(H)) <= tol.threshold(max_abs(H))


def is_unitary(U, tol: Tolerance = DEFAULT_TOL) -> bool:
    U = as_matrix(U)
    if U.shape[0] != U.shape[1]:
        return False
    return max_abs(dagger(U) @ U - np.eye(U.shape[0])) <= tol.threshold(1.0)


def require_unitary(U, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    U = as_matrix(U, "unitary")
    if U.shape[0] != U.shape[1]:
        raise NonSquare(f"unitary must be square, got shape {U.shape}")
    if not is_unitary(U, tol):
        raise NotUnitary(f"U^dagger U deviates from I by {max_abs(dagger(U) @ U - np.eye(U.shape[0])):.3e}")
    return U


def eigh(H, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ascending eigenvalues and a unitary whose columns are the
    eigenvectors, each phase-fixed by :func:`fix_phase`.
    """
    H = as_matrix(H, "H")
    if H.shape[0] != H.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {H.shape}")
    skew = max_abs(H - dagger(H))
    if skew > tol.threshold(max_abs(H)):
        raise NotHermitian(f"||H - H^dagger||_max = {skew:.3e} exceeds tolerance")
    try:
        w, V = np.linalg.eigh((H + dagger(H)) / 2)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    V = np.column_stack([fix_phase(V[:, i]) for i in range(V.shape[1])]) if V.size else V
    return w, V


def cluster_eigenvalues(w: Sequence[float]) -> list[list[int]]:
    """Group indices of ascending eigenvalues into numerically equal runs."""
    w = np.asarray(w, dtype=float)
    if w.size == 0:
        return []
    gap = EIGENVALUE_CLUSTER * max(1.0, float(np.max(np.abs(w))))
    groups = [[0]]
    for i in range(1, w.size):
        if w[i] - w[i - 1] <= gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def orthonormalize(vectors, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Two-pass modified Gram-Schmidt over the columns of ``vectors``.

    Columns that are (numerically) dependent on earlier ones are dropped.
    Returns an ``n x k`` array with orthonormal columns.
    """
    V = as_matrix(vectors, "vectors")
    n = V.shape[0]
    kept: list[np.ndarray] = []
    for j in range(V.shape[1]):
        v = V[:, j].copy()
        scale = np.linalg.norm(v)
        for _ in range(2):
            for q in kept:
                v = v - q * np.vdot(q, v)
        norm = np.linalg.norm(v)
        if norm <= tol.threshold(scale) or norm == 0:
            continue
        kept.append(v / norm)
    if not kept:
        return np.zeros((n, 0), dtype=complex)
    return np.column_stack(kept)


class SubspaceBasis:
    """Orthonormal column basis of a subspace of C^dim."""

    __slots__ = ("dim", "vectors")

    def __init__(self, vectors, dim: int | None = None, tol: Tolerance = DEFAULT_TOL, check: bool = True):
        V = np.asarray(vectors, dtype=complex)
        if V.ndim == 1:
            V = V.reshape(-1, 1)
        if V.ndim != 2:
            raise DimensionMismatch(f"basis must be a 2-d column array, got shape {V.shape}")
        if V.shape[1] == 0 and dim is not None:
            V = np.zeros((dim, 0), dtype=complex)
        if dim is not None and V.shape[0] != dim:
            raise DimensionMismatch(f"basis vectors have length {V.shape[0]}, expected {dim}")
        if not np.all(np.isfinite(V)):
            raise NonFinite("basis has non-finite entries")
        if check and V.shape[1]:
            gram_err = max_abs(dagger(V) @ V - np.eye(V.shape[1]))
            if gram_err > max(tol.threshold(1.0), 1e-8):
                raise ValueError(f"basis columns are not orthonormal (Gram error {gram_err:.3e})")
        if V.shape[1] > V.shape[0]:
            raise DimensionMismatch("more basis vectors than the ambient dimension")
        self.dim = V.shape[0]
        self.vectors = V

    @classmethod
    def span(cls, vectors: Iterable, dim: int | None = None, tol: Tolerance = DEFAULT_TOL) -> "SubspaceBasis":
        """Orthonormal basis for the span of arbitrary vectors (given as rows)."""
        rows = [as_vector(v) for v in vectors]
        if not rows:
            if dim is None:
                raise ValueError("dimension required for an empty span")
            return cls.empty(dim)
        return cls(orthonormalize(np.column_stack(rows), tol), dim=dim, check=False)

    @classmethod
    def empty(cls, dim: int) -> "SubspaceBasis":
        return cls(np.zeros((dim, 0), dtype=complex), dim=dim, check=False)

    @classmethod
    def full(cls, dim: int) -> "SubspaceBasis":
        return cls(np.eye(dim, dtype=complex), check=False)

    @property
    def rank(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.rank

    def __iter__(self):
        return iter(self.vectors.T)

    def __repr__(self) -> str:
        return f"SubspaceBasis(dim={self.dim}, rank={self.rank})"

    def projector(self) -> np.ndarray:
        return self.vectors @ dagger(self.vectors)

    def complement_projector(self) -> np.ndarray:
        return np.eye(self.dim) - self.projector()


def _svd(M: np.ndarray):
    try:
        return np.linalg.svd(M, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def singular_rank(s: np.ndarray, tol: Tolerance) -> int:
    if s.size == 0:
        return 0
    return int(np.sum(s > tol.threshold(float(s.max()))))


def rank(M, tol: Tolerance = DEFAULT_TOL) -> int:
    M = as_matrix(M)
    if M.size == 0:
        return 0
    return singular_rank(np.linalg.svd(M, compute_uv=False), tol)


def kernel(M, tol: Tolerance = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of ``{x : M x = 0}`` by SVD."""
    M = as_matrix(M)
    n = M.shape[1]
    if n < 1:
        raise DimensionMismatch("kernel needs a matrix with at least one column")
    if M.shape[0] == 0:
        return SubspaceBasis.full(n)
    _, s, Vh = _svd(M)
    r = singular_rank(s, tol)
    null = dagger(Vh[r:])
    return SubspaceBasis(orthonormalize(null, tol), dim=n, check=False)


def _same_dim(U: SubspaceBasis, W: SubspaceBasis) -> None:
    if U.dim != W.dim:
        raise DimensionMismatch(f"subspaces live in dimensions {U.dim} and {W.dim}")


def intersect(U: SubspaceBasis, W: SubspaceBasis, tol: Tolerance = DEFAULT_TOL) -> SubspaceBasis:
    """U ∩ W as the kernel of the stacked complements [(I - P_U); (I - P_W)]."""
    _same_dim(U, W)
    if U.rank == 0 or W.rank == 0:
        return SubspaceBasis.empty(U.dim)
    stacked = np.vstack([U.complement_projector(), W.complement_projector()])
    return kernel(stacked, tol)


def direct_sum(*spaces: SubspaceBasis, tol: Tolerance = DEFAULT_TOL) -> SubspaceBasis:
    """Span of the union of several subspaces."""
    if not spaces:
        raise ValueError("direct_sum needs at least one subspace")
    dim = spaces[0].dim
    for S in spaces[1:]:
        _same_dim(spaces[0], S)
    cols = np.hstack([S.vectors for S in spaces])
    if cols.shape[1] == 0:
        return SubspaceBasis.empty(dim)
    return SubspaceBasis(orthonormalize(cols, tol), dim=dim, check=False)


def outside_norm(U: SubspaceBasis, v) -> float:
    """Norm of the component of ``v`` orthogonal to ``U``."""
    v = as_vector(v)
    if v.shape[0] != U.dim:
        raise DimensionMismatch(f"vector has dimension {v.shape[0]}, subspace {U.dim}")
    return float(np.linalg.norm(v - U.vectors @ (dagger(U.vectors) @ v)))


def contains(U: SubspaceBasis, v, tol: Tolerance = DEFAULT_TOL) -> bool:
    v = as_vector(v)
    return outside_norm(U, v) <= tol.threshold(float(np.linalg.norm(v)))


def subspace_contained(outer: SubspaceBasis, inner: SubspaceBasis, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff every basis vector of ``inner`` lies in ``outer``."""
    _same_dim(outer, inner)
    return all(contains(outer, w, tol) for w in inner)


def containment_residual(outer: SubspaceBasis, inner: SubspaceBasis) -> float:
    _same_dim(outer, inner)
    return max((outside_norm(outer, w) for w in inner), default=0.0)


def mutual_containment_residual(U: SubspaceBasis, W: SubspaceBasis) -> float:
    """Largest out-of-subspace component over both bases; 0 iff U == W."""
    return max(containment_residual(U, W), containment_residual(W, U))


def same_subspace(U: SubspaceBasis, W: SubspaceBasis, tol: Tolerance = DEFAULT_TOL) -> bool:
    return U.rank == W.rank and mutual_containment_residual(U, W) <= tol.threshold(1.0)


def canonical_basis(U: SubspaceBasis, tol: Tolerance = DEFAULT_TOL) -> SubspaceBasis:
    """A basis depending only on the subspace, not on how it was computed.

    Row-reduce the basis (as rows) to reduced echelon form, Gram-Schmidt the
    rows in pivot order, then fix phases. Coordinate subspaces come out as
    unit vectors.
    """
    R = U.vectors.T.copy()
    k, n = R.shape
    row = 0
    for col in range(n):
        if row == k:
            break
        piv = row + int(np.argmax(np.abs(R[row:, col])))
        if abs(R[piv, col]) <= tol.threshold(1.0):
            continue
        R[[row, piv]] = R[[piv, row]]
        R[row] = R[row] / R[row, col]
        for r in range(k):
            if r != row:
                R[r] = R[r] - R[r, col] * R[row]
        row += 1
    Q = orthonormalize(R[:row].T, tol) if row else np.zeros((n, 0), dtype=complex)
    cols = [fix_phase(Q[:, i]) for i in range(Q.shape[1])]
    V = np.column_stack(cols) if cols else np.zeros((n, 0), dtype=complex)
    return SubspaceBasis(V, dim=n, check=False)


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    Z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (Z + dagger(Z)) / 2


def kron_all(ops: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out
