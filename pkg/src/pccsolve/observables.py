"""Observables as spectral families of orthogonal projectors."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateOutcome,
    IncompleteSpan,
    NotDichotomous,
    NotProjector,
    ObservableError,
    OverlappingEigenspaces,
    SlotOutOfRange,
    UnknownOutcome,
)
from .numerics import (
    DEFAULT_TOL,
    SubspaceBasis,
    Tolerance,
    as_matrix,
    as_vector,
    cluster_eigenvalues,
    dagger,
    eigh,
    kernel,
    kron_all,
    max_abs,
    orthonormalize,
    require_unitary,
)

# values are compared with this slack when looking up an outcome
VALUE_MATCH = 1e-9


def value_label(value: float) -> str:
    """Short label for an outcome value: ``+1``, ``-1``, ``0.5``."""
    value = float(value)
    if value == int(value):
        return f"{int(value):+d}"
    return repr(value)


def sign_label(value: float) -> str:
    """``+`` / ``-`` for the dichotomous values, the value label otherwise."""
    if value == 1:
        return "+"
    if value == -1:
        return "-"
    return value_label(value)


@dataclass(frozen=True, eq=False)
class Observable:
    """Outcome values (ascending) with their projectors and eigenbases.

    Construct through :meth:`from_projectors`, :func:`from_matrix` or
    :func:`from_eigenspaces`; all three validate the spectral-family
    invariants (Hermitian idempotent projectors, mutually orthogonal,
    resolving the identity, distinct values).
    """

    values: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]
    bases: tuple[SubspaceBasis, ...] = field(repr=False)

    @classmethod
    def from_projectors(cls, values: Sequence[float], projectors: Sequence, tol: Tolerance = DEFAULT_TOL) -> "Observable":
        if len(values) != len(projectors):
            raise ObservableError("need exactly one projector per outcome value")
        if not values:
            raise ObservableError("an observable needs at least one outcome")
        mats = [as_matrix(P, "projector") for P in projectors]
        dim = mats[0].shape[0]
        for P in mats:
            if P.shape != (dim, dim):
                raise DimensionMismatch(f"projector shape {P.shape} does not match dimension {dim}")
        order = np.argsort(np.asarray(values, dtype=float), kind="stable")
        vals = tuple(float(values[i]) for i in order)
        mats = [mats[i] for i in order]
        for v0, v1 in zip(vals, vals[1:]):
            if v1 - v0 <= VALUE_MATCH:
                raise DuplicateOutcome(f"outcome value {value_label(v0)} listed twice")
        eps = tol.threshold(1.0)
        for v, P in zip(vals, mats):
            lbl = value_label(v)
            if max_abs(P - dagger(P)) > eps:
                raise NotProjector(f"E({lbl}) is not Hermitian")
            if max_abs(P @ P - P) > eps:
                raise NotProjector(f"E({lbl}) is not idempotent: ||E^2 - E||_max = {max_abs(P @ P - P):.3e}")
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                overlap = max_abs(mats[i] @ mats[j])
                if overlap > eps:
                    raise OverlappingEigenspaces(
                        f"E({value_label(vals[i])}) E({value_label(vals[j])}) != 0 (max entry {overlap:.3e})"
                    )
        resid = max_abs(sum(mats) - np.eye(dim))
        if resid > eps:
            raise IncompleteSpan(f"sum of projectors Σ E(α) ≠ I (max deviation {resid:.3e})")
        bases = []
        for v, P in zip(vals, mats):
            B = kernel(np.eye(dim) - P, tol)
            if B.rank == 0:
                raise ObservableError(f"E({value_label(v)}) is the zero projector")
            bases.append(B)
        return cls(vals, tuple(mats), tuple(bases))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return sum(v * P for v, P in zip(self.values, self.projectors))

    @property
    def is_dichotomous(self) -> bool:
        return self.values == (-1.0, 1.0)

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        ranks = ", ".join(f"{value_label(v)}: rank {B.rank}" for v, B in zip(self.values, self.bases))
        return f"Observable(dim={self.dim}, {{{ranks}}})"

    def index(self, value: float) -> int:
        for i, v in enumerate(self.values):
            if abs(v - float(value)) <= VALUE_MATCH:
                return i
        known = ", ".join(value_label(v) for v in self.values)
        raise UnknownOutcome(f"{value!r} is not an outcome (outcomes: {known})")

    def projector(self, value: float) -> np.ndarray:
        return self.projectors[self.index(value)]

    def eigenspace(self, value: float) -> SubspaceBasis:
        return self.bases[self.index(value)]

    def outcomes(self) -> list[tuple[float, np.ndarray]]:
        return list(zip(self.values, self.projectors))


def require_dichotomous(*observables: Observable) -> None:
    for A in observables:
        if not A.is_dichotomous:
            vals = ", ".join(value_label(v) for v in A.values)
            raise NotDichotomous(f"expected outcomes {{-1, +1}}, got {{{vals}}}")


def from_matrix(H, tol: Tolerance = DEFAULT_TOL) -> Observable:
    """Spectral family of a Hermitian matrix; near-equal eigenvalues merge."""
    w, V = eigh(H, tol)
    values, projectors = [], []
    for group in cluster_eigenvalues(w):
        cols = V[:, group]
        values.append(float(np.mean(w[group])))
        projectors.append(cols @ dagger(cols))
    return Observable.from_projectors(values, projectors, tol)


def from_eigenspaces(outcomes: Iterable[tuple[float, Sequence]], tol: Tolerance = DEFAULT_TOL) -> Observable:
    """Build an observable from ``(value, [vectors...])`` groups.

    Vectors inside a group only need to be independent; they are
    orthonormalized. Overlap between groups is an error, as is a union
    that fails to span the space.
    """
    outcomes = list(outcomes)
    if not outcomes:
        raise ObservableError("no outcomes given")
    groups = []
    dim = None
    for value, vectors in outcomes:
        vecs = [as_vector(v, "eigenvector") for v in vectors]
        if not vecs:
            raise ObservableError(f"outcome {value_label(value)} has an empty eigenspace")
        for v in vecs:
            if dim is None:
                dim = v.shape[0]
            elif v.shape[0] != dim:
                raise DimensionMismatch(f"eigenvector of length {v.shape[0]}, expected {dim}")
        Q = orthonormalize(np.column_stack(vecs), tol)
        if Q.shape[1] < len(vecs):
            raise ObservableError(f"eigenvectors for outcome {value_label(value)} are linearly dependent")
        groups.append((float(value), Q))
    eps = tol.threshold(1.0)
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            overlap = max_abs(dagger(groups[i][1]) @ groups[j][1])
            if overlap > eps:
                raise OverlappingEigenspaces(
                    f"eigenspaces for {value_label(groups[i][0])} and {value_label(groups[j][0])} "
                    f"are not orthogonal (max overlap {overlap:.3e})"
                )
    total = sum(Q.shape[1] for _, Q in groups)
    if total != dim:
        raise IncompleteSpan(f"eigenspaces span {total} of {dim} dimensions, so Σ E(α) ≠ I")
    return Observable.from_projectors([v for v, _ in groups], [Q @ dagger(Q) for _, Q in groups], tol)


def diagonal(values: Sequence[float], tol: Tolerance = DEFAULT_TOL) -> Observable:
    """Observable diagonal in the standard basis, e.g. ``diagonal([1, -1])``."""
    return from_matrix(np.diag(np.asarray(values, dtype=complex)), tol)


def commutator_norm(A: Observable, B: Observable) -> float:
    if A.dim != B.dim:
        raise DimensionMismatch(f"observables act on dimensions {A.dim} and {B.dim}")
    a, b = A.matrix, B.matrix
    return max_abs(a @ b - b @ a)


def commutes(A: Observable, B: Observable, tol: Tolerance = DEFAULT_TOL) -> bool:
    scale = max(1.0, max_abs(A.matrix) * max_abs(B.matrix))
    return commutator_norm(A, B) <= tol.threshold(scale)


def lift_local(a: Observable, slot: int, dims: Sequence[int], tol: Tolerance = DEFAULT_TOL) -> Observable:
    """Place a local observable at tensor factor ``slot`` of ``dims``."""
    dims = [int(d) for d in dims]
    if not 0 <= slot < len(dims):
        raise SlotOutOfRange(f"slot {slot} outside factors 0..{len(dims) - 1}")
    if a.dim != dims[slot]:
        raise DimensionMismatch(f"local observable has dimension {a.dim}, factor {slot} has {dims[slot]}")
    eyes = [np.eye(d, dtype=complex) for d in dims]
    projectors = []
    for P in a.projectors:
        ops = list(eyes)
        ops[slot] = P
        projectors.append(kron_all(ops))
    return Observable.from_projectors(a.values, projectors, tol)


def conjugate(A: Observable, U, tol: Tolerance = DEFAULT_TOL) -> Observable:
    """The observable U A U^dagger (same outcome values)."""
    U = require_unitary(U, tol)
    if U.shape[0] != A.dim:
        raise DimensionMismatch(f"unitary has dimension {U.shape[0]}, observable {A.dim}")
    Ud = dagger(U)
    return Observable.from_projectors(A.values, [U @ P @ Ud for P in A.projectors], tol)


@dataclass(frozen=True)
class GammaSet:
    """A set of ``(alpha, beta)`` value pairs; order within a pair is A then B."""

    pairs: tuple[tuple[float, ...], ...]

    def __init__(self, pairs: Iterable[Sequence[float]]):
        norm = tuple(tuple(float(x) for x in p) for p in pairs)
        if not norm:
            raise ValueError("a value set needs at least one pair")
        width = len(norm[0])
        if width < 2 or any(len(p) != width for p in norm):
            raise ValueError("all entries must be value tuples of one common length >= 2")
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate pairs in value set")
        object.__setattr__(self, "pairs", norm)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def is_complete(self, *observables: Observable) -> bool:
        """Each outcome of each observable appears in exactly one entry."""
        if len(observables) != len(self.pairs[0]):
            raise ValueError("need one observable per tuple position")
        for pos, obs in enumerate(observables):
            counts = [0] * len(obs)
            for p in self.pairs:
                counts[obs.index(p[pos])] += 1
            if any(c != 1 for c in counts):
                return False
        return True
