"""Born rule, Lüders update and sequential conditional probabilities."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DegenerateCondition, DimensionMismatch, NumericalFault
from .numerics import DEFAULT_TOL, Tolerance, as_state
from .observables import Observable, value_label

# P(condition) below this makes the conditional state undefined
DEGENERACY_THRESHOLD = 1e-12


def _check_dim(A: Observable, psi: np.ndarray) -> None:
    if A.dim != psi.shape[0]:
        raise DimensionMismatch(f"observable acts on dimension {A.dim}, state has {psi.shape[0]}")


def clamp_probability(p: float, tol: Tolerance = DEFAULT_TOL) -> float:
    if p > 1.0 + tol.threshold(1.0) or p < -tol.threshold(1.0):
        raise NumericalFault(f"probability {p!r} outside [0, 1] beyond tolerance")
    return min(max(float(p), 0.0), 1.0)


def born(A: Observable, alpha: float, psi, tol: Tolerance = DEFAULT_TOL) -> float:
    """P(A = alpha | psi) = ||E_A(alpha) psi||^2."""
    psi = as_state(psi, tol)
    _check_dim(A, psi)
    v = A.projector(alpha) @ psi
    return clamp_probability(float(np.vdot(v, v).real), tol)


def luders(A: Observable, alpha: float, psi, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Post-measurement state E_A(alpha) psi / ||E_A(alpha) psi||."""
    psi = as_state(psi, tol)
    _check_dim(A, psi)
    v = A.projector(alpha) @ psi
    p = float(np.vdot(v, v).real)
    if p < DEGENERACY_THRESHOLD:
        raise DegenerateCondition(f"P(A={value_label(alpha)}) = {p:.3e}; the updated state is undefined")
    return v / np.sqrt(p)


def conditional(B: Observable, beta: float, A: Observable, alpha: float, psi, tol: Tolerance = DEFAULT_TOL) -> float:
    """P(B = beta | A = alpha, psi), with A measured first."""
    psi = as_state(psi, tol)
    _check_dim(A, psi)
    _check_dim(B, psi)
    first = A.projector(alpha) @ psi
    denom = float(np.vdot(first, first).real)
    if denom < DEGENERACY_THRESHOLD:
        raise DegenerateCondition(f"P(A={value_label(alpha)}) = {denom:.3e}; conditioning undefined")
    second = B.projector(beta) @ first
    return clamp_probability(float(np.vdot(second, second).real) / denom, tol)


@dataclass(frozen=True, eq=False)
class MeasurementEvent:
    observable: Observable
    value: float

    def __post_init__(self):
        self.observable.index(self.value)  # raises UnknownOutcome

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.observable.projector(self.value) @ v


@dataclass(frozen=True, eq=False)
class Chain:
    """Measurement events in the order they are performed."""

    events: tuple[MeasurementEvent, ...]

    def __init__(self, events: Iterable[MeasurementEvent | tuple[Observable, float]]):
        evs = tuple(e if isinstance(e, MeasurementEvent) else MeasurementEvent(*e) for e in events)
        if not evs:
            raise ValueError("a measurement chain needs at least one event")
        dims = {e.observable.dim for e in evs}
        if len(dims) != 1:
            raise DimensionMismatch(f"chain mixes observables of dimensions {sorted(dims)}")
        object.__setattr__(self, "events", evs)

    @property
    def dim(self) -> int:
        return self.events[0].observable.dim

    def apply(self, psi: np.ndarray) -> np.ndarray:
        v = psi
        for e in self.events:
            v = e.apply(v)
        return v

    def operator(self) -> np.ndarray:
        """The product E_n ... E_2 E_1 (first event rightmost)."""
        M = np.eye(self.dim, dtype=complex)
        for e in self.events:
            M = e.observable.projector(e.value) @ M
        return M


def chain_conditional(chain: Chain, target: MeasurementEvent, psi, tol: Tolerance = DEFAULT_TOL) -> float:
    """Probability of ``target`` after every event of ``chain`` occurred in order."""
    if not isinstance(chain, Chain):
        chain = Chain(chain)
    if not isinstance(target, MeasurementEvent):
        target = MeasurementEvent(*target)
    psi = as_state(psi, tol, dim=chain.dim)
    _check_dim(target.observable, psi)
    v = chain.apply(psi)
    denom = float(np.vdot(v, v).real)
    if denom < DEGENERACY_THRESHOLD:
        raise DegenerateCondition(f"conditioning chain has probability {denom:.3e}")
    w = target.apply(v)
    return clamp_probability(float(np.vdot(w, w).real) / denom, tol)
