"""PCC verdicts and the linear solvers for PCC / Gamma-entangled states.

A state is PCC for ``(A=alpha, B=beta)`` iff ``E_A(alpha) psi != 0`` and
``E_B(beta) E_A(alpha) psi = E_A(alpha) psi``. The second condition is
linear, so the full solution set is a subspace minus finitely many proper
subspaces cut out by the non-degeneracy constraints. Feasibility is decided
exactly from the subspace (no constraint may vanish identically on it);
sampling is only used to produce a witness.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..conditioning import DEGENERACY_THRESHOLD
from ..errors import DimensionMismatch, NotCommuting, WitnessNotFound
from ..numerics import (
    DEFAULT_TOL,
    SubspaceBasis,
    Tolerance,
    as_state,
    canonical_basis,
    fix_phase,
    kernel,
)
from ..observables import GammaSet, Observable, commutes, sign_label

WITNESS_DRAWS = 32
DEFAULT_SEED = 42


class NonCommutingWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PccVerdict:
    holds: bool
    conditional_probability: float | None  # None when the condition is degenerate
    residual: float
    degenerate: bool


@dataclass(frozen=True, eq=False)
class LinearCondition:
    """``operator @ psi == 0`` as an equation, ``!= 0`` as a constraint."""

    label: str
    operator: np.ndarray

    def residual(self, psi: np.ndarray) -> float:
        return float(np.linalg.norm(self.operator @ psi))


@dataclass(frozen=True, eq=False)
class SolutionSpace:
    linear_basis: SubspaceBasis
    equations: tuple[LinearCondition, ...]
    constraints: tuple[LinearCondition, ...]
    feasible: bool
    witness: np.ndarray | None
    blocking: tuple[str, ...]  # constraints vanishing on the whole linear space

    @property
    def dim(self) -> int:
        return self.linear_basis.dim

    @property
    def dimension(self) -> int:
        return self.linear_basis.rank

    def equation_residual(self, psi) -> float:
        psi = np.asarray(psi, dtype=complex)
        return max((eq.residual(psi) for eq in self.equations), default=0.0)

    def admits(self, psi, tol: Tolerance = DEFAULT_TOL) -> bool:
        """True iff ``psi`` solves the equations and every constraint."""
        psi = np.asarray(psi, dtype=complex)
        if self.equation_residual(psi) > tol.threshold(1.0):
            return False
        return all(c.residual(psi) ** 2 >= DEGENERACY_THRESHOLD for c in self.constraints)


def _pair_label(alpha: float, beta: float) -> str:
    return f"({sign_label(alpha)},{sign_label(beta)})"


def _same_dim(*observables: Observable) -> int:
    dims = {A.dim for A in observables}
    if len(dims) != 1:
        raise DimensionMismatch(f"observables act on different dimensions {sorted(dims)}")
    return dims.pop()


def _dedupe(conditions: Iterable[LinearCondition]) -> tuple[LinearCondition, ...]:
    out: list[LinearCondition] = []
    for c in conditions:
        if not any(c.operator.shape == o.operator.shape and np.array_equal(c.operator, o.operator) for o in out):
            out.append(c)
    return tuple(out)


def settle(
    dim: int,
    equations: Sequence[LinearCondition],
    constraints: Sequence[LinearCondition],
    tol: Tolerance = DEFAULT_TOL,
    seed=DEFAULT_SEED,
    space: SubspaceBasis | None = None,
) -> SolutionSpace:
    """Solve the stacked equations, decide feasibility, draw a witness.

    ``space`` short-circuits the kernel computation when the caller already
    knows the solution subspace (the equations are then kept for residuals).

    A constraint ``K psi != 0`` is unsatisfiable on the solution subspace L
    iff ``max_{psi in L, |psi|=1} |K psi| = sigma_max(K L)`` is zero under
    the tolerance policy, or its square is below the degeneracy threshold.
    Otherwise each constraint fails only on a proper subspace of L and a
    finite union of proper subspaces cannot cover L, so a generic element
    of L satisfies all of them at once.
    """
    equations = _dedupe(equations)
    constraints = _dedupe(constraints)
    if space is not None:
        L = space
    elif equations:
        L = kernel(np.vstack([e.operator for e in equations]), tol)
    else:
        L = SubspaceBasis.full(dim)
    L = canonical_basis(L, tol)
    blocking = []
    if L.rank == 0:
        feasible = False
    else:
        for c in constraints:
            top = float(np.linalg.norm(c.operator @ L.vectors, 2))
            if top <= tol.threshold(1.0) or top * top < DEGENERACY_THRESHOLD:
                blocking.append(c.label)
        feasible = not blocking
    witness = None
    if feasible:
        rng = np.random.default_rng(seed)
        for _ in range(WITNESS_DRAWS):
            coeffs = rng.standard_normal(L.rank) + 1j * rng.standard_normal(L.rank)
            w = L.vectors @ coeffs
            w = fix_phase(w / np.linalg.norm(w))
            if all(c.residual(w) ** 2 >= DEGENERACY_THRESHOLD for c in constraints):
                witness = w
                break
        if witness is None:
            raise WitnessNotFound(
                f"feasible space of dimension {L.rank} but {WITNESS_DRAWS} draws all violated a constraint"
            )
    return SolutionSpace(L, equations, constraints, feasible, witness, tuple(blocking))


def pcc_equation(A: Observable, alpha: float, B: Observable, beta: float) -> LinearCondition:
    EA, EB = A.projector(alpha), B.projector(beta)
    return LinearCondition(f"PCC{_pair_label(alpha, beta)}", (np.eye(A.dim) - EB) @ EA)


def check_pcc(A: Observable, alpha: float, B: Observable, beta: float, psi, tol: Tolerance = DEFAULT_TOL) -> PccVerdict:
    """Is ``psi`` PCC for ``(A=alpha, B=beta)``, A measured first?"""
    dim = _same_dim(A, B)
    psi = as_state(psi, tol, dim=dim)
    first = A.projector(alpha) @ psi
    second = B.projector(beta) @ first
    residual = float(np.linalg.norm(second - first))
    denom = float(np.vdot(first, first).real)
    if denom < DEGENERACY_THRESHOLD:
        return PccVerdict(False, None, residual, True)
    cp = min(float(np.vdot(second, second).real) / denom, 1.0)
    return PccVerdict(cp >= 1.0 - tol.threshold(1.0), cp, residual, False)


def solve_pair(
    A: Observable, alpha: float, B: Observable, beta: float, tol: Tolerance = DEFAULT_TOL, seed=DEFAULT_SEED
) -> SolutionSpace:
    """All states PCC for ``(A=alpha, B=beta)``; works for non-commuting pairs."""
    dim = _same_dim(A, B)
    eq = pcc_equation(A, alpha, B, beta)
    cons = LinearCondition(f"E_A({sign_label(alpha)})psi != 0", A.projector(alpha))
    return settle(dim, [eq], [cons], tol, seed)


def solve_gamma(
    A: Observable,
    B: Observable,
    gamma: GammaSet | Iterable[Sequence[float]],
    symmetric: bool = False,
    tol: Tolerance = DEFAULT_TOL,
    seed=DEFAULT_SEED,
) -> SolutionSpace:
    """States PCC for every pair of ``gamma``; optionally in both orders.

    The symmetric variant is only defined here for commuting observables and
    raises :class:`NotCommuting` otherwise.
    """
    dim = _same_dim(A, B)
    if not isinstance(gamma, GammaSet):
        gamma = GammaSet(gamma)
    if symmetric and not commutes(A, B, tol):
        raise NotCommuting("symmetric PCC is only defined for commuting observables")
    equations, constraints = [], []
    for alpha, beta in gamma:
        equations.append(pcc_equation(A, alpha, B, beta))
        constraints.append(LinearCondition(f"E_A({sign_label(alpha)})psi != 0", A.projector(alpha)))
        if symmetric:
            EA, EB = A.projector(alpha), B.projector(beta)
            equations.append(LinearCondition(f"PCC-reverse{_pair_label(beta, alpha)}", (np.eye(dim) - EA) @ EB))
            constraints.append(LinearCondition(f"E_B({sign_label(beta)})psi != 0", EB))
    return settle(dim, equations, constraints, tol, seed)


def is_symmetric_state(
    A: Observable, alpha: float, B: Observable, beta: float, psi, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Order-irrelevance test ``E_A(alpha) psi == E_B(beta) psi`` (both nonzero).

    The equivalence with two-way PCC needs commuting observables; for a
    non-commuting pair a :class:`NonCommutingWarning` is emitted.
    """
    if not commutes(A, B, tol):
        warnings.warn("order-irrelevance test applied to non-commuting observables", NonCommutingWarning, stacklevel=2)
    return symmetric_difference(A, alpha, B, beta, psi, tol)[0]


def symmetric_difference(A, alpha, B, beta, psi, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    dim = _same_dim(A, B)
    psi = as_state(psi, tol, dim=dim)
    a = A.projector(alpha) @ psi
    b = B.projector(beta) @ psi
    diff = float(np.linalg.norm(a - b))
    nondegenerate = min(np.vdot(a, a).real, np.vdot(b, b).real) >= DEGENERACY_THRESHOLD
    return bool(nondegenerate and diff <= tol.threshold(1.0)), diff


def solve_triple(
    A: Observable,
    B: Observable,
    C: Observable,
    triples: GammaSet | Iterable[Sequence[float]],
    joint: bool = False,
    tol: Tolerance = DEFAULT_TOL,
    seed=DEFAULT_SEED,
) -> SolutionSpace:
    """States where ``C=gamma`` follows with certainty from ``A=alpha`` then ``B=beta``.

    With ``joint=True`` (pairwise commuting observables only) the three
    cyclic orders must all be perfectly correlated, which reduces to
    ``E_B E_A psi = E_C E_B psi = E_A E_C psi``.
    """
    dim = _same_dim(A, B, C)
    if not isinstance(triples, GammaSet):
        triples = GammaSet(triples)
    if len(triples.pairs[0]) != 3:
        raise ValueError("solve_triple needs (alpha, beta, gamma) triples")
    if joint:
        for X, Y, name in ((A, B, "A,B"), (B, C, "B,C"), (A, C, "A,C")):
            if not commutes(X, Y, tol):
                raise NotCommuting(f"joint mode needs pairwise commuting observables; {name} do not commute")
    I = np.eye(dim)
    equations, constraints = [], []
    for alpha, beta, gamma in triples:
        EA, EB, EC = A.projector(alpha), B.projector(beta), C.projector(gamma)
        tag = f"({sign_label(alpha)},{sign_label(beta)},{sign_label(gamma)})"
        equations.append(LinearCondition(f"PCC{tag}", (I - EC) @ EB @ EA))
        constraints.append(LinearCondition(f"E_B E_A psi != 0 for {tag}", EB @ EA))
        if joint:
            equations.append(LinearCondition(f"cyclic-1{tag}", EB @ EA - EC @ EB))
            equations.append(LinearCondition(f"cyclic-2{tag}", EC @ EB - EA @ EC))
            constraints.append(LinearCondition(f"E_C E_B psi != 0 for {tag}", EC @ EB))
            constraints.append(LinearCondition(f"E_A E_C psi != 0 for {tag}", EA @ EC))
    return settle(dim, equations, constraints, tol, seed)
