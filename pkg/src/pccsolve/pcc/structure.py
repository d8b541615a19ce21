"""Structural analyses for commuting pairs: joint eigenspaces, the
dichotomous characterization, correlations, shared outcomes and the
commutator identities for two pairs of observables."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..conditioning import DEGENERACY_THRESHOLD
from ..errors import CrossPairNotCommuting, NotCommuting, NotDichotomous
from ..numerics import DEFAULT_TOL, SubspaceBasis, Tolerance, as_state, direct_sum, intersect
from ..observables import Observable, commutes, require_dichotomous, sign_label
from .core import (
    DEFAULT_SEED,
    LinearCondition,
    SolutionSpace,
    _same_dim,
    check_pcc,
    settle,
    solve_gamma,
    symmetric_difference,
)


def joint_eigenspaces(A: Observable, B: Observable, tol: Tolerance = DEFAULT_TOL) -> dict[tuple[float, float], SubspaceBasis]:
    """H_A(alpha) ∩ H_B(beta) for every value pair (ascending order)."""
    _same_dim(A, B)
    if not commutes(A, B, tol):
        raise NotCommuting("joint eigenspaces need commuting observables")
    return {
        (alpha, beta): intersect(A.eigenspace(alpha), B.eigenspace(beta), tol)
        for alpha in A.values
        for beta in B.values
    }


def characterize_dichotomous(
    A: Observable, B: Observable, sign: int, tol: Tolerance = DEFAULT_TOL, seed=DEFAULT_SEED
) -> SolutionSpace:
    """A = sign*B entangled states as superpositions of joint eigenvectors.

    ``sign=-1`` gives H_AB(+-) ⊕ H_AB(-+) with both components nonzero,
    ``sign=+1`` the (++)/(--) analogue.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    require_dichotomous(A, B)
    spaces = joint_eigenspaces(A, B, tol)
    keep = [(1.0, float(sign)), (-1.0, -float(sign))]
    drop = [(1.0, -float(sign)), (-1.0, float(sign))]

    def label(pair):
        return f"H_AB({sign_label(pair[0])}{sign_label(pair[1])})"

    L = direct_sum(*(spaces[p] for p in keep), tol=tol)
    equations = [LinearCondition(f"{label(p)} component = 0", spaces[p].projector()) for p in drop]
    constraints = [LinearCondition(f"{label(p)} component != 0", spaces[p].projector()) for p in keep]
    return settle(A.dim, equations, constraints, tol, seed, space=L)


def complete_dichotomous_gamma(sign: int) -> list[tuple[float, float]]:
    return [(1.0, float(sign)), (-1.0, -float(sign))]


@dataclass(frozen=True)
class Correlation:
    value: complex  # <psi| A B |psi>
    anti_residual: float  # ||A B psi + psi||
    co_residual: float  # ||A B psi - psi||


def correlation(A: Observable, B: Observable, psi, tol: Tolerance = DEFAULT_TOL) -> Correlation:
    dim = _same_dim(A, B)
    psi = as_state(psi, tol, dim=dim)
    ab = A.matrix @ (B.matrix @ psi)
    return Correlation(
        complex(np.vdot(psi, ab)),
        float(np.linalg.norm(ab + psi)),
        float(np.linalg.norm(ab - psi)),
    )


@dataclass(frozen=True)
class Conflict:
    alpha: float
    beta_prime: float
    infeasible: bool
    blocking: tuple[str, ...]


@dataclass(frozen=True)
class SharedOutcomeBranch:
    """The (+, beta) / (-, beta) analysis for a dichotomous A."""

    in_eigenspace: bool
    eigenspace_residual: float  # ||E_B(beta) psi - psi||
    commutator_residuals: dict  # gamma -> ||[E_B(beta), E_A(gamma)] psi||
    pcc: dict  # gamma -> PccVerdict for (A=gamma, B=beta)
    reverse_probabilities: dict  # gamma -> P(A=gamma | B=beta) or None
    symmetric: dict  # gamma -> bool

    @property
    def both_pcc(self) -> bool:
        return all(v.holds for v in self.pcc.values())

    @property
    def any_symmetric(self) -> bool:
        return any(self.symmetric.values())


@dataclass(frozen=True)
class SharedOutcomeReport:
    beta: float
    conflicts: tuple[Conflict, ...]
    branch: SharedOutcomeBranch | None

    @property
    def all_conflicts_infeasible(self) -> bool:
        return all(c.infeasible for c in self.conflicts)


def shared_outcome_analysis(
    A: Observable,
    B: Observable,
    beta: float,
    psi,
    tol: Tolerance = DEFAULT_TOL,
    dichotomous_branch: bool | None = None,
    seed=DEFAULT_SEED,
) -> SharedOutcomeReport:
    """Can one outcome of B be certain after several outcomes of A (or vice versa)?

    Part one solves (alpha, beta) together with (alpha, beta') for every
    alpha and every beta' != beta; each system must be infeasible. Part two
    (dichotomous A; run automatically when applicable, forced with
    ``dichotomous_branch=True``) checks whether psi is a beta-eigenstate of B,
    whether the projectors commute on psi, both PCC verdicts, the reverse
    conditional probabilities and the order-irrelevance test.
    """
    dim = _same_dim(A, B)
    psi = as_state(psi, tol, dim=dim)
    B.index(beta)
    conflicts = []
    for alpha in A.values:
        for beta_prime in B.values:
            if beta_prime == B.values[B.index(beta)]:
                continue
            S = solve_gamma(A, B, [(alpha, beta), (alpha, beta_prime)], tol=tol, seed=seed)
            conflicts.append(Conflict(alpha, beta_prime, not S.feasible, S.blocking))

    if dichotomous_branch is None:
        dichotomous_branch = A.is_dichotomous
    branch = None
    if dichotomous_branch:
        if not A.is_dichotomous:
            raise NotDichotomous("the shared-outcome branch needs a dichotomous A")
        EB = B.projector(beta)
        resid = float(np.linalg.norm(EB @ psi - psi))
        comms, verdicts, reverse, sym = {}, {}, {}, {}
        pb = float(np.vdot(EB @ psi, EB @ psi).real)
        for gamma in A.values:
            EA = A.projector(gamma)
            comms[gamma] = float(np.linalg.norm((EB @ EA - EA @ EB) @ psi))
            verdicts[gamma] = check_pcc(A, gamma, B, beta, psi, tol)
            if pb >= DEGENERACY_THRESHOLD:
                v = EA @ (EB @ psi)
                reverse[gamma] = min(float(np.vdot(v, v).real) / pb, 1.0)
            else:
                reverse[gamma] = None
            sym[gamma] = symmetric_difference(A, gamma, B, beta, psi, tol)[0]
        branch = SharedOutcomeBranch(resid <= tol.threshold(1.0), resid, comms, verdicts, reverse, sym)
    return SharedOutcomeReport(float(B.values[B.index(beta)]), tuple(conflicts), branch)


@dataclass(frozen=True)
class CommutatorReport:
    applicable: bool  # psi is (±,∓) entangled for both pairs
    premise_residual: float
    operator_residual: float  # ||[B1,B2] psi + [A1,A2] psi||
    scalar_residual: float  # |<[B1,B2]> + <[A1,A2]>|
    square_residual: float  # ||[A1,A2][B1,B2] psi + [A1,A2]^2 psi||
    norm_residual: float  # |<psi|[A1,A2][B1,B2] psi> - ||[A1,A2] psi||^2|
    commutator_norm: float  # ||[A1,A2] psi||, to show the identity is not vacuous

    @property
    def max_residual(self) -> float:
        return max(self.operator_residual, self.scalar_residual, self.square_residual, self.norm_residual)


def commutator_identities(
    A1: Observable, A2: Observable, B1: Observable, B2: Observable, psi, tol: Tolerance = DEFAULT_TOL
) -> CommutatorReport:
    """Residuals of the commutator identities implied by two (±,∓) pairs.

    Since [A1,A2] is anti-Hermitian, ``[B1,B2] psi = -[A1,A2] psi`` gives
    ``<psi|[A1,A2][B1,B2] psi> = +||[A1,A2] psi||^2``.

    Each ``A_i`` must commute with each ``B_j``. Whether ``psi`` actually is
    (±,∓) entangled for ``(A1,B1)`` and ``(A2,B2)`` is checked and reported
    in ``applicable``; the residuals are computed either way.
    """
    dim = _same_dim(A1, A2, B1, B2)
    require_dichotomous(A1, A2, B1, B2)
    for i, Ai in enumerate((A1, A2), 1):
        for j, Bj in enumerate((B1, B2), 1):
            if not commutes(Ai, Bj, tol):
                raise CrossPairNotCommuting(f"[A{i}, B{j}] != 0")
    psi = as_state(psi, tol, dim=dim)
    premise = max(
        float(np.linalg.norm(B1.projector(1) @ psi - A1.projector(-1) @ psi)),
        float(np.linalg.norm(B2.projector(1) @ psi - A2.projector(-1) @ psi)),
    )
    a1, a2, b1, b2 = A1.matrix, A2.matrix, B1.matrix, B2.matrix
    CA = a1 @ a2 - a2 @ a1
    CB = b1 @ b2 - b2 @ b1
    ca, cb = CA @ psi, CB @ psi
    return CommutatorReport(
        applicable=premise <= tol.threshold(1.0),
        premise_residual=premise,
        operator_residual=float(np.linalg.norm(cb + ca)),
        scalar_residual=float(abs(np.vdot(psi, cb) + np.vdot(psi, ca))),
        square_residual=float(np.linalg.norm(CA @ cb + CA @ ca)),
        norm_residual=float(abs(np.vdot(psi, CA @ cb) - np.vdot(ca, ca).real)),
        commutator_norm=float(np.linalg.norm(ca)),
    )
