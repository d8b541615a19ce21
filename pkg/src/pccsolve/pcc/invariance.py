"""Unitary covariance of PCC solutions and form invariance of the
singlet-type state under local unitary families."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import DimensionMismatch
from ..numerics import (
    DEFAULT_TOL,
    SubspaceBasis,
    Tolerance,
    fix_phase,
    random_unitary,
    require_unitary,
    same_subspace,
)
from ..observables import GammaSet, Observable, conjugate, lift_local, require_dichotomous
from .core import DEFAULT_SEED, check_pcc, solve_gamma


def unitary_covariance_check(
    A: Observable,
    B: Observable,
    gamma: GammaSet | Iterable[Sequence[float]],
    U,
    tol: Tolerance = DEFAULT_TOL,
    symmetric: bool = False,
    seed=DEFAULT_SEED,
) -> bool:
    """Do the PCC solutions transform covariantly under psi -> U psi, X -> U X U^dagger?

    True iff feasibility agrees, the conjugated solution space equals the
    rotated original, and the rotated witness is PCC for every pair under
    the conjugated observables.
    """
    U = require_unitary(U, tol)
    if not isinstance(gamma, GammaSet):
        gamma = GammaSet(gamma)
    S = solve_gamma(A, B, gamma, symmetric=symmetric, tol=tol, seed=seed)
    AU, BU = conjugate(A, U, tol), conjugate(B, U, tol)
    SU = solve_gamma(AU, BU, gamma, symmetric=symmetric, tol=tol, seed=seed)
    if S.feasible != SU.feasible:
        return False
    rotated = SubspaceBasis(U @ S.linear_basis.vectors, dim=A.dim, check=False)
    if not same_subspace(rotated, SU.linear_basis, tol):
        return False
    if S.feasible:
        w = U @ S.witness
        for alpha, beta in gamma:
            if not check_pcc(AU, alpha, BU, beta, w, tol).holds:
                return False
    return True


@dataclass(frozen=True)
class FamilyReport:
    trials: int
    singlet_passes: tuple[bool, ...]  # (±,∓) PCC of the c+- = -c-+ state per unitary
    form_preserved: tuple[bool, ...]  # state equals its rotated-basis expression up to phase
    control_passes: tuple[bool, ...]  # same PCC test for the c+- = +c-+ state

    @property
    def all_pass(self) -> bool:
        return all(self.singlet_passes)

    @property
    def control_failures(self) -> int:
        return sum(not p for p in self.control_passes)


def _anti_pcc(A: Observable, B: Observable, psi, tol: Tolerance) -> bool:
    return check_pcc(A, 1, B, -1, psi, tol).holds and check_pcc(A, -1, B, 1, psi, tol).holds


def _pair_state(a: Observable, b: Observable, relative_sign: int) -> np.ndarray:
    f = {v: fix_phase(a.eigenspace(v).vectors[:, 0]) for v in (1, -1)}
    g = {v: fix_phase(b.eigenspace(v).vectors[:, 0]) for v in (1, -1)}
    return (np.kron(f[1], g[-1]) + relative_sign * np.kron(f[-1], g[1])) / np.sqrt(2)


def family_invariance_check(
    a: Observable,
    b: Observable,
    trials: int = 20,
    seed=DEFAULT_SEED,
    tol: Tolerance = DEFAULT_TOL,
    unitaries: Sequence | None = None,
) -> FamilyReport:
    """Test the state (|f+ g-> - |f- g+>)/sqrt2 against the family u a u^dagger, u b u^dagger.

    ``f``/``g`` are the eigenbases of the 2-level observables ``a``/``b``.
    For each local unitary ``u`` (seeded Haar draws unless ``unitaries`` is
    given) the fixed state is tested for (±,∓) PCC under
    ``A_u = a_u ⊗ I`` and ``B_u = I ⊗ b_u``. The control state with
    ``c+- = +c-+`` goes through the same test.
    """
    require_dichotomous(a, b)
    if a.dim != 2 or b.dim != 2:
        raise DimensionMismatch("family invariance is defined for 2-level local observables")
    if unitaries is None:
        rng = np.random.default_rng(seed)
        unitaries = [random_unitary(2, rng) for _ in range(trials)]
    unitaries = [require_unitary(u, tol) for u in unitaries]
    singlet = _pair_state(a, b, -1)
    control = _pair_state(a, b, +1)
    sp, fp, cp = [], [], []
    for u in unitaries:
        au, bu = conjugate(a, u, tol), conjugate(b, u, tol)
        Au, Bu = lift_local(au, 0, (2, 2), tol), lift_local(bu, 1, (2, 2), tol)
        sp.append(_anti_pcc(Au, Bu, singlet, tol))
        cp.append(_anti_pcc(Au, Bu, control, tol))
        rotated = np.kron(u, u) @ singlet
        fp.append(bool(abs(abs(np.vdot(rotated, singlet)) - 1.0) <= tol.threshold(1.0)))
    return FamilyReport(len(unitaries), tuple(sp), tuple(fp), tuple(cp))
