"""Perfect conditional correlation: verdicts, solvers and structure checks."""
from .core import (
    DEFAULT_SEED,
    LinearCondition,
    NonCommutingWarning,
    PccVerdict,
    SolutionSpace,
    check_pcc,
    is_symmetric_state,
    settle,
    solve_gamma,
    solve_pair,
    solve_triple,
)
from .invariance import FamilyReport, family_invariance_check, unitary_covariance_check
from .structure import (
    CommutatorReport,
    Conflict,
    Correlation,
    SharedOutcomeBranch,
    SharedOutcomeReport,
    characterize_dichotomous,
    commutator_identities,
    complete_dichotomous_gamma,
    correlation,
    joint_eigenspaces,
    shared_outcome_analysis,
)
