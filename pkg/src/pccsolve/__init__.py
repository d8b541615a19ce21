"""pccsolve: find and test states with perfect conditional correlations
between projectively measured observables."""
from .conditioning import Chain, MeasurementEvent, born, chain_conditional, conditional, luders
from .numerics import SubspaceBasis, Tolerance
from .observables import (
    GammaSet,
    Observable,
    commutes,
    conjugate,
    diagonal,
    from_eigenspaces,
    from_matrix,
    lift_local,
)
from .pcc import (
    characterize_dichotomous,
    check_pcc,
    commutator_identities,
    correlation,
    family_invariance_check,
    is_symmetric_state,
    joint_eigenspaces,
    shared_outcome_analysis,
    solve_gamma,
    solve_pair,
    solve_triple,
    unitary_covariance_check,
)

__version__ = "0.1.0"
