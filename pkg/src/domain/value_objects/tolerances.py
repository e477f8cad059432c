"""
Tolerances shared by the numerical core and the check suites.
Every threshold the checks compare against is defined here.
"""
import numpy as np


DEFAULT_TOL = 1e-10              # relative rank threshold tol * sigma_max
MACHINE_EPS = float(np.finfo(np.float64).eps)

NORM_IDENTITY_RTOL = 1e-10       # |iso norm - |A|| and |coset norm - |A||
COMPOSITE_NORM_RTOL = 1e-8       # ||composite| - |A|^2|
ROUNDTRIP_RTOL = 1e-8            # both isomorphism roundtrips, construction vs oracle
PRINCIPAL_ANGLE_TOL = 1e-8
J_FACTORIZATION_TOL = 1e-12
LINEARITY_RTOL = 1e-12
REPRESENTATIVE_RTOL = 1e-12
PROJECTOR_RTOL = 1e-10
PROJECTOR_ALGEBRA_TOL = 1e-12    # symmetry and idempotency of projectors
EQ2_SLACK = 1e-10

DIVERGENCE_SUM_RTOL = 1e-12      # weighted sum of DV relative to |V|
ZERO_MEAN_RTOL = 1e-12
EXACT_RECOVERY_RTOL = 1e-10
CONTINUITY_SLACK = 1e-10
SOLVER_AGREEMENT_RTOL = 1e-8
MMS_MIN_RATIO = 3.5

# Forward-error slack factor: checks that solve with A use max(stated, this * eps * cond).
CONDITION_SLACK_FACTOR = 64.0


def relative_threshold(sigma_max: float, tol: float = DEFAULT_TOL) -> float:
    """Absolute cutoff below which a singular value counts as zero."""
    return tol * sigma_max


def condition_aware(stated: float, condition: float) -> float:
    """
    Threshold for a forward-error check on a solve with condition number `condition`.
    Equals `stated` for well-conditioned operators.
    """
    if not np.isfinite(condition):
        return stated
    return max(stated, CONDITION_SLACK_FACTOR * MACHINE_EPS * condition)


def relative_error(actual, expected) -> float:
    """|actual - expected| / max(|expected|, tiny); 0 when both vanish."""
    diff = float(np.linalg.norm(np.asarray(actual) - np.asarray(expected)))
    scale = float(np.linalg.norm(np.asarray(expected)))
    if scale == 0.0:
        return diff
    return diff / scale
