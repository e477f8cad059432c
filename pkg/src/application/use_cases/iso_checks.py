"""
Check suite for the image/conullspace isomorphisms.
Each operator is run through every identity; a suite run aggregates the
outcomes per check name.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

import numpy as np

from domain.entities import CheckRecord, CosetVector, Functional, Operator, SubspaceBasis
from domain.exceptions import NumericsError
from domain.services import (
    IsoContext,
    apply_coset_map,
    apply_iso_tilde,
    coset_map_norm,
    composite_norm,
    dual_iso_tilde,
    fredholm_report,
    injectivity_bound,
    invert_iso_tilde,
    invert_iso_tilde_with_oracle,
    iso_tilde_norm,
    projector_special_case,
)
from domain.value_objects import condition_aware, gaussian_matrix, relative_error, unit_vector
from domain.value_objects.tolerances import (
    COMPOSITE_NORM_RTOL,
    EQ2_SLACK,
    J_FACTORIZATION_TOL,
    LINEARITY_RTOL,
    NORM_IDENTITY_RTOL,
    PRINCIPAL_ANGLE_TOL,
    PROJECTOR_ALGEBRA_TOL,
    PROJECTOR_RTOL,
    REPRESENTATIVE_RTOL,
    ROUNDTRIP_RTOL,
)

logger = logging.getLogger(__name__)

VECTOR_SAMPLES = 4

CHECK_NAMES = (
    "iso_tilde_norm",
    "coset_map_norm",
    "composite_norm",
    "eq2_chain",
    "roundtrip_image",
    "roundtrip_conullspace",
    "construction_vs_oracle",
    "injectivity",
    "linearity",
    "representative_independence",
    "rank_equality",
    "angle_im_at_vs_nperp_a",
    "angle_im_a_vs_nperp_at",
    "j_factorization",
    "dual_expression",
    "nullity_plus_rank",
)


@dataclass(frozen=True)
class CheckOutcome:
    """Residual of one check on one operator."""
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.threshold)

    @property
    def severity(self) -> float:
        """residual / threshold; a zero threshold makes any nonzero residual infinitely severe."""
        if self.threshold > 0:
            return self.residual / self.threshold
        return 0.0 if self.residual == 0 else float("inf")


# ============================================================================
# Operators
# ============================================================================

def random_orthonormal(rng: np.random.Generator, dim: int, k: int) -> np.ndarray:
    """dim x k matrix with orthonormal columns (QR of a Gaussian matrix)."""
    if k == 0:
        return np.zeros((dim, 0))
    q, _ = np.linalg.qr(gaussian_matrix(rng, (dim, k)))
    return q


def gaussian_operator(rng: np.random.Generator, rows: int, cols: int) -> Operator:
    return Operator(gaussian_matrix(rng, (rows, cols)))


def structured_operators(
    rng: np.random.Generator,
    rows: int,
    cols: int,
    near_rank_ratio: float = 1e-8,
) -> List[Tuple[str, Operator]]:
    """
    Adversarial cases for the tolerance logic: the zero operator, an identity
    padded with zeros, duplicated columns (exact rank deficiency) and a
    geometric spectrum whose smallest value is `near_rank_ratio` of the largest.
    """
    cases = [
        ("zero", Operator.zeros(rows, cols)),
        ("identity_padded", Operator(np.eye(rows, cols))),
    ]

    independent = max(1, min(rows, cols) // 2)
    base = gaussian_matrix(rng, (rows, independent))
    duplicated = base[:, np.arange(cols) % independent]
    cases.append(("column_duplicated", Operator(duplicated)))

    k = min(rows, cols)
    spectrum = np.logspace(0.0, np.log10(near_rank_ratio), k) if k > 1 else np.ones(1)
    u = random_orthonormal(rng, rows, k)
    v = random_orthonormal(rng, cols, k)
    cases.append(("near_rank_deficient", Operator((u * spectrum) @ v.T)))
    return cases


# ============================================================================
# Per-operator checks
# ============================================================================

def _relative(diff: float, scale: float) -> float:
    return diff / scale if scale > 0 else diff


def _image_samples(ctx: IsoContext, rng: np.random.Generator, count: int) -> List[np.ndarray]:
    """Random vectors A x, i.e. elements of Im(A)."""
    return [ctx.operator.entries @ rng.standard_normal(ctx.cols) for _ in range(count)]


def evaluate_operator(A: Operator, rng: np.random.Generator, tol: float) -> List[CheckOutcome]:
    """
    Run every isomorphism identity on A.

    Args:
        A: Operator under test
        rng: Stream for the random vectors of the checks
        tol: Rank threshold

    Returns:
        One CheckOutcome per name in CHECK_NAMES, in that order
    """
    ctx = IsoContext.build(A, tol)
    norm = ctx.norm
    slack_roundtrip = condition_aware(ROUNDTRIP_RTOL, ctx.condition)
    slack_angle = condition_aware(PRINCIPAL_ANGLE_TOL, ctx.condition)
    outcomes: Dict[str, CheckOutcome] = {}

    def record(name: str, residual: float, threshold: float) -> None:
        outcomes[name] = CheckOutcome(name, float(residual), float(threshold))

    # Norm identities
    tilde_norm = iso_tilde_norm(ctx)
    hat_norm = coset_map_norm(ctx)
    record("iso_tilde_norm", _relative(abs(tilde_norm - norm), norm), NORM_IDENTITY_RTOL)
    record("coset_map_norm", _relative(abs(hat_norm - norm), norm), NORM_IDENTITY_RTOL)
    record("composite_norm", _relative(abs(composite_norm(ctx) - norm ** 2), norm ** 2), COMPOSITE_NORM_RTOL)

    # |tilde| |Ap| >= |Ap|^2 for unit p
    worst = 0.0
    for _ in range(VECTOR_SAMPLES):
        ap = float(np.linalg.norm(A.entries @ unit_vector(rng, ctx.cols)))
        worst = max(worst, _relative(max(0.0, ap * ap - tilde_norm * ap), norm ** 2))
    record("eq2_chain", worst, EQ2_SLACK)

    # Roundtrips and the constructive inverse against the oracle
    image_worst = 0.0
    for h in _image_samples(ctx, rng, VECTOR_SAMPLES):
        back = invert_iso_tilde(ctx, apply_iso_tilde(ctx, h))
        image_worst = max(image_worst, relative_error(back, h))
    record("roundtrip_image", image_worst, slack_roundtrip)

    conull_worst = 0.0
    oracle_worst = 0.0
    for _ in range(VECTOR_SAMPLES):
        f = ctx.operator.apply_transpose(rng.standard_normal(ctx.rows))
        inverse = invert_iso_tilde_with_oracle(ctx, Functional(f))
        oracle_worst = max(oracle_worst, inverse.disagreement)
        conull_worst = max(conull_worst, relative_error(apply_iso_tilde(ctx, inverse.preimage).coords, f))
    record("roundtrip_conullspace", conull_worst, slack_roundtrip)
    record("construction_vs_oracle", oracle_worst, slack_roundtrip)

    # |tilde h| >= sigma_min+ on unit h in Im(A)
    sigma_min = injectivity_bound(ctx)
    worst = 0.0
    if ctx.rank:
        for _ in range(VECTOR_SAMPLES):
            h = ctx.image.vectors @ unit_vector(rng, ctx.rank)
            ratio = apply_iso_tilde(ctx, h).norm() / sigma_min
            worst = max(worst, max(0.0, 1.0 - ratio))
    record("injectivity", worst, condition_aware(ROUNDTRIP_RTOL, ctx.condition))

    # Linearity of tilde
    h1, h2 = _image_samples(ctx, rng, 2)
    alpha, beta = rng.standard_normal(2)
    combined = apply_iso_tilde(ctx, alpha * h1 + beta * h2).coords
    separate = alpha * apply_iso_tilde(ctx, h1).coords + beta * apply_iso_tilde(ctx, h2).coords
    scale = norm * (abs(alpha) * np.linalg.norm(h1) + abs(beta) * np.linalg.norm(h2))
    record("linearity", _relative(float(np.linalg.norm(combined - separate)), scale), LINEARITY_RTOL)

    # hat does not see the representative
    worst = 0.0
    if ctx.nullspace.dim and norm > 0:
        for _ in range(VECTOR_SAMPLES):
            coset = CosetVector(rng.standard_normal(ctx.cols), ctx.nullspace)
            n = ctx.nullspace.vectors @ rng.standard_normal(ctx.nullspace.dim)
            moved = apply_coset_map(ctx, coset.shifted(n)) - apply_coset_map(ctx, coset)
            worst = max(worst, _relative(float(np.linalg.norm(moved)), norm * float(np.linalg.norm(n))))
    record("representative_independence", worst, REPRESENTATIVE_RTOL)

    # Fredholm identities
    fredholm = fredholm_report(ctx)
    record("rank_equality", abs(fredholm.rank_a - fredholm.rank_at), 0.0)
    record("angle_im_at_vs_nperp_a", fredholm.angle_im_at_vs_nperp_a, slack_angle)
    record("angle_im_a_vs_nperp_at", fredholm.angle_im_a_vs_nperp_at, slack_angle)
    record("j_factorization", fredholm.j_factorization_residual, J_FACTORIZATION_TOL)

    worst = 0.0
    for h in _image_samples(ctx, rng, VECTOR_SAMPLES):
        diff = dual_iso_tilde(ctx, h).coords - apply_iso_tilde(ctx, h).coords
        worst = max(worst, _relative(float(np.linalg.norm(diff)), norm * float(np.linalg.norm(h))))
    record("dual_expression", worst, J_FACTORIZATION_TOL)

    record("nullity_plus_rank", abs(ctx.nullspace.dim + ctx.rank - ctx.cols), 0.0)

    return [outcomes[name] for name in CHECK_NAMES]


def safe_evaluate(label: str, A: Operator, rng: np.random.Generator, tol: float) -> List[CheckOutcome]:
    """evaluate_operator, turning a numerics error into failing outcomes for every check."""
    try:
        return evaluate_operator(A, rng, tol)
    except NumericsError as e:
        logger.warning(f"Operator {label} ({A.rows}x{A.cols}) raised {type(e).__name__}: {e}")
        return [CheckOutcome(name, float("inf"), 0.0) for name in CHECK_NAMES]


# ============================================================================
# Suite-level checks
# ============================================================================

def riesz_identity_check(rng: np.random.Generator, dim: int, tol: float) -> CheckOutcome:
    """A = I: tilde is the Riesz map h |-> (h|.) and its inverse gives h back."""
    ctx = IsoContext.build(Operator.identity(dim), tol)
    worst = 0.0
    for _ in range(VECTOR_SAMPLES):
        h = rng.standard_normal(dim)
        f = apply_iso_tilde(ctx, h)
        worst = max(worst, float(np.max(np.abs(f.coords - h))))
        worst = max(worst, relative_error(invert_iso_tilde(ctx, f), h))
    return CheckOutcome("riesz_identity", worst, J_FACTORIZATION_TOL)


def projector_checks(
    rng: np.random.Generator,
    dims: Iterable[int],
    draws: int,
    tol: float,
) -> List[CheckOutcome]:
    """
    A = I - P_N on random subspaces N: A = A^T = A^2 and tilde-hat(x+N) = Ax,
    one random x per drawn N.
    """
    dims = list(dims)
    composite = 0.0
    algebra = 0.0
    for i in range(draws):
        d = dims[i % len(dims)]
        k = int(rng.integers(0, d + 1))
        N = SubspaceBasis(d, random_orthonormal(rng, d, k))
        report = projector_special_case(N, rng, samples=1, tol=tol)
        composite = max(composite, report.composite_residual)
        algebra = max(algebra, report.symmetry_residual, report.idempotency_residual)
    return [
        CheckOutcome("projector_special_case", composite, PROJECTOR_RTOL),
        CheckOutcome("projector_algebra", algebra, PROJECTOR_ALGEBRA_TOL),
    ]


def aggregate(outcomes: Iterable[CheckOutcome]) -> List[CheckRecord]:
    """
    One record per check name, in first-seen order. Each record carries the
    residual and threshold of its most severe trial; it passes iff every
    trial passed.
    """
    worst: Dict[str, CheckOutcome] = {}
    counts: Dict[str, int] = {}
    all_passed: Dict[str, bool] = {}
    for outcome in outcomes:
        counts[outcome.name] = counts.get(outcome.name, 0) + 1
        all_passed[outcome.name] = all_passed.get(outcome.name, True) and outcome.passed
        current = worst.get(outcome.name)
        if current is None or outcome.severity > current.severity:
            worst[outcome.name] = outcome

    return [
        CheckRecord(
            name=name,
            worst_residual=outcome.residual,
            threshold=outcome.threshold,
            passed=all_passed[name],
            trials=counts[name],
        )
        for name, outcome in worst.items()
    ]
