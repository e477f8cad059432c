"""
The natural isomorphisms of a real operator A : X -> H.

    tilde:  Im(A) -> N-perp(A),        h |-> (h|A)  (coords A^T h)
    hat:    X/N(A) -> Im(A),           x + N(A) |-> Ax
    tilde o hat: X/N(A) -> N-perp(A),  x + N(A) |-> (Ax|A)

X* is identified with R^cols through the standard dual basis, so the duality
map J : H -> H* is the identity matrix and the dual norm is Euclidean.
Quotient norms are realized exactly by restricting to N(A)-perp.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from domain.entities import CosetVector, Functional, Operator, SubspaceBasis, as_real_array
from domain.exceptions import (
    DimensionMismatchError,
    NotInConullspaceError,
    NotInImageError,
)
from domain.services.operator_core import (
    SingularDecomposition,
    complement_basis,
    decompose,
    distance_to_span,
    largest_principal_angle,
    ortho_projector,
    project,
    pseudo_inverse_apply,
)
from domain.value_objects import DEFAULT_TOL, condition_aware, relative_error, rng_for
from domain.value_objects.tolerances import ROUNDTRIP_RTOL

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class IsoContext:
    """
    Everything the isomorphisms of A need, computed once.
    A and A^T are decomposed separately so that the Fredholm identities
    compare independently computed subspaces.
    """
    operator: Operator
    tol: float
    svd: SingularDecomposition
    svd_transpose: SingularDecomposition
    image: SubspaceBasis            # Im(A), in R^rows
    nullspace: SubspaceBasis        # N(A), in R^cols
    image_transpose: SubspaceBasis  # Im(A^T), in R^cols
    nullspace_transpose: SubspaceBasis  # N(A^T), in R^rows
    image_projector: Operator
    null_projector: Operator

    @classmethod
    def build(cls, operator: Operator, tol: float = DEFAULT_TOL) -> "IsoContext":
        """Decompose A and A^T and cache bases and projectors."""
        svd = decompose(operator, tol)
        svd_t = decompose(operator.transpose(), tol)
        image = svd.image()
        nullspace = svd.nullspace()
        logger.debug(
            f"IsoContext {operator.rows}x{operator.cols}: rank {svd.rank}, "
            f"sigma_max {svd.sigma_max:.6e}, nullity {nullspace.dim}"
        )
        return cls(
            operator=operator,
            tol=tol,
            svd=svd,
            svd_transpose=svd_t,
            image=image,
            nullspace=nullspace,
            image_transpose=svd_t.image(),
            nullspace_transpose=svd_t.nullspace(),
            image_projector=ortho_projector(image),
            null_projector=ortho_projector(nullspace),
        )

    @property
    def rows(self) -> int:
        return self.operator.rows

    @property
    def cols(self) -> int:
        return self.operator.cols

    @property
    def rank(self) -> int:
        return self.svd.rank

    @property
    def norm(self) -> float:
        return self.svd.sigma_max

    @property
    def condition(self) -> float:
        return self.svd.condition

    def row_space(self) -> SubspaceBasis:
        """N-perp(A) as a subspace of R^cols (from the SVD of A)."""
        return self.svd.row_space()

    def consistency_residual(self) -> float:
        """|P_Im A - A| / |A|; 0 for the zero operator."""
        if self.norm == 0.0:
            return 0.0
        A = self.operator.entries
        return float(np.linalg.norm(self.image_projector.entries @ A - A, 2) / self.norm)


@dataclass(frozen=True)
class MembershipResult:
    """Outcome of a subspace-membership test."""
    contained: bool
    residual: float


@dataclass(frozen=True, eq=False)
class InverseResult:
    """Preimage under tilde from the constructive path, with the pseudoinverse oracle."""
    preimage: np.ndarray
    oracle: np.ndarray
    disagreement: float
    threshold: float

    @property
    def agrees(self) -> bool:
        return self.disagreement <= self.threshold


@dataclass(frozen=True)
class FredholmReport:
    """Ranks of A and A^T and the principal angles of the Fredholm identities."""
    rank_a: int
    rank_at: int
    angle_im_a_vs_nperp_at: float
    angle_im_at_vs_nperp_a: float
    j_factorization_residual: float


@dataclass(frozen=True)
class ProjectorCaseReport:
    """A = I - P_N: self-adjointness, idempotency and tilde-hat(x+N) = Ax."""
    symmetry_residual: float
    idempotency_residual: float
    composite_residual: float
    nullspace_angle: float
    samples: int


def _check_codomain(ctx: IsoContext, h) -> np.ndarray:
    vec = as_real_array(h, "image vector")
    if vec.size != ctx.rows:
        raise DimensionMismatchError(f"vector has dimension {vec.size}, codomain of A is {ctx.rows}")
    return vec


def _check_dual(ctx: IsoContext, f: Functional) -> np.ndarray:
    if f.dim != ctx.cols:
        raise DimensionMismatchError(f"functional has dimension {f.dim}, domain of A is {ctx.cols}")
    return f.coords


def apply_iso_tilde(ctx: IsoContext, h) -> Functional:
    """
    tilde(h) = (h|A), the functional x |-> (h|Ax), with coords A^T h.

    Raises:
        NotInImageError: h is farther than tol*|h| from Im(A)
    """
    vec = _check_codomain(ctx, h)
    residual = distance_to_span(ctx.image, vec)
    if residual > ctx.tol * float(np.linalg.norm(vec)):
        raise NotInImageError(f"vector is not in Im(A): distance {residual:.3e}", residual)
    return Functional(ctx.operator.entries.T @ vec)


def dual_iso_tilde(ctx: IsoContext, h) -> Functional:
    """
    Dual expression of tilde on the annihilator of N(A^T) (which equals Im(A)).
    The domain test uses N(A^T) from the decomposition of A^T.
    """
    vec = _check_codomain(ctx, h)
    residual = float(np.linalg.norm(project(ctx.nullspace_transpose, vec)))
    if residual > ctx.tol * float(np.linalg.norm(vec)):
        raise NotInImageError(f"vector is not orthogonal to N(A^T): component {residual:.3e}", residual)
    return Functional(ctx.operator.entries.T @ vec)


def conullspace_contains(ctx: IsoContext, f: Functional, tol: Optional[float] = None) -> MembershipResult:
    """
    Whether f vanishes on N(A), i.e. |P_N f| <= tol * max(|f|, 1).
    Equivalently (Fredholm) f lies in Im(A^T).
    """
    coords = _check_dual(ctx, f)
    tol = ctx.tol if tol is None else tol
    if ctx.nullspace.dim:
        residual = float(np.linalg.norm(ctx.nullspace.vectors.T @ coords))
    else:
        residual = 0.0
    return MembershipResult(contained=residual <= tol * max(f.norm(), 1.0), residual=residual)


def construct_preimage(ctx: IsoContext, f: Functional) -> np.ndarray:
    """
    Preimage of f built the constructive way: find phi with A^T phi = f by least
    squares (phi is its own Riesz representative h0 since J is the identity),
    then keep the Im(A) part of h0 = h + h_perp.
    """
    coords = _check_dual(ctx, f)
    if ctx.rank == 0:
        return np.zeros(ctx.rows)
    h0, _, _, _ = scipy.linalg.lstsq(ctx.operator.entries.T, coords, cond=ctx.tol, lapack_driver="gelsy")
    return project(ctx.image, h0)


def invert_iso_tilde_with_oracle(ctx: IsoContext, f: Functional) -> InverseResult:
    """
    tilde^{-1}(f) by the constructive path, cross-checked against the
    minimum-norm solution of A^T h = f (which lands in Im(A) by itself).

    Raises:
        NotInConullspaceError: f has a component along N(A) above tolerance
    """
    membership = conullspace_contains(ctx, f)
    if not membership.contained:
        raise NotInConullspaceError(
            f"functional does not vanish on N(A): component {membership.residual:.3e}",
            membership.residual,
        )
    preimage = construct_preimage(ctx, f)
    oracle = pseudo_inverse_apply(ctx.svd_transpose, f.coords)
    return InverseResult(
        preimage=preimage,
        oracle=oracle,
        disagreement=relative_error(preimage, oracle),
        threshold=condition_aware(ROUNDTRIP_RTOL, ctx.condition),
    )


def invert_iso_tilde(ctx: IsoContext, f: Functional) -> np.ndarray:
    """The unique h in Im(A) with A^T h = f."""
    result = invert_iso_tilde_with_oracle(ctx, f)
    if not result.agrees:
        logger.warning(
            f"constructive preimage and pseudoinverse oracle disagree: "
            f"{result.disagreement:.3e} > {result.threshold:.3e}"
        )
    return result.preimage


def iso_tilde_norm(ctx: IsoContext) -> float:
    """Operator norm of h |-> A^T h restricted to Im(A), computed directly."""
    if ctx.rank == 0:
        return 0.0
    restricted = ctx.operator.entries.T @ ctx.image.vectors
    return float(scipy.linalg.svdvals(restricted)[0])


def coset_norm(ctx: IsoContext, x) -> float:
    """Quotient norm inf_{n in N(A)} |x + n| = |(I - P_N) x|."""
    vec = as_real_array(x, "vector")
    if vec.size != ctx.cols:
        raise DimensionMismatchError(f"vector has dimension {vec.size}, domain of A is {ctx.cols}")
    return float(np.linalg.norm(vec - project(ctx.nullspace, vec)))


def canonical_representative(ctx: IsoContext, c: CosetVector) -> np.ndarray:
    """Minimum-norm representative (I - P_N) x of the coset."""
    _check_coset(ctx, c)
    return c.representative - project(ctx.nullspace, c.representative)


def _check_coset(ctx: IsoContext, c: CosetVector) -> None:
    if c.nullspace.ambient_dim != ctx.cols or c.nullspace.dim != ctx.nullspace.dim:
        raise DimensionMismatchError(
            f"coset is taken modulo a {c.nullspace.dim}-dimensional subspace of R^{c.nullspace.ambient_dim}, "
            f"N(A) is {ctx.nullspace.dim}-dimensional in R^{ctx.cols}"
        )


def apply_coset_map(ctx: IsoContext, c: CosetVector) -> np.ndarray:
    """hat(x + N(A)) = Ax."""
    _check_coset(ctx, c)
    return ctx.operator.entries @ c.representative


def apply_composite(ctx: IsoContext, c: CosetVector) -> Functional:
    """tilde(hat(x + N(A))) = (Ax|A), coords A^T A x."""
    _check_coset(ctx, c)
    A = ctx.operator.entries
    return Functional(A.T @ (A @ c.representative))


def coset_map_norm(ctx: IsoContext) -> float:
    """|hat| with the quotient norm on X/N(A): largest singular value of A on N(A)-perp."""
    if ctx.rank == 0:
        return 0.0
    return float(scipy.linalg.svdvals(ctx.operator.entries @ ctx.row_space().vectors)[0])


def composite_norm(ctx: IsoContext) -> float:
    """|tilde o hat| with the quotient norm on the domain."""
    if ctx.rank == 0:
        return 0.0
    A = ctx.operator.entries
    return float(scipy.linalg.svdvals(A.T @ (A @ ctx.row_space().vectors))[0])


def injectivity_bound(ctx: IsoContext) -> float:
    """Smallest nonzero singular value: min |tilde h| over unit h in Im(A)."""
    return ctx.svd.sigma_min_nonzero


def duality_map(ctx: IsoContext) -> Operator:
    """J : H -> H*, h |-> (h|.), in standard coordinates."""
    return Operator.identity(ctx.rows)


def fredholm_report(ctx: IsoContext) -> FredholmReport:
    """
    Im(A) = annihilator of N(A^T), Im(A^T) = N-perp(A), rank A = rank A^T,
    and tilde = A^tr J restricted to Im(A).
    """
    annihilator_of_cokernel = complement_basis(ctx.nullspace_transpose)
    conullspace = complement_basis(ctx.nullspace)

    j_residual = 0.0
    if ctx.rank:
        J = duality_map(ctx).entries
        A = ctx.operator.entries
        scale = max(ctx.norm, 1.0)
        for q in ctx.image.vector_list():
            direct = apply_iso_tilde(ctx, q).coords
            factored = A.T @ (J @ q)
            j_residual = max(j_residual, float(np.linalg.norm(direct - factored)) / scale)

    return FredholmReport(
        rank_a=ctx.rank,
        rank_at=ctx.svd_transpose.rank,
        angle_im_a_vs_nperp_at=largest_principal_angle(ctx.image, annihilator_of_cokernel),
        angle_im_at_vs_nperp_a=largest_principal_angle(ctx.image_transpose, conullspace),
        j_factorization_residual=j_residual,
    )


def projector_special_case(
    N: SubspaceBasis,
    rng: Optional[np.random.Generator] = None,
    samples: int = 50,
    tol: float = DEFAULT_TOL,
) -> ProjectorCaseReport:
    """
    A = I - P_N, the ortho-projector onto N-perp. Checks A = A^T = A^2 and
    tilde-hat(x + N) = Ax on random x (A^T A = A here).
    """
    rng = rng if rng is not None else rng_for(0)
    d = N.ambient_dim
    A = np.eye(d) - ortho_projector(N).entries
    ctx = IsoContext.build(Operator(A), tol)

    composite_residual = 0.0
    for _ in range(samples):
        x = rng.standard_normal(d)
        coords = apply_composite(ctx, CosetVector(x, ctx.nullspace)).coords
        scale = max(float(np.linalg.norm(x)), 1.0)
        composite_residual = max(composite_residual, float(np.linalg.norm(coords - A @ x)) / scale)

    return ProjectorCaseReport(
        symmetry_residual=float(np.max(np.abs(A - A.T))),
        idempotency_residual=float(np.max(np.abs(A @ A - A))),
        composite_residual=composite_residual,
        nullspace_angle=largest_principal_angle(ctx.nullspace, N),
        samples=samples,
    )
