"""
Dense real linear algebra substrate: singular value decompositions, subspace
bases, orthogonal projectors, ranks and the minimum-norm least-squares solve.

One SVD (`decompose`) feeds rank, image, nullspace and the cokernel N(A^T) so
that they agree with each other exactly. Rank decisions use the relative
threshold tol * sigma_max; the zero operator has rank 0, the full standard
basis as nullspace and an empty image.
"""
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from domain.entities import Operator, SubspaceBasis, as_real_array
from domain.exceptions import DimensionMismatchError, InvalidInputError
from domain.value_objects import DEFAULT_TOL, relative_threshold

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SingularDecomposition:
    """
    Full SVD A = U diag(s) V^T together with the threshold that splits it.
    U is rows x rows, V^T is cols x cols, s is descending.
    """
    rows: int
    cols: int
    u: np.ndarray
    s: np.ndarray
    vt: np.ndarray
    tol: float

    @property
    def sigma_max(self) -> float:
        return float(self.s[0]) if self.s.size else 0.0

    @property
    def cutoff(self) -> float:
        return relative_threshold(self.sigma_max, self.tol)

    @property
    def rank(self) -> int:
        if self.sigma_max == 0.0:
            return 0
        return int(np.count_nonzero(self.s > self.cutoff))

    @property
    def sigma_min_nonzero(self) -> float:
        """Smallest singular value above the cutoff, 0 for rank 0."""
        r = self.rank
        return float(self.s[r - 1]) if r else 0.0

    @property
    def condition(self) -> float:
        """sigma_max / sigma_min_nonzero on the image; inf for rank 0."""
        smin = self.sigma_min_nonzero
        return self.sigma_max / smin if smin > 0 else float("inf")

    def image(self) -> SubspaceBasis:
        """Orthonormal basis of Im(A) in R^rows."""
        return SubspaceBasis(self.rows, self.u[:, :self.rank], self.tol)

    def cokernel(self) -> SubspaceBasis:
        """Orthonormal basis of N(A^T) = Im(A)-perp in R^rows."""
        if self.rank == 0:
            return SubspaceBasis.standard(self.rows, self.tol)
        return SubspaceBasis(self.rows, self.u[:, self.rank:], self.tol)

    def row_space(self) -> SubspaceBasis:
        """Orthonormal basis of N(A)-perp = Im(A^T) in R^cols."""
        return SubspaceBasis(self.cols, self.vt[:self.rank].T, self.tol)

    def nullspace(self) -> SubspaceBasis:
        """Orthonormal basis of N(A) in R^cols."""
        if self.rank == 0:
            return SubspaceBasis.standard(self.cols, self.tol)
        return SubspaceBasis(self.cols, self.vt[self.rank:].T, self.tol)


def decompose(A: Operator, tol: float = DEFAULT_TOL) -> SingularDecomposition:
    """
    Full singular value decomposition of A with rank threshold tol.

    Raises:
        InvalidInputError: tol not positive
    """
    if not tol > 0:
        raise InvalidInputError(f"rank tolerance must be positive, got {tol}")
    try:
        u, s, vt = scipy.linalg.svd(A.entries, full_matrices=True, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        logger.warning(f"gesdd did not converge on a {A.rows}x{A.cols} operator, retrying with gesvd")
        u, s, vt = scipy.linalg.svd(A.entries, full_matrices=True, lapack_driver="gesvd")
    return SingularDecomposition(rows=A.rows, cols=A.cols, u=u, s=s, vt=vt, tol=tol)


def singular_values(A: Operator) -> np.ndarray:
    """Singular values of A in descending order."""
    return scipy.linalg.svdvals(A.entries)


def operator_norm(A: Operator) -> float:
    """Largest singular value of A (0 for the zero operator)."""
    s = singular_values(A)
    return float(s[0]) if s.size else 0.0


def nullspace_basis(A: Operator, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of {x : |Ax| <= tol * sigma_max * |x|}."""
    return decompose(A, tol).nullspace()


def image_basis(A: Operator, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of the column space of A."""
    return decompose(A, tol).image()


def rank(A: Operator, tol: float = DEFAULT_TOL) -> int:
    """Number of singular values above tol * sigma_max."""
    if not tol > 0:
        raise InvalidInputError(f"rank tolerance must be positive, got {tol}")
    s = singular_values(A)
    if not s.size or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > relative_threshold(s[0], tol)))


def ortho_projector(B: SubspaceBasis) -> Operator:
    """Orthogonal projector P = V V^T onto span(B)."""
    return Operator(B.vectors @ B.vectors.T) if B.dim else Operator.zeros(B.ambient_dim, B.ambient_dim)


def project(B: SubspaceBasis, x) -> np.ndarray:
    """P_B x computed as V (V^T x), without forming P."""
    vec = as_real_array(x, "vector")
    if vec.size != B.ambient_dim:
        raise DimensionMismatchError(f"vector has dimension {vec.size}, subspace lives in {B.ambient_dim}")
    if not B.dim:
        return np.zeros(B.ambient_dim)
    return B.vectors @ (B.vectors.T @ vec)


def distance_to_span(B: SubspaceBasis, x) -> float:
    """|x - P_B x|."""
    vec = as_real_array(x, "vector")
    return float(np.linalg.norm(vec - project(B, vec)))


def complement_basis(B: SubspaceBasis) -> SubspaceBasis:
    """Orthonormal basis of span(B)-perp."""
    d, k = B.ambient_dim, B.dim
    if k == 0:
        return SubspaceBasis.standard(d, B.tol_used)
    if k == d:
        return SubspaceBasis.empty(d, B.tol_used)
    q, _ = scipy.linalg.qr(B.vectors, mode="full")
    return SubspaceBasis(d, q[:, k:], B.tol_used)


def largest_principal_angle(first: SubspaceBasis, second: SubspaceBasis) -> float:
    """
    Largest principal angle between two subspaces, in radians.
    0 when both are {0} or both are the whole space; pi/2 when dimensions differ.
    """
    if first.ambient_dim != second.ambient_dim:
        raise DimensionMismatchError(
            f"subspaces live in different spaces ({first.ambient_dim} vs {second.ambient_dim})"
        )
    if first.dim != second.dim:
        return float(np.pi / 2)
    if first.dim == 0 or first.dim == first.ambient_dim:
        return 0.0
    return float(np.max(scipy.linalg.subspace_angles(first.vectors, second.vectors)))


def min_norm_least_squares(A: Operator, b, tol: float = DEFAULT_TOL) -> np.ndarray:
    """
    Minimum-norm minimizer of |Ax - b| through the truncated pseudoinverse
    V_r diag(1/s_r) U_r^T b. The result lies in the row space of A.

    Raises:
        DimensionMismatchError: b does not match the rows of A
    """
    rhs = as_real_array(b, "right-hand side")
    if rhs.size != A.rows:
        raise DimensionMismatchError(f"right-hand side has dimension {rhs.size}, operator has {A.rows} rows")
    u, s, vt = scipy.linalg.svd(A.entries, full_matrices=False)
    if not s.size or s[0] == 0.0:
        return np.zeros(A.cols)
    r = int(np.count_nonzero(s > relative_threshold(s[0], tol)))
    return vt[:r].T @ ((u[:, :r].T @ rhs) / s[:r])


def pseudo_inverse_apply(svd: SingularDecomposition, b) -> np.ndarray:
    """Apply the truncated pseudoinverse of an already decomposed operator."""
    rhs = as_real_array(b, "right-hand side")
    if rhs.size != svd.rows:
        raise DimensionMismatchError(f"right-hand side has dimension {rhs.size}, operator has {svd.rows} rows")
    r = svd.rank
    if r == 0:
        return np.zeros(svd.cols)
    return svd.vt[:r].T @ ((svd.u[:, :r].T @ rhs) / svd.s[:r])
