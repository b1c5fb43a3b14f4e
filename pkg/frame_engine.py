"""
Frame-theoretic computations for finite g-fusion frames

Operators, optimal bounds, Parseval-ization, canonical duals, minimal-norm
coefficients, gf-completeness, member deletion, frame sequences and frames
transformed by a bounded operator. Every series is a finite sum, every
operator an explicit dense matrix.

Stored operators are full compositions: the dual keeps Lambda_j pi_{W_j} S^-1,
the Parseval-ization Lambda_j pi_{W_j} S^-1/2 and a transformed frame
Lambda_j pi_{W_j} u^H. Projection onto the new subspace leaves each of them
unchanged because pi_{uV} u pi_V = u pi_V.
"""
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from errors import (
    ConditioningError,
    ConsistencyError,
    IndexOutOfRangeError,
    NotAFrameError,
    ShapeMismatchError,
)
from frame_model import CoefficientFamily, FrameBounds, FrameReport, GFusionFrame, Member
from linalg_kernel import (
    DEFAULT_TOLERANCE,
    Matrix,
    RangeDiagnostics,
    Tolerance,
    as_matrix,
    as_vector,
    eigh,
    hermitian_part,
    null_basis,
    numerical_rank,
    operator_norm,
    orthonormalize,
    pseudo_inverse,
    psd_power,
    range_diagnostics,
    sqrt_psd,
    svd,
)
from utils import print_warning

# Operations that invert S refuse anything worse conditioned than this
CONDITION_LIMIT = 1e12
# |lambda - 1| threshold for the eigenvalue-one tests of member deletion
EIGENVALUE_ONE_TOL = 1e-8


@dataclass(frozen=True)
class DualFrame:
    """Canonical dual (S^-1 W_j, Lambda_j pi_{W_j} S^-1, v_j) with S^-1 cached"""

    frame: GFusionFrame
    s_inverse: np.ndarray

    def __post_init__(self):
        s_inverse = np.array(self.s_inverse, dtype=np.complex128)
        s_inverse.setflags(write=False)
        object.__setattr__(self, "s_inverse", s_inverse)


@dataclass(frozen=True)
class DeletionReport:
    removed_index: int
    cond1_holds: bool
    cond2_holds: bool
    cond3_holds: bool
    remaining_bounds: FrameBounds
    remaining_gf_complete: bool
    remaining_is_frame: bool
    remaining_rank: int
    # distances behind the three conditions
    unit_eigen_gap_1: float
    unit_eigen_gap_2: float
    complement_sigma_min: float


@dataclass(frozen=True)
class TransformDiagnostics:
    singular_values: np.ndarray
    rank: int
    range: RangeDiagnostics
    sequence_bounds: FrameBounds
    sequence_dim: int
    identity_residual: float

    @property
    def is_frame_sequence(self) -> bool:
        return self.sequence_dim > 0 and self.sequence_bounds.lower > 0.0


@dataclass(frozen=True)
class SurjectivityReport:
    synthesis_rank: int
    frame_operator_rank: int
    is_surjective: bool
    lower_from_pseudo_inverse: float
    upper_from_norm: float


# ---------------------------------------------------------------------------
# Synthesis, analysis and the frame operator
# ---------------------------------------------------------------------------

def _vector(frame: GFusionFrame, f) -> np.ndarray:
    arr = as_vector(f)
    if arr.shape[0] != frame.ambient_dim:
        raise ShapeMismatchError(f"vector has length {arr.shape[0]}, ambient dimension is {frame.ambient_dim}")
    return arr


def analysis_matrix(frame: GFusionFrame) -> Matrix:
    """T_Lambda^* assembled as the stacked blocks v_j Lambda_j pi_{W_j}"""
    blocks = [member.weight * member.restricted_operator() for member in frame.members]
    if not blocks:
        return np.zeros((0, frame.ambient_dim), dtype=np.complex128)
    return np.vstack(blocks)


def synthesis_matrix(frame: GFusionFrame) -> Matrix:
    """T_Lambda assembled column-block-wise as [v_1 pi_{W_1} Lambda_1^H | ...]"""
    blocks = [
        member.weight * (member.subspace @ (member.subspace.conj().T @ member.operator.conj().T))
        for member in frame.members
    ]
    if not blocks:
        return np.zeros((frame.ambient_dim, 0), dtype=np.complex128)
    return np.hstack(blocks)


def synthesis(frame: GFusionFrame, coeffs: CoefficientFamily) -> np.ndarray:
    """T_Lambda {f_j} = sum_j v_j pi_{W_j} Lambda_j^H f_j"""
    coeffs.matches(frame)
    total = np.zeros(frame.ambient_dim, dtype=np.complex128)
    for member, block in zip(frame.members, coeffs.blocks):
        lifted = member.operator.conj().T @ block
        total += member.weight * (member.subspace @ (member.subspace.conj().T @ lifted))
    return total


def analysis(frame: GFusionFrame, f) -> CoefficientFamily:
    """T_Lambda^* f = {v_j Lambda_j pi_{W_j} f}"""
    f = _vector(frame, f)
    return CoefficientFamily(tuple(
        member.weight * (member.restricted_operator() @ f) for member in frame.members
    ))


def _frame_operator_of(members: Iterable[Member], n: int) -> Matrix:
    s = np.zeros((n, n), dtype=np.complex128)
    for member in members:
        restricted = member.restricted_operator()
        s += member.weight ** 2 * (restricted.conj().T @ restricted)
    return hermitian_part(s)


def frame_operator(frame: GFusionFrame) -> Matrix:
    """S_Lambda = sum_j v_j^2 pi_{W_j} Lambda_j^H Lambda_j pi_{W_j}"""
    return _frame_operator_of(frame.members, frame.ambient_dim)


def _bounds_of(s: Matrix, tol: Tolerance) -> Tuple[FrameBounds, bool]:
    spectrum = eigh(s, tol)
    bounds = FrameBounds(spectrum.min, spectrum.max)
    is_frame = bounds.upper > 0.0 and bounds.lower > tol.rank_cutoff(s.shape) * bounds.upper
    return bounds, is_frame


def frame_bounds(frame: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE) -> FrameReport:
    """Optimal bounds A = min eig(S), B = max eig(S) and the frame diagnostics"""
    s = frame_operator(frame)
    bounds, is_frame = _bounds_of(s, tol)
    is_parseval = operator_norm(s - np.eye(frame.ambient_dim)) <= tol.residual_abs
    complete = gf_complete(frame, tol)
    if is_frame and not complete:
        raise ConsistencyError(
            f"family reports lower bound {bounds.lower:.6e} but is not gf-complete"
        )
    return FrameReport(
        bounds=bounds,
        is_bessel=True,
        is_frame=is_frame,
        is_parseval=is_parseval,
        is_gf_complete=complete,
        frame_operator_condition=bounds.condition_number if is_frame else math.inf,
    )


def _require_frame(frame: GFusionFrame, tol: Tolerance) -> Tuple[Matrix, FrameBounds]:
    s = frame_operator(frame)
    bounds, is_frame = _bounds_of(s, tol)
    if not is_frame:
        raise NotAFrameError(bounds.lower, bounds.upper)
    if bounds.condition_number > CONDITION_LIMIT:
        raise ConditioningError(bounds.condition_number, CONDITION_LIMIT)
    return s, bounds


def _slack(tol: Tolerance, bounds: FrameBounds, scale: float) -> float:
    return tol.residual_abs * bounds.condition_number * scale


# ---------------------------------------------------------------------------
# Reconstruction, Parseval-ization and the canonical dual
# ---------------------------------------------------------------------------

def reconstruct(frame: GFusionFrame, f, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """f = sum_j v_j^2 pi_{W_j} Lambda_j^H Lambda_j pi_{W_j} S^-1 f

    The commuted form sum_j v_j^2 S^-1 pi_{W_j} Lambda_j^H Lambda_j pi_{W_j} f is
    evaluated as well and a warning is printed if the two disagree.
    """
    f = _vector(frame, f)
    result, commuted = reconstruction_orderings(frame, f, tol)
    _, bounds = _require_frame(frame, tol)
    gap = float(np.linalg.norm(result - commuted))
    if gap > _slack(tol, bounds, np.linalg.norm(f)):
        print_warning(f"reconstruction orderings disagree by {gap:.3e}")
    return result


def reconstruction_orderings(frame: GFusionFrame, f,
                             tol: Tolerance = DEFAULT_TOLERANCE) -> Tuple[np.ndarray, np.ndarray]:
    """Both orderings of the reconstruction sum

    Returns:
        (sum_j v_j^2 pi_{W_j} Lambda_j^H Lambda_j pi_{W_j} S^-1 f,
         S^-1 sum_j v_j^2 pi_{W_j} Lambda_j^H Lambda_j pi_{W_j} f)
    """
    f = _vector(frame, f)
    s, _ = _require_frame(frame, tol)
    s_inverse = psd_power(s, -1.0, tol)

    pre_inverted = s_inverse @ f
    result = np.zeros_like(f)
    summed = np.zeros_like(f)
    for member in frame.members:
        restricted = member.restricted_operator()
        weight2 = member.weight ** 2
        result += weight2 * (restricted.conj().T @ (restricted @ pre_inverted))
        summed += weight2 * (restricted.conj().T @ (restricted @ f))
    return result, s_inverse @ summed


def parsevalize(frame: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE) -> GFusionFrame:
    """(S^-1/2 W_j, Lambda_j pi_{W_j} S^-1/2, v_j), a Parseval g-fusion frame"""
    s, _ = _require_frame(frame, tol)
    root_inverse = sqrt_psd(s, invert=True, tol=tol)
    return frame.with_members(
        Member(
            subspace=orthonormalize(root_inverse @ member.subspace, tol),
            operator=member.restricted_operator() @ root_inverse,
            weight=member.weight,
        )
        for member in frame.members
    )


def canonical_dual(frame: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE) -> DualFrame:
    """(S^-1 W_j, Lambda_j pi_{W_j} S^-1, v_j) together with S^-1"""
    s, _ = _require_frame(frame, tol)
    s_inverse = psd_power(s, -1.0, tol)
    dual = frame.with_members(
        Member(
            subspace=orthonormalize(s_inverse @ member.subspace, tol),
            operator=member.restricted_operator() @ s_inverse,
            weight=member.weight,
        )
        for member in frame.members
    )
    return DualFrame(frame=dual, s_inverse=s_inverse)


def _check_dual(frame: GFusionFrame, dual: DualFrame, tol: Tolerance) -> FrameBounds:
    if len(dual.frame) != len(frame) or dual.frame.codomain_dims != frame.codomain_dims:
        raise ShapeMismatchError("dual frame does not have the shape of the frame")
    if dual.s_inverse.shape != (frame.ambient_dim, frame.ambient_dim):
        raise ShapeMismatchError("dual frame lives in a different ambient space")
    s, bounds = _require_frame(frame, tol)
    residual = operator_norm(dual.s_inverse @ s - np.eye(frame.ambient_dim))
    if residual > _slack(tol, bounds, 1.0):
        raise ShapeMismatchError(f"dual was not built from this frame (|S~ S - I| = {residual:.3e})")

    inverse_norm = operator_norm(dual.s_inverse)
    for j, (member, dual_member) in enumerate(zip(frame.members, dual.frame.members)):
        restricted = member.restricted_operator()
        expected = restricted @ dual.s_inverse
        residual = operator_norm(dual_member.restricted_operator() - expected)
        scale = max(1.0, operator_norm(restricted) * inverse_norm)
        if residual > _slack(tol, bounds, scale) or abs(dual_member.weight - member.weight) > tol.residual_abs:
            raise ShapeMismatchError(
                f"dual member {j} is not Lambda_j pi_(W_j) S^-1 of this frame (residual {residual:.3e})"
            )
    return bounds


def mixed_reconstruct(frame: GFusionFrame, dual: DualFrame, f,
                      tol: Tolerance = DEFAULT_TOLERANCE) -> Tuple[np.ndarray, np.ndarray]:
    """Both dual reconstruction sums

    Returns:
        (sum_j v_j^2 pi_{W_j} Lambda_j^H Lambda~_j pi_{W~_j} f,
         sum_j v_j^2 pi_{W~_j} Lambda~_j^H Lambda_j pi_{W_j} f)
    """
    f = _vector(frame, f)
    _check_dual(frame, dual, tol)
    primal_first = np.zeros_like(f)
    dual_first = np.zeros_like(f)
    for member, dual_member in zip(frame.members, dual.frame.members):
        restricted = member.restricted_operator()
        dual_restricted = dual_member.restricted_operator()
        weight2 = member.weight * dual_member.weight
        primal_first += weight2 * (restricted.conj().T @ (dual_restricted @ f))
        dual_first += weight2 * (dual_restricted.conj().T @ (restricted @ f))
    return primal_first, dual_first


def minimal_norm_coefficients(frame: GFusionFrame, dual: DualFrame, f,
                              tol: Tolerance = DEFAULT_TOLERANCE) -> CoefficientFamily:
    """g_j = v_j Lambda~_j pi_{W~_j} f, the least-norm family with T_Lambda g = f"""
    f = _vector(frame, f)
    _check_dual(frame, dual, tol)
    return CoefficientFamily(tuple(
        dual_member.weight * (dual_member.restricted_operator() @ f)
        for dual_member in dual.frame.members
    ))


def pythagorean_split(frame: GFusionFrame, dual: DualFrame, g: CoefficientFamily,
                      tol: Tolerance = DEFAULT_TOLERANCE) -> Tuple[float, float, float]:
    """Split sum |g_j|^2 into the minimal-norm part and the correction

    Returns:
        (sum |g_j|^2, sum |g_j^min|^2, sum |g_j - g_j^min|^2) where g^min is
        the minimal-norm family for f = T_Lambda g; the first equals the sum
        of the other two
    """
    f = synthesis(frame, g)
    minimal = minimal_norm_coefficients(frame, dual, f, tol)
    return g.norm_squared(), minimal.norm_squared(), (g - minimal).norm_squared()


# ---------------------------------------------------------------------------
# Completeness, injectivity and frame sequences
# ---------------------------------------------------------------------------

def span_rank(frame: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE) -> int:
    """dim span{pi_{W_j} Lambda_j^H H_j}"""
    return numerical_rank(analysis_matrix(frame), tol)


def gf_complete(frame: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """True iff the pieces pi_{W_j} Lambda_j^H H_j span C^n"""
    rank = span_rank(frame, tol)
    columns = [member.subspace @ (member.subspace.conj().T @ member.operator.conj().T)
               for member in frame.members]
    column_rank = numerical_rank(np.hstack(columns), tol) if columns else 0
    if column_rank != rank:
        print_warning(f"analysis rank {rank} differs from synthesis column rank {column_rank}")
    return rank == frame.ambient_dim


def analysis_null_witness(frame: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE) -> Optional[np.ndarray]:
    """A unit vector f != 0 with Lambda_j pi_{W_j} f = 0 for all j, if one exists"""
    basis = null_basis(analysis_matrix(frame), tol)
    if basis.shape[1] == 0:
        return None
    return basis[:, 0]


def injectivity_check(frame: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """True iff f -> {v_j Lambda_j pi_{W_j} f} has a trivial null space"""
    injective = analysis_null_witness(frame, tol) is None
    if injective != gf_complete(frame, tol):
        raise ConsistencyError("injectivity of the analysis map disagrees with gf-completeness")
    return injective


def range_space_bounds(frame: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE) -> Tuple[FrameBounds, int]:
    """Frame bounds on V = span{pi_{W_j} Lambda_j^H H_j} and dim V

    The bounds are the extreme nonzero eigenvalues of S_Lambda; the family is
    a frame sequence iff the lower one is positive.
    """
    s = frame_operator(frame)
    spectrum = eigh(s, tol)
    top = spectrum.max
    if top <= 0.0:
        return FrameBounds(0.0, 0.0), 0
    nonzero = spectrum.eigenvalues[spectrum.eigenvalues > tol.rank_cutoff(s.shape) * top]
    return FrameBounds(float(nonzero.min()), float(nonzero.max())), int(nonzero.size)


def row_space_singular_values(frame: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Nonzero singular values of T_Lambda^*; they lie in [sqrt(A), sqrt(B)]"""
    a = analysis_matrix(frame)
    _, sigma, _ = svd(a)
    if sigma.size == 0 or sigma[0] == 0.0:
        return np.zeros(0)
    return sigma[sigma > tol.rank_cutoff(a.shape) * sigma[0]]


def surjectivity_bounds(frame: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE) -> SurjectivityReport:
    """Bounds from the synthesis operator: A = |T^dagger|^-2, B = |T|^2"""
    t = synthesis_matrix(frame)
    rank = numerical_rank(t, tol)
    surjective = rank == frame.ambient_dim
    lower = 0.0
    if surjective:
        lower = operator_norm(pseudo_inverse(t, tol)) ** -2
    return SurjectivityReport(
        synthesis_rank=rank,
        frame_operator_rank=numerical_rank(frame_operator(frame), tol),
        is_surjective=surjective,
        lower_from_pseudo_inverse=lower,
        upper_from_norm=operator_norm(t) ** 2,
    )


# ---------------------------------------------------------------------------
# Member deletion
# ---------------------------------------------------------------------------

def _unit_eigen_gap(m: Matrix) -> float:
    # sigma_min(M - I): zero exactly when 1 is an eigenvalue of M
    if m.size == 0:
        return math.inf
    _, sigma, _ = svd(m - np.eye(m.shape[0]))
    return float(sigma[-1])


def delete_member(frame: GFusionFrame, j0: int, tol: Tolerance = DEFAULT_TOLERANCE,
                  dual: Optional[DualFrame] = None) -> DeletionReport:
    """Decide whether removing member j0 keeps a g-fusion frame

    cond1 / cond2: v_j0 = 1 and 1 is an eigenvalue of
        M1 = Lambda~_j0 pi_{W~_j0} pi_{W_j0} Lambda_j0^H  (on H_j0)
        M2 = pi_{W_j0} Lambda_j0^H Lambda~_j0 pi_{W~_j0}  (on H)
    Either one means the remaining family is not gf-complete.
    cond3: I - v_j0^2 Lambda_j0 pi_{W_j0} pi_{W~_j0} Lambda~_j0^H is invertible
        on H_j0, which means the remaining family is still a frame.
    """
    if not 0 <= j0 < len(frame):
        raise IndexOutOfRangeError(f"index {j0} is outside 0..{len(frame) - 1}")
    if dual is None:
        dual = canonical_dual(frame, tol)
    else:
        _check_dual(frame, dual, tol)

    member = frame.members[j0]
    restricted = member.restricted_operator()
    dual_restricted = dual.frame.members[j0].restricted_operator()

    m1 = dual_restricted @ restricted.conj().T
    m2 = restricted.conj().T @ dual_restricted
    gap1 = _unit_eigen_gap(m1)
    gap2 = _unit_eigen_gap(m2)
    unit_weight = abs(member.weight - 1.0) <= tol.residual_abs
    cond1 = unit_weight and gap1 <= EIGENVALUE_ONE_TOL
    cond2 = unit_weight and gap2 <= EIGENVALUE_ONE_TOL

    complement = np.eye(member.codomain_dim) - member.weight ** 2 * (restricted @ dual_restricted.conj().T)
    if complement.size:
        _, sigma, _ = svd(complement)
        sigma_min = float(sigma[-1])
        cond3 = sigma_min > tol.rank_cutoff(complement.shape)
    else:
        sigma_min, cond3 = math.inf, True

    remaining = [m for j, m in enumerate(frame.members) if j != j0]
    remaining_s = _frame_operator_of(remaining, frame.ambient_dim)
    remaining_bounds, remaining_is_frame = _bounds_of(remaining_s, tol)
    if remaining:
        remaining_rank = numerical_rank(np.vstack([m.weight * m.restricted_operator() for m in remaining]), tol)
    else:
        remaining_rank = 0

    return DeletionReport(
        removed_index=j0,
        cond1_holds=cond1,
        cond2_holds=cond2,
        cond3_holds=cond3,
        remaining_bounds=remaining_bounds,
        remaining_gf_complete=remaining_rank == frame.ambient_dim,
        remaining_is_frame=remaining_is_frame,
        remaining_rank=remaining_rank,
        unit_eigen_gap_1=gap1,
        unit_eigen_gap_2=gap2,
        complement_sigma_min=sigma_min,
    )


def deletion_sweep(frame: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE) -> List[DeletionReport]:
    dual = canonical_dual(frame, tol)
    return [delete_member(frame, j, tol, dual=dual) for j in range(len(frame))]


# ---------------------------------------------------------------------------
# Operator images and dual pairs
# ---------------------------------------------------------------------------

def transform_frame(frame: GFusionFrame, u, tol: Tolerance = DEFAULT_TOLERANCE) -> Tuple[GFusionFrame, TransformDiagnostics]:
    """Gamma = (u W_j, Lambda_j pi_{W_j} u^H, v_j) with u T_Lambda = T_Gamma

    Gamma is a frame sequence on the range of u; its frame operator is
    u S_Lambda u^H.
    """
    u = as_matrix(u, "operator u")
    n = frame.ambient_dim
    if u.shape != (n, n):
        raise ShapeMismatchError(f"operator u has shape {u.shape}, expected {n}x{n}")
    _require_frame(frame, tol)

    gamma = frame.with_members(
        Member(
            subspace=orthonormalize(u @ member.subspace, tol),
            operator=member.restricted_operator() @ u.conj().T,
            weight=member.weight,
        )
        for member in frame.members
    )

    t = synthesis_matrix(frame)
    residual = operator_norm(u @ t - synthesis_matrix(gamma))
    scale = max(1.0, operator_norm(u) * operator_norm(t))
    if residual > tol.residual_abs * scale:
        raise ConsistencyError(f"u T_Lambda differs from T_Gamma by {residual:.3e}")

    _, sigma, _ = svd(u)
    sequence_bounds, sequence_dim = range_space_bounds(gamma, tol)
    diagnostics = TransformDiagnostics(
        singular_values=sigma,
        rank=numerical_rank(u, tol),
        range=range_diagnostics(u, tol),
        sequence_bounds=sequence_bounds,
        sequence_dim=sequence_dim,
        identity_residual=residual,
    )
    return gamma, diagnostics


def pair_duality_check(lam: GFusionFrame, theta: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """True iff T_Theta T_Lambda^* = I

    When it holds both families are frames with A_Lambda >= 1/B_Theta and
    A_Theta >= 1/B_Lambda; a violation raises ConsistencyError.
    """
    if lam.ambient_dim != theta.ambient_dim or lam.codomain_dims != theta.codomain_dims:
        raise ShapeMismatchError("the two families do not share ambient space and codomains")

    product = synthesis_matrix(theta) @ synthesis_matrix(lam).conj().T
    gap = operator_norm(product - np.eye(lam.ambient_dim))
    if gap > tol.residual_abs:
        return False

    lam_bounds, _ = _bounds_of(frame_operator(lam), tol)
    theta_bounds, _ = _bounds_of(frame_operator(theta), tol)
    shrink = (1.0 - gap) ** 2
    if lam_bounds.lower < shrink / theta_bounds.upper - tol.residual_abs:
        raise ConsistencyError(
            f"lower bound {lam_bounds.lower:.6e} is below 1/B_theta = {1.0 / theta_bounds.upper:.6e}"
        )
    if theta_bounds.lower < shrink / lam_bounds.upper - tol.residual_abs:
        raise ConsistencyError(
            f"dual lower bound {theta_bounds.lower:.6e} is below 1/B = {1.0 / lam_bounds.upper:.6e}"
        )
    return True


def bessel_finite_subset_check(frame: GFusionFrame, subset: Sequence[int], coeffs: CoefficientFamily,
                               tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """|sum_{j in I} v_j pi_{W_j} Lambda_j^H f_j|^2 <= B sum_{j in I} |f_j|^2"""
    coeffs.matches(frame)
    indices = sorted(set(int(j) for j in subset))
    for j in indices:
        if not 0 <= j < len(frame):
            raise IndexOutOfRangeError(f"index {j} is outside 0..{len(frame) - 1}")

    upper, _ = _bounds_of(frame_operator(frame), tol)
    total = np.zeros(frame.ambient_dim, dtype=np.complex128)
    energy = 0.0
    for j in indices:
        member, block = frame.members[j], coeffs.blocks[j]
        total += member.weight * (member.subspace @ (member.subspace.conj().T @ (member.operator.conj().T @ block)))
        energy += float(np.vdot(block, block).real)

    lhs = float(np.vdot(total, total).real)
    rhs = upper.upper * energy
    holds = lhs <= rhs + tol.residual_abs * max(1.0, rhs)
    if not holds:
        print_warning(f"Bessel inequality fails on a finite subset: {lhs:.6e} > {rhs:.6e}")
    return holds
