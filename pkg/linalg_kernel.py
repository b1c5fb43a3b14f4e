"""
Dense complex matrix primitives used by every frame computation

All inputs are promoted to complex128. Functions are pure: they never modify
their arguments and keep no state between calls.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from errors import FactorizationError, SingularityError, ValidationError

Matrix = np.ndarray

EPS = np.finfo(np.float64).eps
# Multiplier on max(rows, cols) * eps for the automatic rank cutoff
RANK_EPS_SCALE = 1e4
DEFAULT_RESIDUAL = 1e-9


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds

    Args:
        rank_rel: relative singular value cutoff; None selects the automatic
            cutoff max(rows, cols) * eps * RANK_EPS_SCALE for each matrix
        residual_abs: absolute bound for residual checks
    """

    rank_rel: Optional[float] = None
    residual_abs: float = DEFAULT_RESIDUAL

    def __post_init__(self):
        if self.rank_rel is not None and not 0.0 < self.rank_rel < 1.0:
            raise ValidationError(f"rank_rel must lie in (0, 1), got {self.rank_rel}")
        if not 0.0 < self.residual_abs < 1.0:
            raise ValidationError(f"residual_abs must lie in (0, 1), got {self.residual_abs}")

    def rank_cutoff(self, shape: Tuple[int, ...]) -> float:
        """Relative singular value cutoff for a matrix of the given shape"""
        if self.rank_rel is not None:
            return self.rank_rel
        return max(max(shape, default=1), 1) * EPS * RANK_EPS_SCALE

    def describe(self) -> dict:
        return {
            "rank_rel": "auto" if self.rank_rel is None else self.rank_rel,
            "residual_abs": self.residual_abs,
        }


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues in ascending order with their eigenvectors as columns"""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0]) if self.eigenvalues.size else 0.0

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1]) if self.eigenvalues.size else 0.0


@dataclass(frozen=True)
class RangeDiagnostics:
    """Finite-dimensional stand-in for "has closed range"

    Every range is closed in finite dimensions, so the useful information is
    how far the smallest nonzero singular value sits from zero.
    """

    rank: int
    sigma_min_nonzero: float
    condition_on_range: float


def as_matrix(m, name: str = "matrix") -> Matrix:
    """Return m as a finite 2-D complex128 array"""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    return arr


def as_vector(f, length: Optional[int] = None, name: str = "vector") -> np.ndarray:
    """Return f as a finite 1-D complex128 array, optionally checking its length"""
    arr = np.asarray(f, dtype=np.complex128).reshape(-1)
    if length is not None and arr.shape[0] != length:
        raise ValidationError(f"{name} has length {arr.shape[0]}, expected {length}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    return arr


def hermitian_part(m: Matrix) -> Matrix:
    return (m + m.conj().T) / 2.0


def svd(m: Matrix, full_matrices: bool = False) -> Tuple[Matrix, np.ndarray, Matrix]:
    """Singular value decomposition m = U diag(sigma) Vh

    Uses the divide-and-conquer LAPACK driver and falls back to the QR
    iteration driver when it fails to converge.

    Returns:
        U, sigma (descending, nonnegative), Vh
    """
    m = as_matrix(m)
    rows, cols = m.shape
    if m.size == 0:
        u = np.eye(rows, rows if full_matrices else 0, dtype=np.complex128)
        vh = np.eye(cols if full_matrices else 0, cols, dtype=np.complex128)
        return u, np.zeros(0), vh

    for driver in ("gesdd", "gesvd"):
        try:
            u, sigma, vh = scipy.linalg.svd(
                m, full_matrices=full_matrices, check_finite=False, lapack_driver=driver
            )
            return u, sigma, vh
        except np.linalg.LinAlgError:
            continue
    raise FactorizationError("svd", m.shape)


def _rank_from_sigma(sigma: np.ndarray, cutoff: float) -> int:
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > cutoff * sigma[0]))


def numerical_rank(m: Matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> int:
    """Number of singular values above rank_rel * sigma_max"""
    m = as_matrix(m)
    _, sigma, _ = svd(m)
    return _rank_from_sigma(sigma, tol.rank_cutoff(m.shape))


def operator_norm(m: Matrix) -> float:
    """Spectral norm, 0 for empty input"""
    _, sigma, _ = svd(m)
    return float(sigma[0]) if sigma.size else 0.0


def pseudo_inverse(m: Matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """Moore-Penrose pseudo-inverse with singular values below the cutoff treated as zero"""
    m = as_matrix(m)
    u, sigma, vh = svd(m)
    rank = _rank_from_sigma(sigma, tol.rank_cutoff(m.shape))
    inv = np.zeros_like(sigma)
    inv[:rank] = 1.0 / sigma[:rank]
    return (vh.conj().T * inv) @ u.conj().T


def null_basis(m: Matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """Orthonormal basis (as columns) of the numerical null space of m"""
    m = as_matrix(m)
    _, sigma, vh = svd(m, full_matrices=True)
    rank = _rank_from_sigma(sigma, tol.rank_cutoff(m.shape))
    return vh[rank:].conj().T


def range_diagnostics(m: Matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> RangeDiagnostics:
    m = as_matrix(m)
    _, sigma, _ = svd(m)
    rank = _rank_from_sigma(sigma, tol.rank_cutoff(m.shape))
    if rank == 0:
        return RangeDiagnostics(rank=0, sigma_min_nonzero=0.0, condition_on_range=float("inf"))
    smallest = float(sigma[rank - 1])
    return RangeDiagnostics(
        rank=rank,
        sigma_min_nonzero=smallest,
        condition_on_range=float(sigma[0]) / smallest,
    )


def _canonical_phase(basis: Matrix) -> Matrix:
    # Make the largest-magnitude entry of each column real and positive
    if basis.shape[1] == 0:
        return basis
    pivots = np.argmax(np.abs(basis), axis=0)
    values = basis[pivots, np.arange(basis.shape[1])]
    phases = values / np.abs(values)
    return basis * phases.conj()


def orthonormalize(span: Matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """Orthonormal basis of the column space of span

    Returns:
        n x r matrix with r the numerical rank of span; each column is
        normalised so its largest-magnitude entry is real and positive
    """
    span = as_matrix(span, "span")
    rows, cols = span.shape
    if cols == 0 or not np.any(span):
        return np.zeros((rows, 0), dtype=np.complex128)
    u, sigma, _ = svd(span)
    rank = _rank_from_sigma(sigma, tol.rank_cutoff(span.shape))
    return _canonical_phase(u[:, :rank])


def orthonormality_residual(basis: Matrix) -> float:
    """Spectral norm of B^H B - I"""
    basis = as_matrix(basis, "basis")
    k = basis.shape[1]
    if k == 0:
        return 0.0
    return operator_norm(basis.conj().T @ basis - np.eye(k))


def projection_of(subspace_basis: Matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """Orthogonal projection B B^H onto the span of an orthonormal basis"""
    basis = as_matrix(subspace_basis, "subspace basis")
    residual = orthonormality_residual(basis)
    if residual > tol.residual_abs:
        raise ValidationError(f"subspace basis is not orthonormal (|B^H B - I| = {residual:.3e})")
    return basis @ basis.conj().T


def eigh(m: Matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> Spectrum:
    """Spectrum of a Hermitian matrix, symmetrised before factoring"""
    m = as_matrix(m)
    rows, cols = m.shape
    if rows != cols:
        raise ValidationError(f"eigh needs a square matrix, got {rows}x{cols}")
    if rows == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    try:
        values, vectors = scipy.linalg.eigh(hermitian_part(m), check_finite=False)
    except np.linalg.LinAlgError:
        raise FactorizationError("eigh", m.shape)
    return Spectrum(values, vectors)


def psd_power(m: Matrix, power: float, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """S**power for Hermitian positive semidefinite S via spectral calculus

    Negative powers require a strictly positive definite input.
    """
    m = as_matrix(m)
    spectrum = eigh(m, tol)
    values = np.clip(spectrum.eigenvalues, 0.0, None)
    if power < 0:
        top = spectrum.max
        if values.size and (top <= 0.0 or spectrum.min <= tol.rank_cutoff(m.shape) * top):
            raise SingularityError(spectrum.min, top)
    vectors = spectrum.eigenvectors
    result = (vectors * values ** power) @ vectors.conj().T
    return hermitian_part(result)


def sqrt_psd(m: Matrix, invert: bool = False, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """Positive square root S^(1/2), or S^(-1/2) when invert is set"""
    return psd_power(m, -0.5 if invert else 0.5, tol)
