"""Small dense real linear algebra for Fracstab.

Factorizations are delegated to LAPACK through scipy.linalg (LU with partial
pivoting, Hessenberg reduction with shifted QR, Pade scaling-and-squaring,
SVD); this module adds the guards, tolerances and error contract on top.
Matrices are square float64 numpy arrays.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from fracstab.models.exceptions import (
    DimensionError,
    DomainError,
    EigenConvergenceError,
    MatrixOverflowError,
    SingularMatrixError,
)

Mat = NDArray[np.float64]

PIVOT_GUARD = 1e-13
RESIDUAL_TOLERANCE = 1e-8
OVERFLOW_LIMIT = 1e300
# Relative tolerance used to pair complex-conjugate eigenvalues
_PAIRING_TOLERANCE = 1e-8


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a real matrix, conjugate pairs adjacent."""

    eigenvalues: tuple[complex, ...]
    max_real_part: float

    def real_parts(self) -> list[float]:
        """Real parts in stored order."""
        return [value.real for value in self.eigenvalues]

    def as_pairs(self) -> list[tuple[float, float]]:
        """Eigenvalues as (re, im) pairs."""
        return [(value.real, value.imag) for value in self.eigenvalues]


def as_matrix(rows: object, name: str = "matrix") -> Mat:
    """Convert nested rows to a validated square float matrix.

    Raises:
        DimensionError: If the input is not square
        DomainError: If any entry is not finite
    """
    m = np.array(rows, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(name, "square matrix", m.shape)
    if not np.all(np.isfinite(m)):
        raise DomainError(name, float("nan"), "entries must be finite")
    return m


def inf_norm(m: Mat) -> float:
    """Maximum absolute row sum."""
    return float(np.max(np.sum(np.abs(m), axis=1))) if m.size else 0.0


def _lu(m: Mat) -> tuple[Mat, NDArray[np.int32]]:
    m = as_matrix(m)
    lu, piv = linalg.lu_factor(m, check_finite=False)
    guard = PIVOT_GUARD * inf_norm(m)
    for index, pivot in enumerate(np.diag(lu)):
        if abs(pivot) <= guard:
            raise SingularMatrixError(index, float(pivot))
    return lu, piv


def invert(m: Mat) -> Mat:
    """Invert a nonsingular matrix through LU with partial pivoting.

    Raises:
        SingularMatrixError: If a pivot is below 1e-13 * ||m||_inf
    """
    lu, piv = _lu(m)
    identity = np.eye(m.shape[0])
    return np.asarray(linalg.lu_solve((lu, piv), identity, check_finite=False), dtype=float)


def determinant(m: Mat) -> float:
    """Determinant from the LU factorization (zero when singular)."""
    m = as_matrix(m)
    lu, piv = linalg.lu_factor(m, check_finite=False)
    swaps = int(np.sum(piv != np.arange(m.shape[0])))
    sign = -1.0 if swaps % 2 else 1.0
    return sign * float(np.prod(np.diag(lu)))


def _pair_conjugates(values: NDArray[np.complex128], scale: float) -> tuple[complex, ...]:
    """Order eigenvalues with exact conjugate pairs placed side by side."""
    tolerance = _PAIRING_TOLERANCE * max(scale, 1.0)
    remaining = sorted((complex(v) for v in values), key=lambda v: (-v.real, -v.imag))
    ordered: list[complex] = []
    while remaining:
        value = remaining.pop(0)
        if abs(value.imag) <= tolerance:
            ordered.append(complex(value.real, 0.0))
            continue
        partner_index = min(
            range(len(remaining)),
            key=lambda i: abs(remaining[i] - value.conjugate()),
            default=None,
        )
        if partner_index is None or abs(remaining[partner_index] - value.conjugate()) > tolerance:
            raise EigenConvergenceError(f"eigenvalue {value} has no conjugate partner")
        partner = remaining.pop(partner_index)
        re = 0.5 * (value.real + partner.real)
        im = 0.5 * (abs(value.imag) + abs(partner.imag))
        ordered.extend([complex(re, im), complex(re, -im)])
    return tuple(ordered)


def eigenvalues(m: Mat) -> Spectrum:
    """Eigenvalues of a real square matrix.

    Every eigenpair is checked against ||(m - lambda I) v|| <= 1e-8 ||m||.

    Raises:
        EigenConvergenceError: If LAPACK's QR iteration fails or a residual check fails
    """
    m = as_matrix(m)
    if m.shape[0] == 0:
        return Spectrum(eigenvalues=(), max_real_part=float("-inf"))
    try:
        values, vectors = linalg.eig(m, check_finite=False)
    except linalg.LinAlgError as e:
        raise EigenConvergenceError(str(e)) from e
    scale = max(float(np.linalg.norm(m, 2)), np.finfo(float).tiny)
    for index, value in enumerate(values):
        v = vectors[:, index]
        residual = float(np.linalg.norm(m @ v - value * v) / np.linalg.norm(v))
        if residual > RESIDUAL_TOLERANCE * scale:
            raise EigenConvergenceError(f"residual {residual:.3e} for eigenvalue {value}")
    ordered = _pair_conjugates(values, scale)
    return Spectrum(eigenvalues=ordered, max_real_part=max(v.real for v in ordered))


def expm(m: Mat, t: float = 1.0) -> Mat:
    """Matrix exponential e^{m t} by scaling-and-squaring with a Pade approximant.

    Raises:
        MatrixOverflowError: If any entry exceeds 1e300
    """
    m = as_matrix(m)
    if t < 0:
        raise DomainError("t", t, "must be >= 0")
    if t == 0:
        return np.eye(m.shape[0])
    with np.errstate(over="ignore", invalid="ignore"):
        result = np.asarray(linalg.expm(m * t), dtype=float)
    if not np.all(np.isfinite(result)) or np.max(np.abs(result)) > OVERFLOW_LIMIT:
        raise MatrixOverflowError("expm")
    return result


def spectral_norm(m: Mat) -> float:
    """Largest singular value (operator 2-norm).

    Raises:
        EigenConvergenceError: If the SVD iteration does not converge
    """
    m = as_matrix(m)
    if m.size == 0:
        return 0.0
    try:
        singular_values = linalg.svdvals(m, check_finite=False)
    except linalg.LinAlgError as e:
        raise EigenConvergenceError(f"singular values: {e}") from e
    return float(singular_values[0])
