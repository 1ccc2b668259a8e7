"""Dense complex linear algebra at small dimension.

Matrices are plain complex numpy arrays of shape (n, n).  A "Hermitian
matrix" is an array whose Hermitian defect ``max|M - M*|`` is below
``HERMITIAN_ATOL * (1 + max|M|)``.  All routines are pure functions of
their inputs and never mutate arguments.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import InvalidInput, NotPositiveDefinite, NumericalFailure

# Default tolerances.  Callers may pass their own where a keyword exists.
HERMITIAN_ATOL = 1e-12
HPD_MIN_EIG = 1e-12
MAX_DIM = 4096


def as_matrix(M) -> np.ndarray:
    """Validate and return M as a finite square complex array."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InvalidInput(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInput("matrix has non-finite entries")
    return A


def hermitian_defect(M) -> float:
    """max-norm distance of M from its own adjoint."""
    A = np.asarray(M, dtype=complex)
    return float(np.abs(A - A.conj().T).max())


def is_hermitian(M, atol: float = HERMITIAN_ATOL) -> bool:
    A = np.asarray(M, dtype=complex)
    scale = 1.0 + float(np.abs(A).max(initial=0.0))
    return hermitian_defect(A) <= atol * scale


def hermitize(M) -> np.ndarray:
    """Project onto the Hermitian part, (M + M*)/2."""
    A = np.asarray(M, dtype=complex)
    return 0.5 * (A + A.conj().T)


def spectral_norm(M) -> float:
    """Largest singular value, computed as sqrt(lambda_max(M* M))."""
    A = as_matrix(M)
    # Hermitian eigenpath: only sigma_max is needed, a full SVD is not.
    w = np.linalg.eigvalsh(A.conj().T @ A)
    return float(np.sqrt(max(w[-1], 0.0)))


def spectral_radius(M) -> float:
    """max |lambda| over the eigenvalues of M."""
    A = as_matrix(M)
    return float(np.abs(eigenvalues(A)).max())


def eigenvalues(M) -> np.ndarray:
    """All n eigenvalues of M with multiplicity (dense QR iteration)."""
    A = as_matrix(M)
    if A.shape[0] > MAX_DIM:
        raise InvalidInput(f"dimension {A.shape[0]} exceeds supported maximum {MAX_DIM}")
    try:
        return np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise NumericalFailure(f"eigenvalue iteration did not converge: {exc}") from exc


def matrix_exp(M) -> np.ndarray:
    """exp(M) by scaling and squaring."""
    A = as_matrix(M)
    E = scipy.linalg.expm(A)
    if not np.all(np.isfinite(E)):
        raise NumericalFailure("matrix exponential overflowed")
    return E


def principal_log_hpd(M, min_eig: float = HPD_MIN_EIG) -> np.ndarray:
    """Principal logarithm of a Hermitian positive definite matrix.

    Returns the Hermitian L with exp(L) = M whose eigenvalues are the real
    logs of the eigenvalues of M.  Raises NotPositiveDefinite when the
    smallest eigenvalue is at or below ``min_eig``.
    """
    A = as_matrix(M)
    if not is_hermitian(A):
        raise InvalidInput(f"matrix is not Hermitian (defect {hermitian_defect(A):.3e})")
    w, V = np.linalg.eigh(hermitize(A))
    if w[0] <= min_eig:
        raise NotPositiveDefinite(f"smallest eigenvalue {w[0]:.3e} <= {min_eig:.3e}")
    return hermitize((V * np.log(w)) @ V.conj().T)


def nearest_hpd(M, floor: float = 1e-8) -> np.ndarray:
    """Lift the eigenvalues of a Hermitian matrix to at least ``floor``.

    Used to repair rounding-level indefiniteness (e.g. matrices printed
    with two decimals) before taking a principal logarithm.
    """
    A = as_matrix(M)
    if not is_hermitian(A, atol=1e-9):
        raise InvalidInput("nearest_hpd expects a (nearly) Hermitian matrix")
    w, V = np.linalg.eigh(hermitize(A))
    return hermitize((V * np.maximum(w, floor)) @ V.conj().T)


def hermitian_power(M, exponent: float, floor: float = 0.0) -> np.ndarray:
    """M**exponent for Hermitian PSD M via its eigendecomposition."""
    A = as_matrix(M)
    w, V = np.linalg.eigh(hermitize(A))
    w = np.maximum(w, floor)
    if np.any(w < 0):
        raise NotPositiveDefinite("negative eigenvalue in hermitian_power")
    return hermitize((V * np.power(w, exponent)) @ V.conj().T)


def expm_2x2(M) -> np.ndarray:
    """Closed-form exponential of a 2x2 complex matrix.

    exp(M) = e^mu (cosh(q) I + sinh(q)/q (M - mu I)) with mu = tr(M)/2
    and q**2 = mu**2 - det(M).  Much faster than Pade scaling in the
    cocycle integrator's inner loop.
    """
    mu = 0.5 * (M[0, 0] + M[1, 1])
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    q = np.sqrt(mu * mu - det + 0j)
    if abs(q) < 1e-8:
        # sinh(q)/q -> 1 + q^2/6; relative error below 1e-32 at this cutoff
        c, s = 1.0 + q * q / 2.0, 1.0 + q * q / 6.0
    else:
        c, s = np.cosh(q), np.sinh(q) / q
    B = M - mu * np.eye(2)
    return np.exp(mu) * (c * np.eye(2) + s * B)
