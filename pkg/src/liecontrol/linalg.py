"""Dense complex-matrix primitives.

All matrices are plain ``numpy`` arrays of dtype ``complex128``.  Energies and
times are dimensionless (hbar = 1).  Structural checks (Hermitian,
skew-Hermitian, unitary) use a relative Frobenius tolerance of
``1e-10 * max(1, ||M||_F)``.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericError, ValidationError

STRUCTURE_RTOL = 1e-10
UNITARITY_RTOL = 1e-10


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a square, finite complex array or raise ValidationError."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError(f"{name} has non-finite entries")
    return A


def structure_tolerance(M: np.ndarray) -> float:
    return STRUCTURE_RTOL * max(1.0, float(np.linalg.norm(M)))


def is_hermitian(M: np.ndarray, tol: float | None = None) -> bool:
    M = np.asarray(M)
    tol = structure_tolerance(M) if tol is None else tol
    return bool(np.linalg.norm(M - M.conj().T) <= tol)


def is_skew_hermitian(M: np.ndarray, tol: float | None = None) -> bool:
    M = np.asarray(M)
    tol = structure_tolerance(M) if tol is None else tol
    return bool(np.linalg.norm(M + M.conj().T) <= tol)


def unitarity_defect(U: np.ndarray) -> float:
    """Frobenius norm of ``U^dagger U - I``."""
    U = np.asarray(U)
    return float(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])))


def is_unitary(U: np.ndarray, tol: float | None = None) -> bool:
    tol = UNITARITY_RTOL * max(1.0, U.shape[0]) if tol is None else tol
    return unitarity_defect(U) <= tol


def check_hermitian(M, name: str = "matrix") -> np.ndarray:
    A = as_matrix(M, name)
    if not is_hermitian(A):
        err = np.linalg.norm(A - A.conj().T)
        raise ValidationError(f"{name} is not Hermitian (||M - M^dagger||_F = {err:.3e})")
    return A


def check_skew_hermitian(M, name: str = "matrix") -> np.ndarray:
    A = as_matrix(M, name)
    if not is_skew_hermitian(A):
        err = np.linalg.norm(A + A.conj().T)
        raise ValidationError(f"{name} is not skew-Hermitian (||M + M^dagger||_F = {err:.3e})")
    return A


def check_unitary(U, name: str = "matrix") -> np.ndarray:
    A = as_matrix(U, name)
    if not is_unitary(A):
        raise ValidationError(f"{name} is not unitary (defect {unitarity_defect(A):.3e})")
    return A


def _same_shape(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape != B.shape:
        raise ValidationError(f"dimension mismatch: {A.shape} vs {B.shape}")


def commutator(A, B) -> np.ndarray:
    """Return ``AB - BA``."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    _same_shape(A, B)
    return A @ B - B @ A


def hs_inner(A, B) -> complex:
    """Hilbert-Schmidt inner product ``trace(A^dagger B)``."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    _same_shape(A, B)
    return complex(np.vdot(A, B))


def hs_norm(A) -> float:
    return float(np.linalg.norm(A))


def traceless_part(H) -> np.ndarray:
    """Return ``H - trace(H)/N * I``."""
    H = as_matrix(H, "H")
    n = H.shape[0]
    return H - (np.trace(H) / n) * np.eye(n)


def _fix_phases(V: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    # first non-negligible component of every column made real-positive
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        idx = np.flatnonzero(np.abs(col) > atol * max(1.0, np.abs(col).max()))
        if idx.size:
            z = col[idx[0]]
            V[:, k] = col * (abs(z) / z)
    return V


def hermitian_eigensystem(H, tie_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvectors of a Hermitian matrix.

    Eigenvector phases are fixed so that the first non-negligible component
    of each column is real and positive.  Within a block of tied eigenvalues
    columns are ordered by the index of that first component.
    """
    H = check_hermitian(H, "H")
    try:
        w, V = np.linalg.eigh(0.5 * (H + H.conj().T))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"Hermitian eigensolver failed: {exc}") from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(V))):
        raise NumericError("Hermitian eigensolver produced non-finite output")
    V = _fix_phases(V)

    lead = np.array([np.flatnonzero(np.abs(V[:, k]) > 1e-12)[0] for k in range(V.shape[1])])
    scale = max(1.0, float(np.abs(w).max()))
    order = list(range(len(w)))
    start = 0
    while start < len(w):
        stop = start + 1
        while stop < len(w) and w[stop] - w[start] <= tie_tol * scale:
            stop += 1
        if stop - start > 1:
            block = sorted(range(start, stop), key=lambda k: lead[k])
            order[start:stop] = block
        start = stop
    return w[order], V[:, order]


def _skew_eig(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # X = V diag(-i w) V^dagger with iX = V diag(w) V^dagger Hermitian
    H = 1j * X
    H = 0.5 * (H + np.swapaxes(H, -1, -2).conj())
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed in matrix exponential: {exc}") from exc
    return w, V


def expm_skew(X) -> np.ndarray:
    """Exponential of a skew-Hermitian matrix via the eigendecomposition of ``iX``.

    The result is unitary up to roundoff.
    """
    X = check_skew_hermitian(X, "X")
    w, V = _skew_eig(X)
    U = (V * np.exp(-1j * w)) @ V.conj().T
    if not np.all(np.isfinite(U)):
        raise NumericError("matrix exponential produced non-finite entries")
    return U


def expm_skew_batch(X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batched exponential of skew-Hermitian matrices, shape ``(..., N, N)``.

    Returns ``(U, V, mu)`` where ``X = V diag(mu) V^dagger`` with ``mu``
    purely imaginary and ``U = exp(X)``.  No validation; used on hot paths.
    """
    w, V = _skew_eig(np.asarray(X, dtype=complex))
    mu = -1j * w
    U = (V * np.exp(mu)[..., None, :]) @ np.swapaxes(V, -1, -2).conj()
    return U, V, mu


def dexp_weights(mu: np.ndarray, atol: float = 1e-9) -> np.ndarray:
    """Divided differences of ``exp`` on the eigenvalues ``mu``.

    ``Phi[j, k] = (e^{mu_j} - e^{mu_k}) / (mu_j - mu_k)``, with ``e^{mu_j}``
    on (near-)coincident pairs.  With ``X = V diag(mu) V^dagger`` the
    derivative of ``exp`` at ``X`` in direction ``E`` is
    ``V (Phi * (V^dagger E V)) V^dagger``.
    """
    mu = np.asarray(mu)
    a = mu[..., :, None]
    b = mu[..., None, :]
    diff = a - b
    ea, eb = np.exp(a), np.exp(b)
    close = np.abs(diff) < atol
    safe = np.where(close, 1.0, diff)
    return np.where(close, np.exp(0.5 * (a + b)), (ea - eb) / safe)
