"""Density-matrix validation."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .linalg import check_hermitian

TRACE_ATOL = 1e-10
PSD_ATOL = 1e-10


def density_matrix(M, name: str = "state") -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, positive semidefinite."""
    rho = check_hermitian(M, name).copy()
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_ATOL:
        raise ValidationError(f"{name} has trace {tr:.12g}, expected 1")
    lam_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lam_min < -PSD_ATOL:
        raise ValidationError(f"{name} is not positive semidefinite (min eigenvalue {lam_min:.3e})")
    return rho


def pure_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def maximally_mixed(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex) / n
