"""Piecewise-constant propagation and density-matrix evolution.

Each time slice contributes the exact factor ``exp(-i dt (H0 + sum_m f_m H_m))``;
later slices multiply from the left, so ``U = U_K ... U_2 U_1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ValidationError
from .linalg import as_matrix, check_hermitian, check_unitary, expm_skew_batch, unitarity_defect
from .models import ControlSystem
from .states import density_matrix


@dataclass(frozen=True)
class ControlPulse:
    """Amplitudes ``f_m`` held constant on ``K`` uniform slices of ``[0, T]``.

    ``amplitudes`` has shape ``(K, M)``.
    """

    duration: float
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=float)
        if a.ndim == 1:
            a = a[:, None]
        if a.ndim != 2 or a.size == 0:
            raise ValidationError(f"pulse amplitudes must be a non-empty (K, M) array, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValidationError("pulse amplitudes must be finite")
        if not np.isfinite(self.duration) or self.duration < 0:
            raise ValidationError(f"pulse duration must be finite and non-negative, got {self.duration}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "duration", float(self.duration))

    @property
    def steps(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def n_controls(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def dt(self) -> float:
        return self.duration / self.steps

    @classmethod
    def zeros(cls, duration: float, steps: int, n_controls: int) -> "ControlPulse":
        return cls(duration, np.zeros((steps, n_controls)))

    def then(self, other: "ControlPulse") -> "ControlPulse":
        """Concatenate two pulses with the same slice width."""
        if not np.isclose(self.dt, other.dt):
            raise ValidationError("concatenated pulses must share the slice width")
        return ControlPulse(
            self.duration + other.duration, np.vstack([self.amplitudes, other.amplitudes])
        )


@dataclass
class PropagationResult:
    final_unitary: np.ndarray
    unitarity_defect: float
    intermediate_unitaries: list[np.ndarray] | None = None


def slice_generators(system: ControlSystem, pulse: ControlPulse) -> np.ndarray:
    """Skew-Hermitian exponents ``-i dt H(t_k)`` for every slice, shape ``(K, N, N)``."""
    if pulse.n_controls != system.n_controls:
        raise ValidationError(
            f"pulse has {pulse.n_controls} control channels, system has {system.n_controls}"
        )
    H = system.drift[None] + np.tensordot(pulse.amplitudes, np.stack(system.controls), axes=1)
    return -1j * pulse.dt * H


def propagate(
    system: ControlSystem, pulse: ControlPulse, keep_intermediate: bool = False
) -> PropagationResult:
    steps, _, _ = expm_skew_batch(slice_generators(system, pulse))
    U = np.eye(system.dim, dtype=complex)
    history = [] if keep_intermediate else None
    for Uk in steps:
        U = Uk @ U
        if history is not None:
            history.append(U.copy())
    if not np.all(np.isfinite(U)):
        raise NumericError("propagation produced non-finite entries")
    return PropagationResult(U, unitarity_defect(U), history)


def evolve_density(r0, U) -> np.ndarray:
    """``U rho U^dagger``."""
    rho = density_matrix(r0, "r0")
    U = check_unitary(U, "U")
    if U.shape != rho.shape:
        raise ValidationError(f"dimension mismatch: {U.shape} vs {rho.shape}")
    out = U @ rho @ U.conj().T
    return 0.5 * (out + out.conj().T)


def expectation(A, r) -> float:
    """``trace(A rho)`` for Hermitian ``A``."""
    A = check_hermitian(A, "A")
    r = as_matrix(r, "rho")
    if A.shape != r.shape:
        raise ValidationError(f"dimension mismatch: {A.shape} vs {r.shape}")
    return float(np.real(np.einsum("ij,ji->", A, r)))
