"""Control systems ``H = H0 + sum_m f_m(t) H_m`` and oscillator builders."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .linalg import check_hermitian


@dataclass(frozen=True)
class ControlSystem:
    """Drift Hamiltonian plus an ordered list of control Hamiltonians."""

    drift: np.ndarray
    controls: tuple[np.ndarray, ...]
    label: str = ""

    def __post_init__(self):
        drift = check_hermitian(self.drift, "drift").copy()
        if len(self.controls) < 1:
            raise ValidationError("a control system needs at least one control Hamiltonian")
        controls = []
        for m, H in enumerate(self.controls, start=1):
            H = check_hermitian(H, f"control[{m}]").copy()
            if H.shape != drift.shape:
                raise ValidationError(
                    f"control[{m}] has shape {H.shape}, drift has {drift.shape}"
                )
            H.setflags(write=False)
            controls.append(H)
        drift.setflags(write=False)
        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "controls", tuple(controls))

    @property
    def dim(self) -> int:
        return self.drift.shape[0]

    @property
    def n_controls(self) -> int:
        return len(self.controls)


@dataclass(frozen=True)
class OscillatorSpec:
    """Truncated oscillator with nearest-neighbour dipole coupling.

    ``signs`` multiplies the dipole entries on the off-diagonals, e.g.
    ``(+1, +1, -1)`` for the symplectic-type four-level coupling.
    """

    energies: Sequence[float]
    dipoles: Sequence[float]
    signs: Sequence[float] | None = None
    label: str = ""

    @property
    def levels(self) -> int:
        return len(self.energies)


def build_oscillator(spec: OscillatorSpec) -> ControlSystem:
    E = np.asarray(spec.energies, dtype=float)
    d = np.asarray(spec.dipoles, dtype=float)
    n = E.size
    if n < 2:
        raise ValidationError("an oscillator needs at least two levels")
    if d.size != n - 1:
        raise ValidationError(f"expected {n - 1} dipoles for {n} levels, got {d.size}")
    if np.any(np.diff(E) <= 0):
        raise ValidationError("oscillator energies must be strictly increasing")
    if np.any(d == 0):
        raise ValidationError("dipole moments must be nonzero")
    if spec.signs is not None:
        s = np.asarray(spec.signs, dtype=float)
        if s.size != n - 1:
            raise ValidationError(f"expected {n - 1} signs for {n} levels, got {s.size}")
        d = d * s
    H1 = np.diag(d, 1) + np.diag(d, -1)
    return ControlSystem(np.diag(E).astype(complex), (H1.astype(complex),), label=spec.label)


def paper_three_level(mu: float = 1.0, d: float = 1.0) -> ControlSystem:
    """Equally spaced three-level oscillator (traceless drift) generating so(3)."""
    return build_oscillator(
        OscillatorSpec(energies=(-mu, 0.0, mu), dipoles=(d, d), label="three-level so(3)")
    )


def paper_four_level(
    E1: float = 1.5, E2: float = 0.5, d1: float = 1.0, d2: float = 1.0
) -> ControlSystem:
    """Four-level oscillator with sign-flipped last dipole, generating sp(2).

    Levels are ``(-E1, -E2, +E2, +E1)``; the coupling has off-diagonal
    entries ``(+d1, +d2, -d1)``.
    """
    return build_oscillator(
        OscillatorSpec(
            energies=(-E1, -E2, E2, E1),
            dipoles=(d1, d2, d1),
            signs=(1.0, 1.0, -1.0),
            label="four-level sp(2)",
        )
    )
