"""Kinematical bounds versus dynamically achievable expectation values."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ._ascent import gradient_ascent, orbit_objective, pulse_objective, with_fd_gradient
from .closure import LieAlgebraBasis
from .dynamics import ControlPulse, evolve_density, expectation, propagate
from .errors import ValidationError
from .linalg import check_hermitian
from .models import ControlSystem
from .reachability import SearchOptions, _restart_seeds
from .states import density_matrix

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptimizerOptions:
    duration: float = 10.0
    steps: int = 64
    restarts: int = 10
    seed: int = 0
    max_iter: int = 2000
    lr: float = 0.1
    init_amplitude: float = 1.0
    gtol: float = 1e-6
    ftol: float = 1e-12
    gradient: str = "analytic"  # or "fd" (central differences)
    fd_step: float = 1e-6


@dataclass
class OptimizationReport:
    kinematical_bound: float
    best_dynamical_value: float
    best_pulse: ControlPulse
    iterations: int
    converged: bool
    restart_values: list[float] = field(default_factory=list)

    @property
    def gap(self) -> float:
        return self.kinematical_bound - self.best_dynamical_value


def kinematical_bound(A, r0) -> float:
    """``max_U trace(A U rho0 U^dagger)``: eigenvalues paired ascending with ascending."""
    A = check_hermitian(A, "A")
    r0 = density_matrix(r0, "r0")
    if A.shape != r0.shape:
        raise ValidationError(f"dimension mismatch: {A.shape} vs {r0.shape}")
    return float(np.dot(np.linalg.eigvalsh(A), np.linalg.eigvalsh(r0)))


def orbit_optimum(
    basis: LieAlgebraBasis, r0, A, opts: SearchOptions | None = None
) -> tuple[float, np.ndarray]:
    """Best ``trace(A exp(X) rho0 exp(X)^dagger)`` over ``X`` in the algebra, with its coefficients."""
    opts = opts or SearchOptions()
    r0 = density_matrix(r0, "r0")
    A = check_hermitian(A, "A")
    d = len(basis)
    if d == 0:
        return expectation(A, r0), np.zeros(0)
    fg = orbit_objective(basis.elements, r0, A)
    best_c = np.zeros(d)
    best = fg(best_c)[0]
    for ss in _restart_seeds(opts.seed, opts.restarts):
        rng = np.random.default_rng(ss)
        c0 = rng.uniform(-opts.init_scale, opts.init_scale, size=d)
        res = gradient_ascent(
            fg, c0, lr=opts.lr, max_iter=opts.max_iter, gtol=opts.gtol, ftol=opts.ftol
        )
        if res.value > best:
            best, best_c = res.value, res.x
    return float(best), best_c


def orbit_bound(basis: LieAlgebraBasis, r0, A, opts: SearchOptions | None = None) -> float:
    return orbit_optimum(basis, r0, A, opts)[0]


def maximize_expectation(
    system: ControlSystem, r0, A, opts: OptimizerOptions | None = None
) -> OptimizationReport:
    """Maximize ``trace(A U rho0 U^dagger)`` over piecewise-constant pulses.

    Gradient ascent with backtracking over the ``(K, M)`` amplitude array,
    from ``opts.restarts`` random initial pulses.  The gradient is exact
    (derivative of each slice exponential) unless ``opts.gradient == "fd"``.
    ``iterations`` sums over restarts; ``converged`` refers to the best run.
    """
    opts = opts or OptimizerOptions()
    r0 = density_matrix(r0, "r0")
    A = check_hermitian(A, "A")
    if A.shape != (system.dim, system.dim) or r0.shape != A.shape:
        raise ValidationError("state, observable and system dimensions disagree")
    if opts.steps < 1 or not opts.duration >= 0:
        raise ValidationError(f"invalid pulse grid T={opts.duration}, K={opts.steps}")
    K, M = opts.steps, system.n_controls
    dt = opts.duration / K
    fg = pulse_objective(system.drift, np.stack(system.controls), r0, A, dt, (K, M))
    if opts.gradient == "fd":
        fg = with_fd_gradient(fg, opts.fd_step)
    elif opts.gradient != "analytic":
        raise ValidationError(f"unknown gradient mode {opts.gradient!r}")

    bound = kinematical_bound(A, r0)
    best = None
    values = []
    total_iter = 0
    for ss in _restart_seeds(opts.seed, opts.restarts):
        rng = np.random.default_rng(ss)
        x0 = rng.uniform(-opts.init_amplitude, opts.init_amplitude, size=K * M)
        res = gradient_ascent(
            fg, x0, lr=opts.lr, max_iter=opts.max_iter, gtol=opts.gtol, ftol=opts.ftol
        )
        total_iter += res.iterations
        values.append(res.value)
        LOG.debug("restart value %.10f after %d iterations", res.value, res.iterations)
        if best is None or res.value > best.value:
            best = res
    pulse = ControlPulse(opts.duration, best.x.reshape(K, M))
    # report the value of the returned pulse by direct propagation
    value = expectation(A, evolve_density(r0, propagate(system, pulse).final_unitary))
    return OptimizationReport(
        kinematical_bound=bound,
        best_dynamical_value=value,
        best_pulse=pulse,
        iterations=total_iter,
        converged=best.converged,
        restart_values=values,
    )
