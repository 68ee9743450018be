"""Reachability of density matrices under the dynamical group.

The orbit of ``rho0`` is ``{W rho0 W^dagger : W = exp(X), X in L}``.  Three
tests are combined: isospectrality (kinematic admissibility), preservation
of the invariant-form constraint on the traceless part, and a numerical
search over the orbit as constructive evidence.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ._ascent import gradient_ascent, orbit_objective
from .classify import InvariantForm, classify_algebra
from .closure import LieAlgebraBasis, generate_dynamical_algebra
from .errors import ValidationError
from .linalg import expm_skew_batch
from .models import ControlSystem
from .states import density_matrix

LOG = logging.getLogger(__name__)

REACHABLE_NUMERIC = "reachable_numeric"
EXCLUDED_BY_FORM = "excluded_by_form"
EXCLUDED_KINEMATIC = "excluded_kinematic"
INCONCLUSIVE = "inconclusive"

SPECTRUM_ATOL = 1e-8
FORM_RTOL = 1e-8


@dataclass(frozen=True)
class SearchOptions:
    restarts: int = 20
    seed: int = 0
    max_iter: int = 2000
    lr: float = 0.1
    gtol: float = 1e-10
    ftol: float = 1e-15
    init_scale: float = np.pi
    tol: float = 1e-6  # orbit distance accepted as reached
    early_stop: float | None = None  # stop restarting once the distance is below this


@dataclass
class StateDecomposition:
    """``rho = -i x + alpha I`` with ``x = i * traceless(rho)`` skew-Hermitian."""

    alpha: float
    x: np.ndarray

    def reconstruct(self) -> np.ndarray:
        n = self.x.shape[0]
        return -1j * self.x + self.alpha * np.eye(n)


@dataclass
class ReachabilityVerdict:
    kinematic: bool
    form_necessary: bool | None
    orbit_distance: float | None
    verdict: str
    seed: int
    form_residuals: tuple[float, float] | None = None
    best_coeffs: np.ndarray | None = None
    notes: list[str] = field(default_factory=list)


def kinematically_admissible(r0, r1, atol: float = SPECTRUM_ATOL) -> bool:
    """True iff the two states have the same sorted spectrum."""
    r0 = density_matrix(r0, "r0")
    r1 = density_matrix(r1, "r1")
    if r0.shape != r1.shape:
        raise ValidationError(f"dimension mismatch: {r0.shape} vs {r1.shape}")
    w0 = np.linalg.eigvalsh(r0)
    w1 = np.linalg.eigvalsh(r1)
    return bool(np.all(np.abs(w0 - w1) <= atol))


def decompose_state(r) -> StateDecomposition:
    r = density_matrix(r)
    n = r.shape[0]
    alpha = float(np.trace(r).real) / n
    x = 1j * (r - alpha * np.eye(n))
    return StateDecomposition(alpha, 0.5 * (x - x.conj().T))


def form_constraint_check(d: StateDecomposition, J) -> tuple[bool, float]:
    """Does the traceless part satisfy ``x^T J + J x = 0``?"""
    J = J.J if isinstance(J, InvariantForm) else np.asarray(J, dtype=complex)
    x = d.x
    residual = float(np.linalg.norm(x.T @ J + J @ x))
    xn = float(np.linalg.norm(x))
    if xn == 0.0:
        return True, residual
    return residual <= FORM_RTOL * xn, residual


def _restart_seeds(seed: int, restarts: int) -> list[np.random.SeedSequence]:
    # restart i uses the same stream whatever the total restart count
    return np.random.SeedSequence(seed).spawn(restarts)


def orbit_distance(basis: LieAlgebraBasis, r0, r1, c) -> float:
    W, _, _ = expm_skew_batch(basis.combine(c))
    return float(np.linalg.norm(W @ r0 @ W.conj().T - r1))


def orbit_search(
    basis: LieAlgebraBasis, r0, r1, opts: SearchOptions | None = None
) -> tuple[float, np.ndarray]:
    """Smallest ``||W r0 W^dagger - r1||_F`` found over ``W = exp(sum c_k e_k)``.

    Since ``||W r0 W^dagger||_F`` is constant on the orbit, minimizing the
    distance is the same as maximizing ``trace(r1 W r0 W^dagger)``; that
    is done by gradient ascent from the origin and from ``opts.restarts``
    random coefficient vectors.
    """
    opts = opts or SearchOptions()
    r0 = density_matrix(r0, "r0")
    r1 = density_matrix(r1, "r1")
    d = len(basis)
    if d == 0:
        return float(np.linalg.norm(r0 - r1)), np.zeros(0)
    fg = orbit_objective(basis.elements, r0, r1)
    # distance^2 = ||r0||^2 + ||r1||^2 - 2 f; stop well inside the tolerance
    const = float(np.linalg.norm(r0) ** 2 + np.linalg.norm(r1) ** 2)
    target = 0.5 * (const - (0.01 * opts.tol) ** 2)
    scales = np.linalg.norm(basis.elements, axis=(1, 2))

    best_c = np.zeros(d)
    best = orbit_distance(basis, r0, r1, best_c)
    for ss in _restart_seeds(opts.seed, opts.restarts):
        if opts.early_stop is not None and best <= opts.early_stop:
            break
        rng = np.random.default_rng(ss)
        c0 = rng.uniform(-opts.init_scale, opts.init_scale, size=d) * scales
        res = gradient_ascent(
            fg, c0, lr=opts.lr, max_iter=opts.max_iter, gtol=opts.gtol, ftol=opts.ftol,
            target=target,
        )
        dist = orbit_distance(basis, r0, r1, res.x)
        if dist < best:
            best, best_c = dist, res.x
    return best, best_c


def reachable_verdict(
    system: ControlSystem,
    r0,
    r1,
    opts: SearchOptions | None = None,
    basis: LieAlgebraBasis | None = None,
) -> ReachabilityVerdict:
    opts = opts or SearchOptions()
    r0 = density_matrix(r0, "r0")
    r1 = density_matrix(r1, "r1")
    if not kinematically_admissible(r0, r1):
        return ReachabilityVerdict(False, None, None, EXCLUDED_KINEMATIC, opts.seed,
                                   notes=["spectra differ"])

    basis = basis if basis is not None else generate_dynamical_algebra(system)
    cls = classify_algebra(basis)
    form = cls.form
    form_ok: bool | None = None
    residuals = None
    notes: list[str] = []
    if form is not None:
        h0, res0 = form_constraint_check(decompose_state(r0), form)
        h1, res1 = form_constraint_check(decompose_state(r1), form)
        residuals = (res0, res1)
        # the constraint is preserved along orbits in both directions
        form_ok = h0 == h1
        if not form_ok:
            side = "target" if h0 else "initial state"
            notes.append(f"{side} violates the {form.symmetry} invariant-form constraint")
            return ReachabilityVerdict(True, False, None, EXCLUDED_BY_FORM, opts.seed,
                                       form_residuals=residuals, notes=notes)

    dist, coeffs = orbit_search(basis, r0, r1, opts)
    verdict = REACHABLE_NUMERIC if dist <= opts.tol else INCONCLUSIVE
    if verdict == INCONCLUSIVE:
        notes.append("orbit search did not reach the target; no obstruction known")
    return ReachabilityVerdict(True, form_ok, dist, verdict, opts.seed,
                               form_residuals=residuals, best_coeffs=coeffs, notes=notes)
