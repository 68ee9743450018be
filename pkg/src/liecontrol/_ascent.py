"""First-order ascent loop and exact gradients of expectation objectives."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import dexp_weights, expm_skew_batch

FunGrad = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass
class AscentResult:
    x: np.ndarray
    value: float
    grad_norm: float
    iterations: int
    converged: bool


def gradient_ascent(
    fg: FunGrad,
    x0: np.ndarray,
    lr: float = 0.1,
    max_iter: int = 2000,
    gtol: float = 1e-8,
    ftol: float = 0.0,
    armijo: float = 1e-4,
    min_step: float = 1e-14,
    target: float | None = None,
) -> AscentResult:
    """Maximize ``f`` by gradient ascent with backtracking.

    Trial steps start from the Barzilai-Borwein estimate (``lr`` on the
    first iteration) and are halved until the Armijo condition holds, so
    the objective never decreases.  Stops when the gradient norm drops
    below ``gtol``, when ``f`` reaches ``target``, when an accepted step improves ``f`` by at most
    ``ftol * max(1, |f|)``, or when no admissible step remains.
    """
    x = np.array(x0, dtype=float)
    f, g = fg(x)
    step = lr
    it = 0
    while it < max_iter:
        gn2 = float(g @ g)
        if np.sqrt(gn2) < gtol or (target is not None and f >= target):
            return AscentResult(x, f, float(np.sqrt(gn2)), it, True)
        t = step
        while True:
            x_new = x + t * g
            f_new, g_new = fg(x_new)
            if f_new >= f + armijo * t * gn2:
                break
            t *= 0.5
            if t < min_step:
                return AscentResult(x, f, float(np.sqrt(gn2)), it, False)
        it += 1
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        improvement = f_new - f
        x, f, g = x_new, f_new, g_new
        if ftol > 0 and improvement <= ftol * max(1.0, abs(f)):
            gn = float(np.linalg.norm(g))
            return AscentResult(x, f, gn, it, gn < gtol)
        # BB1 step for the minimization of -f; fall back to doubling
        step = float(s @ s) / -sy if sy < 0 else 2.0 * t
        step = min(max(step, 1e-8), 1e4)
    gn = float(np.linalg.norm(g))
    return AscentResult(x, f, gn, it, gn < gtol)


def orbit_objective(elements: np.ndarray, rho0: np.ndarray, A: np.ndarray) -> FunGrad:
    """``c -> trace(A W rho0 W^dagger)`` with ``W = exp(sum_k c_k e_k)`` and its exact gradient."""

    def fg(c: np.ndarray) -> tuple[float, np.ndarray]:
        X = np.tensordot(c, elements, axes=1)
        W, V, mu = expm_skew_batch(X)
        rho = W @ rho0 @ W.conj().T
        val = float(np.real(np.einsum("ij,ji->", A, rho)))
        Vh = V.conj().T
        G = Vh @ rho0 @ W.conj().T @ A @ V
        Et = Vh @ elements @ V
        W_ = G.T * dexp_weights(mu)
        grad = 2.0 * np.real(np.einsum("ij,kij->k", W_, Et))
        return val, grad

    return fg


def pulse_objective(
    drift: np.ndarray,
    controls: np.ndarray,
    rho0: np.ndarray,
    A: np.ndarray,
    dt: float,
    shape: tuple[int, int],
) -> FunGrad:
    """Flattened ``(K, M)`` amplitudes -> ``trace(A U rho0 U^dagger)`` with exact slice gradients."""
    K, M = shape
    E = -1j * dt * controls  # (M, N, N) derivative directions of each exponent

    def fg(flat: np.ndarray) -> tuple[float, np.ndarray]:
        amps = flat.reshape(K, M)
        X = -1j * dt * (drift[None] + np.tensordot(amps, controls, axes=1))
        Us, Vs, mus = expm_skew_batch(X)
        # forward states R_k = P_k rho0 P_k^dagger, R[0] = rho0
        R = np.empty((K + 1,) + rho0.shape, dtype=complex)
        R[0] = rho0
        for k in range(K):
            R[k + 1] = Us[k] @ R[k] @ Us[k].conj().T
        # backward observables B_k = Q_k^dagger A Q_k, Q_k = U_K...U_{k+1}
        B = np.empty((K,) + A.shape, dtype=complex)
        B[K - 1] = A
        for k in range(K - 1, 0, -1):
            B[k - 1] = Us[k].conj().T @ B[k] @ Us[k]
        val = float(np.real(np.einsum("ij,ji->", A, R[K])))
        Vh = np.swapaxes(Vs, -1, -2).conj()
        G = Vh @ R[:K] @ np.swapaxes(Us, -1, -2).conj() @ B @ Vs
        Et = Vh[:, None] @ E[None] @ Vs[:, None]
        W_ = np.swapaxes(G, -1, -2) * dexp_weights(mus)
        grad = 2.0 * np.real(np.einsum("kij,kmij->km", W_, Et))
        return val, grad.ravel()

    return fg


def central_difference(fg: FunGrad, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central finite-difference gradient of the value returned by ``fg``."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        out[i] = (fg(x + e)[0] - fg(x - e)[0]) / (2 * h)
    return out


def with_fd_gradient(fg: FunGrad, h: float = 1e-6) -> FunGrad:
    def wrapped(x: np.ndarray) -> tuple[float, np.ndarray]:
        return fg(x)[0], central_difference(fg, x, h)

    return wrapped
