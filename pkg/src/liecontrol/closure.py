"""Dynamical Lie algebra by breadth-first commutator closure.

The algebra is a real vector space of skew-Hermitian matrices; it is
represented by a Hilbert-Schmidt orthonormal basis built with two-pass
Gram-Schmidt.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .linalg import as_matrix, traceless_part
from .models import ControlSystem

LOG = logging.getLogger(__name__)


class GenerationStep(NamedTuple):
    """One accepted basis element.

    ``left is None`` marks a seed generator with index ``right`` (0 = drift);
    otherwise the element came from the commutator of basis elements
    ``left`` and ``right``.
    """

    left: int | None
    right: int
    residual: float


@dataclass(frozen=True)
class ClosureOptions:
    # relative threshold on the Gram-Schmidt residual of a candidate element
    tol: float = 1e-8
    ill_conditioning_factor: float = 10.0


@dataclass
class LieAlgebraBasis:
    dim_space: int
    elements: np.ndarray  # shape (d, N, N), orthonormal skew-Hermitian
    contains_identity: bool = False
    generation_log: list[GenerationStep] = field(default_factory=list)
    tol: float = 1e-8
    warnings: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return self.elements.shape[0]

    def __iter__(self):
        return iter(self.elements)

    def coefficients(self, X: np.ndarray) -> np.ndarray:
        """Real expansion coefficients ``<e_k, X>`` of ``X`` in this basis."""
        return _coefficients(self.elements, X)

    def combine(self, c: np.ndarray) -> np.ndarray:
        """The algebra element ``sum_k c_k e_k``."""
        return np.tensordot(np.asarray(c, dtype=float), self.elements, axes=1)

    def spans_identity(self, tol: float = 1e-8) -> bool:
        n = self.dim_space
        iI = 1j * np.eye(n) / np.sqrt(n)
        return project_residual(self, iI)[1] <= tol


def _coefficients(elements: np.ndarray, X: np.ndarray) -> np.ndarray:
    if elements.shape[0] == 0:
        return np.zeros(0)
    return np.real(np.einsum("kij,ij->k", elements.conj(), X))


def _residual(elements: np.ndarray, X: np.ndarray) -> np.ndarray:
    r = X - np.tensordot(_coefficients(elements, X), elements, axes=1) if len(elements) else X.copy()
    # second pass restores orthogonality lost to cancellation
    if len(elements):
        r = r - np.tensordot(_coefficients(elements, r), elements, axes=1)
    return r


def project_residual(basis: LieAlgebraBasis, X) -> tuple[np.ndarray, float]:
    """Component of ``X`` orthogonal to the span of ``basis`` and its norm."""
    X = as_matrix(X, "X")
    r = _residual(basis.elements, X)
    return r, float(np.linalg.norm(r))


def _span_contains(vectors: list[np.ndarray], target: np.ndarray, tol: float) -> bool:
    # real-linear span membership via least squares on stacked real/imag parts
    if not vectors:
        return False
    A = np.stack([np.concatenate([v.real.ravel(), v.imag.ravel()]) for v in vectors], axis=1)
    b = np.concatenate([target.real.ravel(), target.imag.ravel()])
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    return float(np.linalg.norm(A @ coef - b)) <= tol * max(1.0, float(np.linalg.norm(b)))


def generate_dynamical_algebra(
    system: ControlSystem, opts: ClosureOptions | None = None
) -> LieAlgebraBasis:
    """Orthonormal basis of the Lie algebra generated by ``i H0'``, ``i H_1``, ...

    ``H0'`` is the traceless part of the drift.  Seeds are taken in input
    order, then every pair ``(e_i, e_j)`` with ``i < j`` is commutated in
    order of ``j``; a commutator is accepted when its residual after
    projection exceeds ``opts.tol``.  ``contains_identity`` records whether
    ``i I`` lies in the algebra generated by the raw (untraced) generators.
    """
    opts = opts or ClosureOptions()
    n = system.dim
    max_dim = n * n
    seeds = [1j * traceless_part(system.drift)] + [1j * H for H in system.controls]

    elements = np.zeros((0, n, n), dtype=complex)
    log: list[GenerationStep] = []
    warnings: list[str] = []

    def accept(X: np.ndarray, scale: float, left: int | None, right: int) -> bool:
        nonlocal elements
        if scale == 0.0:
            return False
        r = _residual(elements, X)
        norm = float(np.linalg.norm(r)) / scale
        if norm <= opts.tol:
            return False
        if norm <= opts.ill_conditioning_factor * opts.tol:
            msg = (
                f"element {len(elements)} accepted with relative residual {norm:.3e}, "
                f"within {opts.ill_conditioning_factor:g}x of tolerance {opts.tol:.1e}"
            )
            LOG.warning(msg)
            warnings.append(msg)
        r = r / np.linalg.norm(r)
        r = 0.5 * (r - r.conj().T)
        elements = np.concatenate([elements, r[None]], axis=0)
        log.append(GenerationStep(left, right, norm))
        return True

    for k, g in enumerate(seeds):
        if len(elements) < max_dim:
            accept(g, float(np.linalg.norm(g)), None, k)

    j = 0
    while j < len(elements) and len(elements) < max_dim:
        for i in range(j):
            C = elements[i] @ elements[j] - elements[j] @ elements[i]
            accept(C, 1.0, i, j)
            if len(elements) >= max_dim:
                break
        j += 1

    # iI lies in the raw algebra iff it is spanned by the raw generators
    # together with the derived algebra [L, L].
    raw = [1j * system.drift] + [1j * H for H in system.controls]
    derived = [
        elements[i] @ elements[j] - elements[j] @ elements[i]
        for j in range(len(elements))
        for i in range(j)
    ]
    contains_identity = _span_contains(raw + derived, 1j * np.eye(n), 1e-8)

    LOG.debug("closure of %s: dimension %d", system.label or "system", len(elements))
    return LieAlgebraBasis(
        dim_space=n,
        elements=elements,
        contains_identity=contains_identity,
        generation_log=log,
        tol=opts.tol,
        warnings=warnings,
    )


def algebra_dimension(basis: LieAlgebraBasis) -> int:
    return len(basis)


def basis_from_elements(elements, tol: float = 1e-8) -> LieAlgebraBasis:
    """Orthonormalize a list of skew-Hermitian matrices (no closure).

    Useful to hand-build a known algebra, e.g. the full su(N).
    """
    mats = [as_matrix(X) for X in elements]
    n = mats[0].shape[0]
    out = np.zeros((0, n, n), dtype=complex)
    log = []
    for k, X in enumerate(mats):
        scale = float(np.linalg.norm(X))
        r = _residual(out, X)
        if scale > 0 and np.linalg.norm(r) > tol * scale:
            log.append(GenerationStep(None, k, float(np.linalg.norm(r)) / scale))
            out = np.concatenate([out, (r / np.linalg.norm(r))[None]], axis=0)
    basis = LieAlgebraBasis(dim_space=n, elements=out, generation_log=log, tol=tol)
    basis.contains_identity = basis.spans_identity()
    return basis


def su_basis(n: int) -> LieAlgebraBasis:
    """Generalized Gell-Mann basis of su(n), as skew-Hermitian matrices."""
    mats = []
    for j in range(n):
        for k in range(j + 1, n):
            S = np.zeros((n, n), dtype=complex)
            S[j, k] = S[k, j] = 1.0
            A = np.zeros((n, n), dtype=complex)
            A[j, k], A[k, j] = -1j, 1j
            mats += [1j * S, 1j * A]
    for l in range(1, n):
        D = np.zeros((n, n), dtype=complex)
        D[np.arange(l), np.arange(l)] = 1.0
        D[l, l] = -l
        mats.append(1j * D)
    return basis_from_elements(mats)
