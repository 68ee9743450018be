"""Algebra type detection via invariant bilinear forms, and controllability verdicts.

A form ``J`` is invariant when ``x^T J + J x = 0`` for every element ``x`` of
the algebra.  A symmetric nondegenerate ``J`` marks an orthogonal algebra
so(N); an antisymmetric one marks a symplectic algebra sp(N/2).  Only
U(N)/SU(N) and Sp(N/2) act transitively on the sphere of pure states.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .closure import LieAlgebraBasis
from .errors import ValidationError
from .linalg import as_matrix, check_unitary

LOG = logging.getLogger(__name__)

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"
NO_SYMMETRY = "none"

FULL_U = "full_u"
FULL_SU = "full_su"
ORTHOGONAL_SO = "orthogonal_so"
SYMPLECTIC_SP = "symplectic_sp"
OTHER = "other_subalgebra"

NULL_RTOL = 1e-8
NONDEGENERACY_RTOL = 1e-8


@dataclass
class InvariantForm:
    J: np.ndarray
    symmetry: str
    residual: float
    null_dim: int = 1
    notes: list[str] = field(default_factory=list)


@dataclass
class AlgebraClass:
    tag: str
    dim: int
    dim_space: int
    form: InvariantForm | None = None
    notes: list[str] = field(default_factory=list)


@dataclass
class ControllabilityVerdict:
    complete: bool
    pure_state: bool
    notes: str = ""


def form_residual(elements, J: np.ndarray) -> float:
    """Largest ``||x^T J + J x||_F`` over the given algebra elements."""
    worst = 0.0
    for x in elements:
        worst = max(worst, float(np.linalg.norm(x.T @ J + J @ x)))
    return worst


def _constraint_matrix(elements: np.ndarray) -> np.ndarray:
    # row-major vec: vec(A J B) = kron(A, B^T) vec(J)
    n = elements.shape[-1]
    eye = np.eye(n)
    blocks = [np.kron(x.T, eye) + np.kron(eye, x.T) for x in elements]
    return np.concatenate(blocks, axis=0)


def _normalize(J: np.ndarray) -> np.ndarray:
    mags = np.abs(J).ravel()
    # first entry of (near-)maximal magnitude becomes exactly +1
    k = int(np.flatnonzero(mags >= (1 - 1e-8) * mags.max())[0])
    return J / J.ravel()[k]


def _is_nondegenerate(J: np.ndarray) -> bool:
    s = np.linalg.svd(J, compute_uv=False)
    return s[-1] >= NONDEGENERACY_RTOL * s[0]


def find_invariant_form(basis: LieAlgebraBasis, prefer: str | None = None) -> InvariantForm | None:
    """Solve ``x^T J + J x = 0`` over the basis for a nondegenerate ``J``.

    The null space of the stacked constraint system is found by SVD.  Since
    the constraint commutes with transposition, every null vector splits
    into symmetric and antisymmetric null vectors; the dominant part is
    returned, normalized so its first largest-magnitude entry equals 1.
    When the null space has several directions the candidate with the
    largest symmetric/antisymmetric imbalance is preferred and the
    ambiguity is noted.  ``prefer`` (SYMMETRIC or ANTISYMMETRIC) moves
    nondegenerate candidates of that symmetry to the front; this matters when
    the algebra preserves forms of both kinds, e.g. so(2).
    """
    elements = basis.elements
    if len(elements) == 0:
        raise ValidationError("basis is empty")
    n = basis.dim_space
    M = _constraint_matrix(elements)
    _, s, Vh = np.linalg.svd(M)
    # pad: M may have fewer rows than unknowns
    s_full = np.zeros(n * n)
    s_full[: s.size] = s
    null = Vh[s_full <= NULL_RTOL * max(s_full.max(), 1e-300)].conj()
    if null.shape[0] == 0:
        return None

    candidates = []
    for v in null:
        J = v.reshape(n, n)
        sym = 0.5 * (J + J.T)
        anti = 0.5 * (J - J.T)
        ns, na = np.linalg.norm(sym), np.linalg.norm(anti)
        parts = [(sym, SYMMETRIC), (anti, ANTISYMMETRIC)] if ns >= na else [
            (anti, ANTISYMMETRIC), (sym, SYMMETRIC)]
        for part, tag in parts:
            candidates.append((abs(ns - na), part, tag))
    # stable sort: most imbalanced null vector first, dominant part before minor
    candidates.sort(key=lambda c: -c[0])
    if prefer is not None:
        candidates.sort(key=lambda c: c[2] != prefer)

    notes = []
    if null.shape[0] > 1:
        notes.append(f"null space of the invariance constraints has dimension {null.shape[0]}")
    for _, part, tag in candidates:
        if np.linalg.norm(part) < 1e-6 or not _is_nondegenerate(part):
            continue
        J = _normalize(part)
        if tag == SYMMETRIC:
            J = 0.5 * (J + J.T)
        else:
            J = 0.5 * (J - J.T)
        return InvariantForm(
            J=J,
            symmetry=tag,
            residual=form_residual(elements, J),
            null_dim=null.shape[0],
            notes=notes,
        )
    LOG.info("invariant bilinear forms exist but all are degenerate (null dim %d)", null.shape[0])
    return None


def classify_algebra(basis: LieAlgebraBasis) -> AlgebraClass:
    n = basis.dim_space
    d = len(basis)
    notes: list[str] = []
    if d == n * n:
        return AlgebraClass(FULL_U, d, n)
    if d == n * n - 1 and not basis.spans_identity():
        if basis.contains_identity:
            notes.append("raw generators also span i*I: the full algebra is u(N) up to global phase")
        return AlgebraClass(FULL_SU, d, n, notes=notes)

    prefer = None
    if d == n * (n - 1) // 2:
        prefer = SYMMETRIC
    elif n % 2 == 0 and d == (n // 2) * (n + 1):
        prefer = ANTISYMMETRIC
    form = find_invariant_form(basis, prefer)
    if form is None:
        notes.append("no nondegenerate invariant bilinear form")
        return AlgebraClass(OTHER, d, n, notes=notes)
    notes.extend(form.notes)
    if form.symmetry == SYMMETRIC and d == n * (n - 1) // 2:
        return AlgebraClass(ORTHOGONAL_SO, d, n, form=form, notes=notes)
    if form.symmetry == ANTISYMMETRIC and n % 2 == 0 and d == (n // 2) * (n + 1):
        return AlgebraClass(SYMPLECTIC_SP, d, n, form=form, notes=notes)
    notes.append(
        f"{form.symmetry} invariant form found but dimension {d} does not match "
        f"the corresponding classical algebra for N = {n}"
    )
    return AlgebraClass(OTHER, d, n, form=form, notes=notes)


def controllability_verdict(cls: AlgebraClass, N: int | None = None) -> ControllabilityVerdict:
    N = cls.dim_space if N is None else N
    if cls.tag == FULL_U:
        return ControllabilityVerdict(True, True, f"L = u({N})")
    if cls.tag == FULL_SU:
        return ControllabilityVerdict(True, True, f"L = su({N}); complete up to a global phase")
    if cls.tag == SYMPLECTIC_SP:
        return ControllabilityVerdict(
            False, True, f"L = sp({N // 2}): transitive on pure states, not on density matrices"
        )
    if cls.tag == ORTHOGONAL_SO:
        return ControllabilityVerdict(
            False,
            False,
            f"L = so({N}): real states map only to real states; "
            f"O(2N) is not a subalgebra of U(N), so pure states are not controllable",
        )
    return ControllabilityVerdict(
        False, False, "subalgebra outside the classified families; pure-state controllability unknown"
    )


@dataclass
class RealStructureCheck:
    is_real_rep: bool
    max_imag: float
    condition_holds: bool
    condition_residual: float
    max_antisymmetry: float


def verify_real_structure(
    basis: LieAlgebraBasis, U, J, tol: float = 1e-10
) -> RealStructureCheck:
    """Check that ``U x U^dagger`` is real antisymmetric for all ``x`` in the basis.

    Also reports whether ``U = conj(U) J`` holds.  ``J`` may be an
    InvariantForm or a bare matrix.
    """
    U = check_unitary(U, "U")
    J = as_matrix(J.J if isinstance(J, InvariantForm) else J, "J")
    cond = float(np.linalg.norm(U - U.conj() @ J))
    max_imag = 0.0
    max_anti = 0.0
    for x in basis.elements:
        B = U @ x @ U.conj().T
        max_imag = max(max_imag, float(np.abs(B.imag).max()))
        max_anti = max(max_anti, float(np.linalg.norm(B + B.T)))
    is_real = max_imag <= tol and max_anti <= tol
    return RealStructureCheck(is_real, max_imag, cond <= tol, cond, max_anti)
