"""Acceptance criteria, one test each.

Every test records a single ``PASS``/``FAIL`` line with the measured
quantities and wall time.  The lines are printed as they happen (visible
with ``-s``) and repeated in the terminal summary.
"""

import itertools
import time

import numpy as np
import pytest

from conftest import J_SO3, J_SP2, RHO0, RHO1, RHO_DOUBLE_SWAP, SX, U_REAL, random_hermitian, random_unitary
from liecontrol import (
    ControlPulse,
    ControlSystem,
    OptimizerOptions,
    SearchOptions,
    classify_algebra,
    commutator,
    controllability_verdict,
    decompose_state,
    evolve_density,
    form_constraint_check,
    generate_dynamical_algebra,
    kinematical_bound,
    maximize_expectation,
    orbit_bound,
    orbit_search,
    propagate,
    reachable_verdict,
)
from liecontrol.classify import FULL_SU, ORTHOGONAL_SO, SYMPLECTIC_SP, form_residual
from liecontrol.cli import example_path
from liecontrol.io import load_system
from liecontrol.states import pure_state

RESULTS: list[str] = []


def record(n, ok, detail, elapsed, limit):
    ok = ok and elapsed < limit
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail} [{elapsed:.2f} s, limit {limit:g} s]"
    RESULTS.append(line)
    print("\n" + line)
    return ok


def brute_force_bound(a, lam):
    return max(float(np.dot(a, np.asarray(lam)[list(p)])) for p in itertools.permutations(range(len(a))))


def test_criterion_1_three_level_golden():
    t0 = time.perf_counter()
    system = load_system(example_path("three_level")).system
    basis = generate_dynamical_algebra(system)
    cls = classify_algebra(basis)
    v = controllability_verdict(cls, system.dim)
    res = max(np.linalg.norm(x.T @ J_SO3 + J_SO3 @ x) for x in basis.elements)
    dt = time.perf_counter() - t0
    ok = len(basis) == 3 and cls.tag == ORTHOGONAL_SO and res <= 1e-8 and not v.complete and not v.pure_state
    assert record(1, ok, f"dim={len(basis)} tag={cls.tag} J residual={res:.2e} "
                  f"complete={v.complete} pure_state={v.pure_state}", dt, 1.0)


def test_criterion_2_four_level_golden():
    t0 = time.perf_counter()
    system = load_system(example_path("four_level")).system
    basis = generate_dynamical_algebra(system)
    cls = classify_algebra(basis)
    v = controllability_verdict(cls, system.dim)
    res = max(np.linalg.norm(x.T @ J_SP2 + J_SP2 @ x) for x in basis.elements)
    dt = time.perf_counter() - t0
    ok = len(basis) == 10 and cls.tag == SYMPLECTIC_SP and res <= 1e-8 and not v.complete and v.pure_state
    assert record(2, ok, f"dim={len(basis)} tag={cls.tag} J residual={res:.2e} "
                  f"complete={v.complete} pure_state={v.pure_state}", dt, 1.0)


def test_criterion_3_reachability():
    t0 = time.perf_counter()
    sf = load_system(example_path("four_level"))
    basis = generate_dynamical_algebra(sf.system)
    v = reachable_verdict(sf.system, sf.state("rho0"), sf.state("rho1"), basis=basis)
    _, res1 = form_constraint_check(decompose_state(RHO1), J_SP2)
    swap_ok, _ = form_constraint_check(decompose_state(RHO_DOUBLE_SWAP), J_SP2)
    dist, _ = orbit_search(basis, RHO0, RHO_DOUBLE_SWAP, SearchOptions(restarts=20, seed=0))
    dt = time.perf_counter() - t0
    ok = (v.verdict == "excluded_by_form" and abs(res1 - 0.1) <= 1e-10
          and swap_ok and dist <= 1e-6)
    assert record(3, ok, f"verdict={v.verdict} rho1 form residual={res1:.12f} "
                  f"double-swap form ok={swap_ok} distance={dist:.2e}", dt, 30.0)


def test_criterion_4_kinematical_bound():
    t0 = time.perf_counter()
    kb = kinematical_bound(RHO1, RHO0)
    oracle = brute_force_bound(np.diag(RHO1).real, np.diag(RHO0).real)
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        a = rng.normal(size=4)
        lam = rng.dirichlet(np.ones(4))
        got = kinematical_bound(np.diag(a), np.diag(lam))
        worst = max(worst, abs(got - brute_force_bound(a, lam)))
    dt = time.perf_counter() - t0
    ok = abs(kb - 0.275) <= 1e-15 and abs(kb - oracle) <= 1e-15 and worst <= 1e-12
    assert record(4, ok, f"bound={kb:.15f} brute force={oracle:.15f} "
                  f"max deviation on 100 random instances={worst:.1e}", dt, 5.0)


def test_criterion_5_bound_gap(four_level, sp2_basis):
    t0 = time.perf_counter()
    ob = orbit_bound(sp2_basis, RHO0, RHO1, SearchOptions(restarts=20, seed=0))
    r64 = maximize_expectation(four_level, RHO0, RHO1, OptimizerOptions(steps=64, seed=0))
    r128 = maximize_expectation(four_level, RHO0, RHO1, OptimizerOptions(steps=128, seed=0))
    dt = time.perf_counter() - t0
    ok = True
    for r in (r64, r128):
        ok &= abs(r.best_dynamical_value - ob) <= 1e-3
        ok &= r.best_dynamical_value <= 0.275 - 1e-3
    ok &= ob <= 0.275 - 1e-3
    ok &= abs(r64.best_dynamical_value - r128.best_dynamical_value) <= 1e-3
    assert record(5, ok, f"orbit bound={ob:.6f} pulse K=64 {r64.best_dynamical_value:.6f} "
                  f"K=128 {r128.best_dynamical_value:.6f} kinematic=0.275 gap={r64.gap:.6f}", dt, 300.0)


def test_criterion_6_gap_closes_when_controllable():
    t0 = time.perf_counter()
    two = ControlSystem(np.diag([0.0, 1.0]), (SX,), label="two-level")
    hits2 = 0
    for seed in range(10):
        rep = maximize_expectation(two, pure_state([1, 0]), np.diag([0.0, 1.0]),
                                   OptimizerOptions(restarts=1, seed=seed))
        hits2 += rep.gap <= 1e-3
    hits3 = 0
    for seed in range(10):
        rng = np.random.default_rng(100 + seed)
        s = ControlSystem(random_hermitian(rng, 3), (random_hermitian(rng, 3),))
        assert classify_algebra(generate_dynamical_algebra(s)).tag in (FULL_SU, "full_u")
        G = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        rho = G @ G.conj().T
        rho /= np.trace(rho).real
        rep = maximize_expectation(s, rho, random_hermitian(rng, 3), OptimizerOptions(restarts=1, seed=seed))
        hits3 += rep.gap <= 1e-3
    dt = time.perf_counter() - t0
    ok = hits2 >= 8 and hits3 >= 8
    assert record(6, ok, f"within 1e-3 of the bound: two-level {hits2}/10, "
                  f"random three-level {hits3}/10", dt, 120.0)


def test_criterion_7_real_structure(three_level):
    t0 = time.perf_counter()
    rng = np.random.default_rng(77)
    states = []
    for _ in range(10):
        G = rng.normal(size=(3, 3))
        sigma = G @ G.T
        states.append(U_REAL.conj().T @ (sigma / np.trace(sigma)) @ U_REAL)
    worst = 0.0
    for _ in range(50):
        pulse = ControlPulse(rng.uniform(0.5, 10.0), rng.normal(scale=2.0, size=(rng.integers(5, 40), 1)))
        res = propagate(three_level, pulse, keep_intermediate=True)
        for U in res.intermediate_unitaries:
            V = U_REAL @ U  # back in the real frame
            for rho in states:
                worst = max(worst, float(np.abs((V @ rho @ V.conj().T).imag).max()))
    dt = time.perf_counter() - t0
    assert record(7, worst <= 1e-9, f"max imaginary entry over 50 pulses x 10 real states={worst:.1e}",
                  dt, 30.0)


def _structured_system(rng, kind, n):
    if kind == "generic":
        m = rng.integers(1, 4)
        return ControlSystem(random_hermitian(rng, n), tuple(random_hermitian(rng, n) for _ in range(m)))
    if kind == "orthogonal":
        mats = [rng.normal(size=(n, n)) for _ in range(3)]
        H = [1j * (A - A.T) for A in mats]
        return ControlSystem(H[0], (H[1], H[2]))
    if kind == "symplectic":
        k = n // 2
        gens = []
        for _ in range(3):
            A = 1j * random_hermitian(rng, k)
            B = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
            B = B + B.T
            gens.append(np.block([[A, B], [-B.conj(), A.conj()]]))
        V = random_unitary(rng, 2 * k)
        H = [-1j * V @ g @ V.conj().T for g in gens]
        return ControlSystem(H[0], (H[1], H[2]))
    # reducible: block diagonal
    k = rng.integers(1, n)
    blocks = [(random_hermitian(rng, k), random_hermitian(rng, n - k)) for _ in range(3)]
    H = [np.block([[a, np.zeros((k, n - k))], [np.zeros((n - k, k)), b]]) for a, b in blocks]
    return ControlSystem(H[0], (H[1], H[2]))


def test_criterion_8_property_suites():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    unit_ok = spec_ok = True
    worst_unit = worst_spec = worst_jacobi = 0.0
    for _ in range(40):
        n = int(rng.integers(2, 6))
        s = ControlSystem(random_hermitian(rng, n), (random_hermitian(rng, n), random_hermitian(rng, n)))
        K = int(rng.integers(1, 60))
        res = propagate(s, ControlPulse(rng.uniform(0, 20), rng.normal(scale=3, size=(K, 2))))
        unit_ok &= res.unitarity_defect <= 1e-9 * K
        worst_unit = max(worst_unit, res.unitarity_defect / K)
        G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        rho = G @ G.conj().T
        rho /= np.trace(rho).real
        out = evolve_density(rho, res.final_unitary)
        d = float(np.abs(np.linalg.eigvalsh(out) - np.linalg.eigvalsh(rho)).max())
        worst_spec = max(worst_spec, d)
    spec_ok = worst_spec <= 1e-10
    for _ in range(200):
        n = int(rng.integers(2, 6))
        a, b, c = (1j * random_hermitian(rng, n) for _ in range(3))
        j = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
        worst_jacobi = max(worst_jacobi, float(np.linalg.norm(j)))
    jacobi_ok = worst_jacobi <= 1e-10

    kinds = ("generic", "orthogonal", "symplectic", "reducible")
    mismatches = 0
    for i in range(50):
        kind = kinds[i % 4]
        n = 4 if kind == "symplectic" else int(rng.integers(2, 6))
        s = _structured_system(rng, kind, n)
        ref = classify_algebra(generate_dynamical_algebra(s))
        gens = [s.drift, *s.controls]
        for perm in itertools.permutations(range(len(gens))):
            if perm[0] != 0 and kind == "generic":
                # the drift is made traceless; keep it first for generic systems
                continue
            p = [gens[k] for k in perm]
            other = classify_algebra(generate_dynamical_algebra(ControlSystem(p[0], tuple(p[1:]))))
            mismatches += (other.dim, other.tag) != (ref.dim, ref.tag)
    dt = time.perf_counter() - t0
    ok = unit_ok and spec_ok and jacobi_ok and mismatches == 0
    assert record(8, ok, f"unitarity defect/K={worst_unit:.1e} spectrum={worst_spec:.1e} "
                  f"jacobi={worst_jacobi:.1e} closure-order mismatches={mismatches}", dt, 120.0)
