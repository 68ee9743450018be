import numpy as np
import pytest

from liecontrol import generate_dynamical_algebra, paper_four_level, paper_three_level

RHO0 = np.diag([0.35, 0.30, 0.20, 0.15]).astype(complex)
RHO1 = np.diag([0.30, 0.35, 0.20, 0.15]).astype(complex)
RHO_DOUBLE_SWAP = np.diag([0.15, 0.20, 0.30, 0.35]).astype(complex)

J_SO3 = np.array([[0, 0, 1], [0, -1, 0], [1, 0, 0]], dtype=complex)
J_SP2 = np.array([[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]], dtype=complex)
_s = 1 / np.sqrt(2)
U_REAL = np.array([[_s, 0, _s], [1j * _s, 0, -1j * _s], [0, 1j, 0]])

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def random_hermitian(rng, n, traceless=False):
    M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    H = (M + M.conj().T) / 2
    if traceless:
        H -= np.trace(H) / n * np.eye(n)
    return H


def random_skew(rng, n):
    return 1j * random_hermitian(rng, n)


def random_unitary(rng, n):
    Q, R = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_density(rng, n, rank=None):
    rank = n if rank is None else rank
    G = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


@pytest.fixture(scope="session")
def three_level():
    return paper_three_level()


@pytest.fixture(scope="session")
def four_level():
    return paper_four_level()


@pytest.fixture(scope="session")
def so3_basis(three_level):
    return generate_dynamical_algebra(three_level)


@pytest.fixture(scope="session")
def sp2_basis(four_level):
    return generate_dynamical_algebra(four_level)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
