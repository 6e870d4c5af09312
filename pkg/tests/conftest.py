"""Shared grids and reference implementations built on numpy.linalg.

The references deliberately take different routes from the package: they
use LAPACK instead of the Jacobi solver, and minimize the quadratic forms
of F/4 and of the skew information directly instead of going through the
M and W matrices.
"""

import numpy as np
import pytest

from glaubercorr.model import ModelParams

GRID_P = tuple(round(0.05 + 0.1 * i, 2) for i in range(10))
GRID_N = tuple(range(3, 11))
GRID_M = (0, 1)
GRID_GAMMA = (0.0, 0.25, 0.5, 0.75, 1.0)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
LOCAL = [np.kron(s, np.eye(2)) for s in (SX, SY, SZ)]


def grid_params():
    return [ModelParams(p, n, m) for p in GRID_P for n in GRID_N for m in GRID_M]


def random_density(rng, dim=4, rank=None):
    rank = rank or int(rng.integers(1, dim + 1))
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, dim=4):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def random_pure(rng, dim=4):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def ref_qfi(rho, h):
    lam, vecs = np.linalg.eigh(rho)
    hv = vecs.conj().T @ h @ vecs
    total = 0.0
    for i in range(len(lam)):
        for j in range(len(lam)):
            s = lam[i] + lam[j]
            if s > 1e-12:
                total += 2 * (lam[i] - lam[j]) ** 2 / s * abs(hv[i, j]) ** 2
    return total


def ref_sqrtm(rho):
    lam, vecs = np.linalg.eigh(rho)
    lam = np.where(lam < 1e-14 * max(lam.max(), 1.0), 0.0, lam)
    return (vecs * np.sqrt(lam)) @ vecs.conj().T


def ref_lqfi(rho):
    """Smallest eigenvalue of the 3x3 quadratic form r -> F(rho, r.sigma (x) I) / 4."""
    k = np.zeros((3, 3))
    for a in range(3):
        for b in range(3):
            plus = ref_qfi(rho, LOCAL[a] + LOCAL[b])
            minus = ref_qfi(rho, LOCAL[a] - LOCAL[b])
            k[a, b] = (plus - minus) / 16
    return float(np.linalg.eigvalsh(k)[0])


def ref_lqu(rho):
    """Smallest eigenvalue of the skew-information quadratic form, from commutators."""
    root = ref_sqrtm(rho)
    comms = [root @ op - op @ root for op in LOCAL]
    s = np.array([[-0.5 * np.trace(comms[a] @ comms[b]).real for b in range(3)] for a in range(3)])
    return float(np.linalg.eigvalsh((s + s.T) / 2)[0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
