import numpy as np
import pytest
from scipy.linalg import expm

from gaussian_cnp.invariants import omega


def random_symplectic(n, rng, scale=0.4):
    """exp(Omega H) for a random symmetric H: symplectic, generally active."""
    h = rng.standard_normal((2 * n, 2 * n))
    return expm(omega(n) @ (h + h.T) * scale)


def random_mixed_matrix(n, rng, nth_max=2.0, scale=0.4):
    S = random_symplectic(n, rng, scale)
    nus = 0.5 + rng.uniform(0, nth_max, n)
    return S @ np.diag(np.repeat(nus, 2)) @ S.T


def nu_oracle(matrix):
    """Symplectic eigenvalues as the positive eigenvalues of the Hermitian
    matrix ``i L^T Omega L`` with ``gamma = L L^T``."""
    n = matrix.shape[0] // 2
    L = np.linalg.cholesky(matrix)
    ev = np.linalg.eigvalsh(1j * L.T @ omega(n) @ L)
    return np.sort(ev[ev > 0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
