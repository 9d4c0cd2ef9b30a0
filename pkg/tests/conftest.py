import math

import numpy as np
import pytest

from ptoqs.pt import PTParams

DEFAULT = PTParams(0.1, 0.4, math.pi / 6)


@pytest.fixture
def default_params():
    return DEFAULT


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_params(rng, n):
    """``n`` random unbroken-PT parameter sets, kept away from the exceptional point."""
    out = []
    while len(out) < n:
        r, s = rng.uniform(0.01, 2.0, 2)
        psi = rng.uniform(-math.pi, math.pi)
        if abs(r * math.sin(psi)) / s < 0.95:
            out.append(PTParams(r, s, psi))
    return out


def random_density(rng, dim, rank=None):
    rank = dim if rank is None else rank
    x = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, dim):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
