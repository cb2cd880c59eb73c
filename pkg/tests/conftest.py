import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from pairmodel.fixtures import gen_commuting_pair

settings.register_profile("pairmodel", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pairmodel")

seeds = st.integers(min_value=0, max_value=10_000)
dims = st.integers(min_value=1, max_value=5)


def random_matrix(rng, n, m=None):
    m = n if m is None else m
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


def random_contraction(rng, n, norm=0.9):
    X = random_matrix(rng, n)
    return norm * X / np.linalg.norm(X, 2)


def random_unitary(rng, n):
    Q, R = np.linalg.qr(random_matrix(rng, n))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def cauchy_taylor(f, K, r=0.5, n=256):
    """Taylor coefficients of f from samples on |z| = r (independent of realizations)."""
    zs = r * np.exp(2j * np.pi * np.arange(n) / n)
    vals = np.array([f(z) for z in zs])
    c = np.fft.fft(vals, axis=0) / n
    return np.array([c[k] / r ** k for k in range(K)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@st.composite
def commuting_pairs(draw, min_dim=2, max_dim=5, scale=0.9):
    seed = draw(seeds)
    dim = draw(st.integers(min_value=min_dim, max_value=max_dim))
    fx = gen_commuting_pair(seed, dim, scale=scale)
    return fx.T1, fx.T2


# acceptance lines are collected here and printed once at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("]")[1].split(".")[0])):
            terminalreporter.write_line(line)
