"""Deterministic commuting-pair fixtures."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation, DimensionMismatch
from .matcore import opnorm

__all__ = ["PairFixture", "gen_commuting_pair", "offdiag_pair", "truncated_hardy_pair", "PROVENANCES"]

PROVENANCES = ("paper_example", "random_polynomial", "truncated_hardy")


@dataclass
class PairFixture:
    name: str
    T1: np.ndarray
    T2: np.ndarray
    provenance: str

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        self.T1 = np.asarray(self.T1, dtype=complex)
        self.T2 = np.asarray(self.T2, dtype=complex)

    @property
    def commutator(self) -> float:
        return float(np.linalg.norm(self.T1 @ self.T2 - self.T2 @ self.T1))


def offdiag_pair(a=0.5, b=0.5, x=0.5, y=0.5, tol: float = 1e-12) -> PairFixture:
    """``T1 = [[0, a], [b, 0]]``, ``T2 = [[0, x], [y, 0]]``; needs ``a y = b x``."""
    vals = [complex(v) for v in (a, b, x, y)]
    if any(abs(v) >= 1 for v in vals):
        raise ConstraintViolation("a, b, x, y must have modulus < 1")
    a, b, x, y = vals
    if abs(a * y - b * x) > tol:
        raise ConstraintViolation(f"a y - b x = {a * y - b * x:.3e} must vanish")
    return PairFixture(f"offdiag_pair({a.real:g},{b.real:g},{x.real:g},{y.real:g})",
                       [[0, a], [b, 0]], [[0, x], [y, 0]], "paper_example")


def truncated_hardy_pair(N: int) -> PairFixture:
    """``T1 = [[0, 0], [I, 0]]`` and ``T2 = S_N (+) S_N`` on C^N (+) C^N."""
    S = np.eye(N, k=-1)
    Z = np.zeros((N, N))
    T1 = np.block([[Z, Z], [np.eye(N), Z]])
    T2 = np.block([[S, Z], [Z, S]])
    return PairFixture(f"truncated_hardy(N={N})", T1, T2, "truncated_hardy")


def _poly(coeffs, A):
    out = np.zeros_like(A)
    for c in coeffs[::-1]:
        out = out @ A + c * np.eye(A.shape[0])
    return out


def gen_commuting_pair(seed: int, dim: int, method: str = "random_polynomial",
                       scale: float = 1.0, eps: float = 0.1, params=None) -> PairFixture:
    """Commuting contraction pair.

    random_polynomial
        ``T_i = scale * p_i(A) / (||p_i(A)|| + eps)`` for one complex Gaussian
        A and random polynomials of degree 1..3; polynomials in one matrix
        commute up to roundoff.
    truncated_hardy
        The 2 dim x 2 dim pair of `truncated_hardy_pair`.
    paper_example
        `offdiag_pair` with ``params = (a, b, x, y)`` (dim must be 2).
    """
    if dim < 1 or dim > 64:
        raise DimensionMismatch("dim must lie in 1..64")
    if method == "truncated_hardy":
        return truncated_hardy_pair(dim)
    if method == "paper_example":
        if dim != 2:
            raise DimensionMismatch("the paper_example pair is 2 x 2")
        return offdiag_pair(*(params if params is not None else (0.5, 0.5, 0.5, 0.5)))
    if method != "random_polynomial":
        raise ValueError(f"unknown method {method!r}")
    if not 0 < scale <= 1:
        raise ValueError("scale must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    A = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2 * dim)
    Ts = []
    for _ in range(2):
        deg = int(rng.integers(1, 4))
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        P = _poly(c, A)
        Ts.append(scale * P / (opnorm(P) + eps))
    return PairFixture(f"random_polynomial(seed={seed},dim={dim},scale={scale:g})",
                       Ts[0], Ts[1], "random_polynomial")
