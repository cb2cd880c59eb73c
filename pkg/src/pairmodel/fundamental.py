"""Fundamental operators of a commuting pair and its characteristic triple."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ando import AndoTuple, CommutingPair, build_ando_tuple_adjoint
from .charfn import AnalyticFn, CircleGrid, delta_eval
from .contraction import classify
from .errors import MismatchWithSolver, NotCnu, ResidualTooLarge
from .matcore import fro, opnorm

__all__ = ["CharTriple", "GridUnitaries", "solve_fundamental", "gs_from_tuple", "char_triple"]


@dataclass
class GridUnitaries:
    """Per-point unitaries w1(zeta_k), w2(zeta_k) on Ran Delta(zeta_k).

    Each matrix is written in the basis ``range_basis(Delta(zeta_k))``.
    """

    grid: CircleGrid
    w1: list
    w2: list

    def product_residual(self) -> float:
        pts = self.grid.points
        res = 0.0
        for k, (a, b) in enumerate(zip(self.w1, self.w2)):
            if a.size:
                res = max(res, opnorm(a @ b - pts[k] * np.eye(a.shape[0])),
                          opnorm(b @ a - pts[k] * np.eye(a.shape[0])))
        return res

    def unitarity_residual(self) -> float:
        res = 0.0
        for w in list(self.w1) + list(self.w2):
            if w.size:
                res = max(res, opnorm(w.conj().T @ w - np.eye(w.shape[0])))
        return res


@dataclass
class CharTriple:
    """``((G1, G2), W, Theta)``; ``W is None`` stands for the vacuous W-part."""

    G1: np.ndarray
    G2: np.ndarray
    theta: AnalyticFn
    W: GridUnitaries | None = None
    residuals: dict = field(default_factory=dict)


def solve_fundamental(pair: CommutingPair):
    """Solve ``T_i* - T_j T* = D_{T*} G_i D_{T*}`` on the defect space of T*.

    Returns
    -------
    G1, G2 : ndarray
        Matrices in the coordinates of ``pair.d_star.space``.
    residual : float
        Largest Frobenius residual of the two equations.
    """
    T1, T2, T = pair.T1, pair.T2, pair.product
    ds = pair.d_star
    B, Dc = ds.space.basis, ds.D_on_space
    out, res = [], 0.0
    for Ti, Tj in ((T1, T2), (T2, T1)):
        R = Ti.conj().T - Tj @ T.conj().T
        if B.shape[1]:
            G = np.linalg.solve(Dc, np.linalg.solve(Dc.T, (B.conj().T @ R @ B).T).T)
        else:
            G = np.zeros((0, 0), dtype=complex)
        res = max(res, fro(ds.D @ B @ G @ B.conj().T @ ds.D - R))
        out.append(G)
    if res > pair.tol.residual_tol:
        raise ResidualTooLarge(f"fundamental equation residual {res:.3e}")
    return out[0], out[1], res


def gs_from_tuple(pair: CommutingPair, tuple_adj: AndoTuple | None = None, check: bool = True):
    """``G1 = L* P^perp U L`` and ``G2 = L* U* P L`` from the Andô tuple of (T1*, T2*)."""
    t = tuple_adj if tuple_adj is not None else build_ando_tuple_adjoint(pair)
    L, U, P, Pp = t.Lambda, t.U, t.P, t.P_perp
    G1 = L.conj().T @ Pp @ U @ L
    G2 = L.conj().T @ U.conj().T @ P @ L
    if check:
        S1, S2, _ = solve_fundamental(pair)
        err = max(fro(G1 - S1), fro(G2 - S2))
        if err > pair.tol.residual_tol:
            raise MismatchWithSolver(f"tuple formula differs from solver by {err:.3e}")
    return G1, G2


def char_triple(pair: CommutingPair, grid: CircleGrid | None = None) -> CharTriple:
    """Characteristic triple of a pair whose product is c.n.u.

    For matrices the W-part is always vacuous; the certificate
    ``max_k ||Delta(zeta_k)||`` is stored in ``residuals["delta_max"]``.
    """
    grid = grid or CircleGrid()
    tol = pair.tol
    cls = classify(pair.product, tol)
    if not cls.cnu:
        raise NotCnu("the product T1 T2 has a unitary part")
    G1s, G2s, res = solve_fundamental(pair)
    G1, G2 = gs_from_tuple(pair, check=False)
    agree = max(fro(G1 - G1s), fro(G2 - G2s))
    if agree > tol.residual_tol:
        raise MismatchWithSolver(f"tuple formula differs from solver by {agree:.3e}")
    theta = AnalyticFn.from_contraction(pair.product, tol)
    dmax = max(opnorm(delta_eval(theta(z), tol)) for z in grid.points)
    return CharTriple(G1=G1, G2=G2, theta=theta, W=None,
                      residuals={"solver": res, "tuple_vs_solver": agree, "delta_max": dmax,
                                 "pure": cls.pure})
