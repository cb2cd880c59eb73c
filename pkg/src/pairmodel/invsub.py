"""Jointly invariant subspaces of model pairs coming from factorizations of Theta.

Pencils for the factor are taken in the form ``G_i'* + z G_j'``, matching
the pencils of the model pair itself, so the restricted pair again has
fundamental operators ``(G_1', G_2')``.
"""
from __future__ import annotations

import numpy as np

from .admiss import ModelSpace, _toeplitz_section
from .charfn import AnalyticFn, CircleGrid, delta_eval, probe_points, z_operator
from .errors import FactorizationMismatch, IrregularFactorization, NotInner, UnsupportedTheta
from .fundamental import GridUnitaries
from .matcore import DEFAULT_TOL, Subspace, Tolerances, as_matrix, fro, range_basis

__all__ = ["divide_inner", "inner_subspace", "verify_joint_invariance", "solve_Gprime",
           "extracond_residual", "verify_extracond_general", "is_inner"]

_ZERO_MATCH = 1e-12


def is_inner(theta, grid: CircleGrid | None = None, tol: Tolerances = DEFAULT_TOL) -> bool:
    grid = grid or CircleGrid()
    for z in grid.points:
        th = theta(z)
        if fro(th.conj().T @ th - np.eye(th.shape[1])) > tol.residual_tol:
            return False
    return True


def _as_blaschke(f: AnalyticFn):
    """(zeros, unimodular) of a scalar finite Blaschke product, or None."""
    if f.in_dim != 1 or f.out_dim != 1:
        return None
    if f.zeros is not None:
        return list(f.zeros), f.unimodular
    if f.degree == 0 and abs(abs(f.D[0, 0]) - 1) < 1e-14:
        return [], complex(f.D[0, 0])
    return None


def _multiset_minus(a, b):
    """Zeros of a / b as a list, or None when b is not a sub-multiset of a."""
    rest = list(a)
    for z in b:
        for k, w in enumerate(rest):
            if abs(w - z) < _ZERO_MATCH:
                del rest[k]
                break
        else:
            return None
    return rest


def divide_inner(theta: AnalyticFn, theta2pp: AnalyticFn) -> AnalyticFn:
    """``Theta' `` with ``Theta = Theta'' Theta'`` for the supported inner families.

    Scalar Blaschke products are divided on zero multisets; direct sums are
    divided block by block; a constant unitary divisor is inverted.

    Raises
    ------
    FactorizationMismatch
        If the divisor's zeros are not contained in those of Theta.
    UnsupportedTheta
        For shapes outside these families.
    """
    a, b = _as_blaschke(theta), _as_blaschke(theta2pp)
    if a is not None and b is not None:
        rest = _multiset_minus(a[0], b[0])
        if rest is None:
            raise FactorizationMismatch("divisor zeros are not zeros of Theta")
        return AnalyticFn.blaschke(rest, a[1] / b[1])
    if theta2pp.degree == 0:
        U = theta2pp.D
        if fro(U.conj().T @ U - np.eye(U.shape[1])) > 1e-12 or U.shape[0] != U.shape[1]:
            raise UnsupportedTheta("constant divisor must be unitary")
        return theta.conjugated(U.conj().T, np.eye(theta.in_dim))
    if theta.blocks and theta2pp.blocks and len(theta.blocks) == len(theta2pp.blocks):
        return AnalyticFn.diag(*[divide_inner(x, y) for x, y in zip(theta.blocks, theta2pp.blocks)])
    raise UnsupportedTheta("cannot divide these functions; supply theta_prime")


def _check_factorization(theta, theta2pp, theta_prime, tol: Tolerances):
    mis = max(fro(theta(z) - theta2pp(z) @ theta_prime(z)) for z in probe_points())
    if mis > tol.residual_tol:
        raise FactorizationMismatch(f"||Theta - Theta'' Theta'|| = {mis:.3e} on probe points")


def inner_subspace(theta2pp: AnalyticFn, theta: AnalyticFn, space: ModelSpace,
                   theta_prime: AnalyticFn | None = None,
                   tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """``{Theta'' f} minus {Theta h}`` in the coordinates of ``space.H_basis``.

    Raises
    ------
    NotInner
        If Theta or Theta'' is not inner on the grid.
    FactorizationMismatch
        If ``Theta = Theta'' Theta'`` fails on the probe points.
    """
    if not is_inner(theta, space.grid, tol) or not is_inner(theta2pp, space.grid, tol):
        raise NotInner("inner_subspace needs inner Theta and Theta''")
    tp = theta_prime if theta_prime is not None else divide_inner(theta, theta2pp)
    _check_factorization(theta, theta2pp, tp, tol)
    gens = _toeplitz_section(theta2pp, space.N)
    H = space.H_basis.basis[:space.h2_dim]
    return range_basis(H.conj().T @ gens, tol, scale=1.0)


def verify_joint_invariance(Hprime: Subspace, pair, tol: Tolerances = DEFAULT_TOL) -> dict:
    """``||(I - P) T_i P||`` for both operators of the model pair; ``ok`` when both are small."""
    P = Hprime.projection
    R = np.eye(P.shape[0]) - P
    out = {str(i + 1): fro(R @ as_matrix(T) @ P) for i, T in enumerate(pair[:2])}
    out["ok"] = all(v <= tol.residual_tol for v in out.values())
    return out


def extracond_residual(G1, G2, theta2pp: AnalyticFn, G1p, G2p, K: int | None = None) -> float:
    """Coefficient mismatch of ``(G_i* + z G_j) Theta'' = Theta'' (G_i'* + z G_j')``."""
    G1, G2, G1p, G2p = (as_matrix(x) for x in (G1, G2, G1p, G2p))
    K = K if K is not None else theta2pp.guard() + 1
    t = theta2pp.taylor(K + 1)
    res = 0.0
    for A0, A1, B0, B1 in ((G1.conj().T, G2, G1p.conj().T, G2p),
                           (G2.conj().T, G1, G2p.conj().T, G1p)):
        for k in range(K + 1):
            lhs = A0 @ t[k] + (A1 @ t[k - 1] if k else 0)
            rhs = t[k] @ B0 + (t[k - 1] @ B1 if k else 0)
            res += fro(lhs - rhs) ** 2
    return float(np.sqrt(res))


def solve_Gprime(G1, G2, theta2pp: AnalyticFn, K: int | None = None):
    """Least-squares ``(G1', G2')`` for the pencil intertwining through Theta''.

    The unknowns enter through ``G'`` and ``G'*``, so the system is real
    linear; it is assembled column by column on the real coordinates
    ``(Re G1', Im G1', Re G2', Im G2')`` over the first ``K + 1`` Taylor
    levels (by default every level where Theta'' is above roundoff).
    """
    q = theta2pp.in_dim
    nvar = 4 * q * q

    def unpack(v):
        X = (v[:q * q] + 1j * v[q * q:2 * q * q]).reshape(q, q)
        Y = (v[2 * q * q:3 * q * q] + 1j * v[3 * q * q:]).reshape(q, q)
        return X, Y

    G1, G2 = as_matrix(G1), as_matrix(G2)
    K = K if K is not None else theta2pp.guard() + 1
    t = theta2pp.taylor(K + 1)

    def residual_vec(v):
        X, Y = unpack(v)
        parts = []
        for A0, A1, B0, B1 in ((G1.conj().T, G2, X.conj().T, Y), (G2.conj().T, G1, Y.conj().T, X)):
            for k in range(K + 1):
                lhs = A0 @ t[k] + (A1 @ t[k - 1] if k else 0)
                rhs = t[k] @ B0 + (t[k - 1] @ B1 if k else 0)
                parts.append((rhs - lhs).ravel())
        r = np.concatenate(parts)
        return np.concatenate([r.real, r.imag])

    r0 = residual_vec(np.zeros(nvar))
    A = np.column_stack([residual_vec(e) - r0 for e in np.eye(nvar)])
    b = -r0
    v, *_ = np.linalg.lstsq(A, b, rcond=None)
    X, Y = unpack(v)
    return X, Y, extracond_residual(G1, G2, theta2pp, X, Y, K)


def verify_extracond_general(G1, G2, W: GridUnitaries | None, theta: AnalyticFn,
                             theta2pp: AnalyticFn, theta_prime: AnalyticFn, G1p, G2p,
                             Wp: GridUnitaries | None, space: ModelSpace | CircleGrid | None = None,
                             tol: Tolerances = DEFAULT_TOL) -> dict:
    """Both sides of the block intertwining identity on H^2 and, pointwise, on the Delta-part.

    At each grid point the Delta-part identity is checked as a matrix identity
    on ``F (+) Ran Delta_{Theta'}``::

        W_i Z^{-1} (Delta'' x (+) g)  =  Z^{-1} (Delta'' phi_i'(zeta) x (+) W_i' g)

    with ``phi_i' = G_i'* + z G_j'``.  Returns the H^2 residual, the largest
    pointwise residual, the per-point residuals and the product residual of
    the primed W.

    Raises
    ------
    IrregularFactorization
        If Z fails to be onto at some grid point.
    """
    grid = space.grid if isinstance(space, ModelSpace) else (space or CircleGrid())
    G1p, G2p = as_matrix(G1p), as_matrix(G2p)
    h2 = extracond_residual(G1, G2, theta2pp, G1p, G2p)
    per_point = np.zeros(grid.M)
    for k, z in enumerate(grid.points):
        zd = z_operator(theta(z), theta2pp(z), theta_prime(z), tol)
        if not zd.onto:
            raise IrregularFactorization(f"Z is not onto at grid point {k}")
        if zd.dim_D == 0:
            continue
        S, S1, S2 = zd.spaces
        t2 = theta2pp(z)
        D2 = S1.basis.conj().T @ delta_eval(t2, tol)              # dim_D1 x dim F
        ZH = zd.Z.conj().T
        r1, r2 = zd.dim_D1, zd.dim_D2
        q = t2.shape[1]
        for Gi, Gj, w, wp in ((G1p, G2p, W.w1 if W else None, Wp.w1 if Wp else None),
                              (G2p, G1p, W.w2 if W else None, Wp.w2 if Wp else None)):
            wk = np.asarray(w[k]).reshape(zd.dim_D, zd.dim_D) if w is not None else np.eye(zd.dim_D)
            wpk = np.asarray(wp[k]).reshape(r2, r2) if wp is not None else np.eye(r2)
            phi = Gi.conj().T + z * Gj
            L = np.zeros((r1 + r2, q + r2), dtype=complex)
            R = np.zeros_like(L)
            L[:r1, :q] = D2
            L[r1:, q:] = np.eye(r2)
            R[:r1, :q] = D2 @ phi
            R[r1:, q:] = wpk
            per_point[k] = max(per_point[k], fro(wk @ ZH @ L - ZH @ R))
    wprod = Wp.product_residual() if Wp is not None else 0.0
    return {"h2": h2, "delta": float(per_point.max()), "per_point": per_point,
            "wp_product": wprod,
            "ok": max(h2, per_point.max(), wprod) <= tol.residual_tol}
