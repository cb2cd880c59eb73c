"""Truncated isometric lifts of a contraction and of a commuting pair.

Layouts (level-major, ``N`` levels of the fiber F, the overflow level dropped):

* Schaffer:  H (+) C^N (x) F, with Pi h = (h, 0).
* Douglas:   C^N (x) F_* (+) Ran Q, with Pi h = (Lambda_* D_{T*} T*^n h)_n (+) Q h.

Every identity that involves the shift holds exactly on columns that live
below the last level; `verify_lift` reports interior and boundary separately.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .ando import AndoTuple, CommutingPair, build_ando_tuple, build_ando_tuple_adjoint
from .contraction import check_contraction, defect, strong_limit_Q
from .errors import DimensionMismatch, NotCnu
from .matcore import (DEFAULT_TOL, Tolerances, check_projection, check_unitary, opnorm,
                      range_basis)

__all__ = ["TruncatedLift", "LiftReport", "schaffer_lift", "schaffer_ando_lift", "bcl_pair",
           "douglas_lift", "douglas_ando_lift", "verify_lift", "orbit_gram",
           "compare_minimal_lifts"]


@dataclass
class TruncatedLift:
    """Truncated lift ``(V1, V2)`` with embedding ``Pi``.

    ``top`` is the number of rows before level 0 (n for Schaffer, 0 for
    Douglas); ``tail`` the size of the trailing Ran Q block.  ``product``
    is the reference lift of T = T1 T2 that V1 V2 should reproduce.
    """

    N: int
    F_dim: int
    V1: np.ndarray
    V2: np.ndarray
    Pi: np.ndarray
    layout: str
    top: int = 0
    tail: int = 0
    product: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.V1.shape[0]

    def level_slice(self, k: int) -> slice:
        a = self.top + k * self.F_dim
        return slice(a, a + self.F_dim)

    @property
    def interior(self) -> np.ndarray:
        """Indices of every coordinate outside the last level."""
        last = self.level_slice(self.N - 1)
        idx = np.arange(self.dim)
        return idx[(idx < last.start) | (idx >= last.stop)]

    @property
    def boundary(self) -> np.ndarray:
        return np.arange(self.dim)[self.level_slice(self.N - 1)]


@dataclass
class LiftReport:
    commutator_norm: float
    product_defect: float
    isometry_defect_interior: float
    isometry_defect_boundary: float
    dilation_residuals: dict
    intertwining_interior: dict
    intertwining_full: dict
    pi_isometry_defect: float
    tail_law_residual: float | None = None

    @property
    def max_dilation(self) -> float:
        return max(self.dilation_residuals.values()) if self.dilation_residuals else 0.0


def _shift(N: int) -> np.ndarray:
    return np.eye(N, k=-1)


def _level0(N: int, X: np.ndarray) -> np.ndarray:
    """Embed a block into level 0 of C^N (x) F."""
    out = np.zeros((N * X.shape[0], X.shape[1]), dtype=complex)
    out[:X.shape[0]] = X
    return out


def schaffer_lift(T, N: int, tol: Tolerances = DEFAULT_TOL) -> TruncatedLift:
    """``V_S = [[T, 0], [D_T, S]]`` on H (+) C^N (x) D_T; second operator is I."""
    T = check_contraction(T, tol)
    if N < 1:
        raise DimensionMismatch("N must be positive")
    n = T.shape[0]
    d = defect(T, tol)
    k = d.space.dim
    V = np.block([[T, np.zeros((n, N * k))],
                  [_level0(N, d.coords), np.kron(_shift(N), np.eye(k))]])
    Pi = np.vstack([np.eye(n), np.zeros((N * k, n))])
    return TruncatedLift(N=N, F_dim=k, V1=V, V2=np.eye(V.shape[0], dtype=complex), Pi=Pi,
                         layout="schaffer", top=n, product=V)


def bcl_pair(F_dim: int, P, U, N: int, tol: Tolerances = DEFAULT_TOL):
    """``(I (x) P^perp U + S (x) P U,  I (x) U* P + S (x) U* P^perp)`` on C^N (x) C^F."""
    if N < 2:
        raise DimensionMismatch("N must be at least 2")
    P = check_projection(P, tol)
    U = check_unitary(U, tol)
    if P.shape != (F_dim, F_dim) or U.shape != (F_dim, F_dim):
        raise DimensionMismatch(f"P and U must be {F_dim} x {F_dim}")
    I, S = np.eye(N), _shift(N)
    Pp = np.eye(F_dim) - P
    B1 = np.kron(I, Pp @ U) + np.kron(S, P @ U)
    B2 = np.kron(I, U.conj().T @ P) + np.kron(S, U.conj().T @ Pp)
    return B1, B2


def schaffer_ando_lift(pair: CommutingPair, tup: AndoTuple | None = None,
                       N: int = 16) -> TruncatedLift:
    """Schaffer-form Ando lift with the BCL tail on the fiber of `tup`."""
    if N < 2:
        raise DimensionMismatch("N must be at least 2")
    t = tup if tup is not None else build_ando_tuple(pair)
    n, F = pair.n, t.F_dim
    # BCL checks are skipped here so a corrupted tuple still assembles
    I, S = np.eye(N), _shift(N)
    P, U, Pp = t.P, t.U, t.P_perp
    Ua = U.conj().T
    B1 = np.kron(I, Pp @ U) + np.kron(S, P @ U)
    B2 = np.kron(I, Ua @ P) + np.kron(S, Ua @ Pp)
    LD = t.Lambda @ pair.d.coords
    Z = np.zeros((n, N * F))
    V1 = np.block([[pair.T1, Z], [_level0(N, P @ U @ LD), B1]])
    V2 = np.block([[pair.T2, Z], [_level0(N, Ua @ Pp @ LD), B2]])
    Vt = np.block([[pair.product, Z], [_level0(N, LD), np.kron(S, np.eye(F))]])
    Pi = np.vstack([np.eye(n), np.zeros((N * F, n))])
    return TruncatedLift(N=N, F_dim=F, V1=V1, V2=V2, Pi=Pi, layout="schaffer", top=n,
                         product=Vt, meta={"tuple": t})


def _orbit_embedding(L: np.ndarray, Dc: np.ndarray, Ts: np.ndarray, N: int) -> np.ndarray:
    """Stack ``L Dc Ts^k`` for k = 0..N-1."""
    rows, X = [], np.eye(Ts.shape[0], dtype=complex)
    for _ in range(N):
        rows.append(L @ Dc @ X)
        X = Ts @ X
    return np.vstack(rows)


def _q_block(T_list, tol: Tolerances):
    """Q-block of the Douglas embedding and the unitaries X_i on Ran Q."""
    T = T_list[0] @ T_list[1] if len(T_list) == 2 else T_list[0]
    Q = strong_limit_Q(T, tol)
    B = range_basis(Q, tol, scale=1.0).basis
    if B.shape[1] == 0:
        return np.zeros((0, T.shape[0])), [np.zeros((0, 0))] * len(T_list)
    Qc = B.conj().T @ Q @ B
    Xs = []
    for Ti in T_list:
        Xstar = B.conj().T @ Q @ Ti.conj().T @ B @ np.linalg.inv(Qc)
        Xs.append(Xstar.conj().T)
    return B.conj().T @ Q, Xs


def douglas_lift(T, N: int, tol: Tolerances = DEFAULT_TOL,
                 allow_unitary_part: bool = False) -> TruncatedLift:
    """Minimal Douglas lift ``S (x) I`` on C^N (x) D_{T*} (+) Ran Q."""
    T = check_contraction(T, tol)
    ds = defect(T.conj().T, tol)
    k = ds.space.dim
    Qh, (X,) = _q_block([T], tol)
    if Qh.shape[0] and not allow_unitary_part:
        raise NotCnu("T has a unitary part; pass allow_unitary_part=True")
    Pi = np.vstack([_orbit_embedding(np.eye(k), ds.coords, T.conj().T, N), Qh])
    V = sla.block_diag(np.kron(_shift(N), np.eye(k)), X).astype(complex)
    return TruncatedLift(N=N, F_dim=k, V1=V, V2=np.eye(V.shape[0], dtype=complex), Pi=Pi,
                         layout="douglas", tail=Qh.shape[0], product=V, meta={"Q": Qh})


def douglas_ando_lift(pair: CommutingPair, tup_adj: AndoTuple | None = None, N: int = 16,
                      allow_unitary_part: bool = False) -> TruncatedLift:
    """Douglas-form Ando lift built from the Ando tuple of (T1*, T2*).

    ``V1 = I (x) U* P^perp + S (x) U* P`` and ``V2 = I (x) P U + S (x) P^perp U``
    on the levels, direct sum the unitaries X_1, X_2 on Ran Q.  For a
    c.n.u. product Ran Q = 0; otherwise `allow_unitary_part` is required.
    """
    if N < 2:
        raise DimensionMismatch("N must be at least 2")
    tol = pair.tol
    t = tup_adj if tup_adj is not None else build_ando_tuple_adjoint(pair)
    F = t.F_dim
    Qh, (X1, X2) = _q_block([pair.T1, pair.T2], tol)
    if Qh.shape[0] and not allow_unitary_part:
        raise NotCnu("the product T1 T2 has a unitary part")
    I, S = np.eye(N), _shift(N)
    P, U, Pp = t.P, t.U, t.P_perp
    Ua = U.conj().T
    V1 = sla.block_diag(np.kron(I, Ua @ Pp) + np.kron(S, Ua @ P), X1).astype(complex)
    V2 = sla.block_diag(np.kron(I, P @ U) + np.kron(S, Pp @ U), X2).astype(complex)
    Pi = np.vstack([_orbit_embedding(t.Lambda, pair.d_star.coords, pair.product.conj().T, N), Qh])
    Vd = sla.block_diag(np.kron(S, np.eye(F)), X1 @ X2).astype(complex)
    return TruncatedLift(N=N, F_dim=F, V1=V1, V2=V2, Pi=Pi, layout="douglas", tail=Qh.shape[0],
                         product=Vd, meta={"tuple": t, "Q": Qh})


def verify_lift(lift: TruncatedLift, pair: CommutingPair | None = None, depth: int = 4,
                T=None) -> LiftReport:
    """Residual report for a truncated lift.

    Pass `pair` for two-operator lifts or `T` for single-operator ones.
    Dilation residuals are ``||Pi* V1^m V2^n Pi - T1^m T2^n||`` for m + n <= depth.
    """
    if pair is not None:
        T1, T2 = pair.T1, pair.T2
    else:
        T1, T2 = np.asarray(T, dtype=complex), np.eye(np.shape(T)[0], dtype=complex)
    V1, V2, Pi = lift.V1, lift.V2, lift.Pi
    inner, bnd = lift.interior, lift.boundary
    comm = opnorm(V1 @ V2 - V2 @ V1)
    prod = opnorm((V1 @ V2 - lift.product)[:, inner]) if lift.product is not None else 0.0
    iso_in = iso_bd = 0.0
    for V in (V1, V2):
        E = V.conj().T @ V - np.eye(V.shape[0])
        iso_in = max(iso_in, opnorm(E[:, inner]))
        iso_bd = max(iso_bd, opnorm(E[:, bnd]))
    tw_in, tw_full = {}, {}
    for name, V, Ti in (("1", V1, T1), ("2", V2, T2)):
        R = V.conj().T @ Pi - Pi @ Ti.conj().T
        tw_in[name] = opnorm(R[inner])
        tw_full[name] = opnorm(R)
    dil = {}
    pw1 = [np.eye(V1.shape[0], dtype=complex)]
    pw2 = [np.eye(V2.shape[0], dtype=complex)]
    t1 = [np.eye(T1.shape[0], dtype=complex)]
    t2 = [np.eye(T2.shape[0], dtype=complex)]
    for _ in range(depth):
        pw1.append(V1 @ pw1[-1])
        pw2.append(V2 @ pw2[-1])
        t1.append(T1 @ t1[-1])
        t2.append(T2 @ t2[-1])
    for m in range(depth + 1):
        for n in range(depth + 1 - m):
            dil[(m, n)] = opnorm(Pi.conj().T @ pw1[m] @ pw2[n] @ Pi - t1[m] @ t2[n])
    G = Pi.conj().T @ Pi
    pi_def = opnorm(G - np.eye(G.shape[0]))
    tail = None
    if lift.layout == "douglas":
        Tp = np.linalg.matrix_power(T1 @ T2, lift.N)
        Qh = lift.meta.get("Q", np.zeros((0, G.shape[0])))
        tail = opnorm((np.eye(G.shape[0]) - G) - (Tp @ Tp.conj().T - Qh.conj().T @ Qh))
    return LiftReport(commutator_norm=comm, product_defect=prod, isometry_defect_interior=iso_in,
                      isometry_defect_boundary=iso_bd, dilation_residuals=dil,
                      intertwining_interior=tw_in, intertwining_full=tw_full,
                      pi_isometry_defect=pi_def, tail_law_residual=tail)


def orbit_gram(V: np.ndarray, Pi: np.ndarray, depth: int) -> np.ndarray:
    """Gram matrix of the vectors ``V^k Pi e_i`` for k = 0..depth."""
    cols, X = [], Pi
    for _ in range(depth + 1):
        cols.append(X)
        X = V @ X
    K = np.hstack(cols)
    return K.conj().T @ K


def compare_minimal_lifts(T, N: int, depth: int | None = None,
                          tol: Tolerances = DEFAULT_TOL) -> float:
    """Gram mismatch between the orbits of the Schaffer and Douglas lifts of T.

    Equal Gram matrices mean ``sum V_S^k Pi_S h_k -> sum V_D^k Pi_D h_k``
    is a well-defined isometry between the orbit spans.
    """
    depth = N // 2 if depth is None else depth
    S = schaffer_lift(T, N, tol)
    D = douglas_lift(T, N, tol)
    return opnorm(orbit_gram(S.V1, S.Pi, depth) - orbit_gram(D.V1, D.Pi, depth))
