"""Andô tuples and regularity of the two factorizations of T = T1 T2 = T2 T1.

Coordinates: every defect space is represented by the deterministic basis
returned by `matcore.range_basis`; the fiber F is the direct sum of the
defect spaces of T1 and T2 in that order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contraction import DefectData, check_contraction, defect
from .errors import InconsistentSpan, NotCommuting, DimensionMismatch
from .matcore import (DEFAULT_TOL, Subspace, Tolerances, as_matrix, complete_to_unitary,
                      fro, intersection_dim, range_basis, solve_on_span, sqrt_psd)

__all__ = ["CommutingPair", "AndoTuple", "RegularityReport", "lambda_map", "u0_map",
           "regularity", "build_ando_tuple", "build_ando_tuple_adjoint",
           "SectionRegularity", "hardy_section_regularity"]


class CommutingPair:
    """A commuting pair of contraction matrices together with its defect data."""

    def __init__(self, T1, T2, tol: Tolerances = DEFAULT_TOL):
        T1 = check_contraction(T1, tol, "T1")
        T2 = check_contraction(T2, tol, "T2")
        if T1.shape != T2.shape or T1.shape[0] != T1.shape[1]:
            raise DimensionMismatch("T1 and T2 must be square of equal size")
        self.commutator = fro(T1 @ T2 - T2 @ T1)
        if self.commutator > tol.residual_tol:
            raise NotCommuting(f"||T1 T2 - T2 T1||_F = {self.commutator:.3e}")
        self.T1, self.T2, self.tol = T1, T2, tol
        self.product = T1 @ T2
        self._defects = {}

    @property
    def n(self) -> int:
        return self.T1.shape[0]

    def _defect(self, key, M) -> DefectData:
        if key not in self._defects:
            self._defects[key] = defect(M, self.tol)
        return self._defects[key]

    @property
    def d1(self) -> DefectData:
        return self._defect("1", self.T1)

    @property
    def d2(self) -> DefectData:
        return self._defect("2", self.T2)

    @property
    def d(self) -> DefectData:
        return self._defect("T", self.product)

    @property
    def d_star(self) -> DefectData:
        return self._defect("T*", self.product.conj().T)

    def adjoint(self) -> "CommutingPair":
        return CommutingPair(self.T1.conj().T, self.T2.conj().T, self.tol)

    def swapped(self) -> "CommutingPair":
        return CommutingPair(self.T2, self.T1, self.tol)

    def __repr__(self):
        return f"CommutingPair(n={self.n}, commutator={self.commutator:.2e})"


@dataclass
class AndoTuple:
    """Fiber dimension, isometry Lambda, projection P and unitary U."""

    F_dim: int
    Lambda: np.ndarray
    P: np.ndarray
    U: np.ndarray
    dim_D1: int
    dom: Subspace
    ran: Subspace
    U0: np.ndarray

    @property
    def P_perp(self) -> np.ndarray:
        return np.eye(self.F_dim) - self.P


@dataclass
class RegularityReport:
    regular_12: bool
    regular_21: bool
    dim_DT: int
    dim_dom_U0: int
    dim_ran_U0: int
    dim_ambient: int

    @property
    def codim_dom(self) -> int:
        return self.dim_ambient - self.dim_dom_U0

    @property
    def codim_ran(self) -> int:
        return self.dim_ambient - self.dim_ran_U0


def _stack(pair: CommutingPair, top, bottom) -> np.ndarray:
    """Spanning-set images written in F coordinates: [B1* top ; B2* bottom]."""
    B1 = pair.d1.space.basis
    B2 = pair.d2.space.basis
    return np.vstack([B1.conj().T @ top, B2.conj().T @ bottom])


def lambda_map(pair: CommutingPair) -> np.ndarray:
    """Matrix of ``D_T h -> D_{T1} T2 h (+) D_{T2} h`` in defect coordinates.

    Raises
    ------
    InconsistentSpan
        If the map is not well defined or not isometric on the spanning set.
    """
    tol = pair.tol
    X = pair.d.coords
    Y = _stack(pair, pair.d1.D @ pair.T2, pair.d2.D)
    L, res = solve_on_span(X, Y)
    iso = fro(L.conj().T @ L - np.eye(L.shape[1]))
    if res > tol.residual_tol or iso > tol.residual_tol:
        raise InconsistentSpan(f"Lambda residual {res:.3e}, isometry defect {iso:.3e}")
    return L


def u0_map(pair: CommutingPair):
    """Domain, range and matrix of the partial isometry U0 inside F.

    ``U0 : D_{T1} T2 h (+) D_{T2} h  ->  D_{T1} h (+) D_{T2} T1 h``.
    The returned matrix maps dom-coordinates to ran-coordinates.
    """
    tol = pair.tol
    Yd = _stack(pair, pair.d1.D @ pair.T2, pair.d2.D)
    Yr = _stack(pair, pair.d1.D, pair.d2.D @ pair.T1)
    dom = range_basis(Yd, tol, scale=1.0)
    ran = range_basis(Yr, tol, scale=1.0)
    V0, res = solve_on_span(dom.basis.conj().T @ Yd, ran.basis.conj().T @ Yr)
    iso = fro(V0.conj().T @ V0 - np.eye(dom.dim)) if dom.dim == ran.dim else np.inf
    if res > tol.residual_tol or iso > tol.residual_tol:
        raise InconsistentSpan(f"U0 residual {res:.3e}, isometry defect {iso:.3e}")
    return dom, ran, V0


def regularity(pair: CommutingPair) -> RegularityReport:
    """Regularity of T1 T2 (dom of U0 is all of F) and of T2 T1 (ran is)."""
    dom, ran, _ = u0_map(pair)
    F = pair.d1.space.dim + pair.d2.space.dim
    return RegularityReport(regular_12=dom.dim == F, regular_21=ran.dim == F,
                            dim_DT=pair.d.space.dim, dim_dom_U0=dom.dim,
                            dim_ran_U0=ran.dim, dim_ambient=F)


def build_ando_tuple(pair: CommutingPair, complement=None) -> AndoTuple:
    """Andô tuple with F = D_{T1} (+) D_{T2} and the deterministic completion of U0.

    `complement` is forwarded to `matcore.complete_to_unitary` to pick a
    different unitary extension.
    """
    L = lambda_map(pair)
    dom, ran, V0 = u0_map(pair)
    k1 = pair.d1.space.dim
    F = k1 + pair.d2.space.dim
    U = complete_to_unitary(dom, ran, V0, complement=complement, tol=pair.tol)
    P = np.zeros((F, F), dtype=complex)
    P[:k1, :k1] = np.eye(k1)
    return AndoTuple(F_dim=F, Lambda=L, P=P, U=U, dim_D1=k1, dom=dom, ran=ran, U0=V0)


def build_ando_tuple_adjoint(pair: CommutingPair, complement=None) -> AndoTuple:
    """Andô tuple of (T1*, T2*); its Lambda acts on D_{T*}-coordinates."""
    return build_ando_tuple(pair.adjoint(), complement=complement)


@dataclass
class SectionRegularity:
    """Codimensions of Ran Lambda and Ran Lambda_r inside a finite window."""

    N: int
    window_dim: int
    codim_12: int
    codim_21: int
    lambda_isometry_defect: float
    lambda_r_isometry_defect: float

    @property
    def regular_12(self) -> bool:
        return self.codim_12 == 0

    @property
    def regular_21(self) -> bool:
        return self.codim_21 == 0


def _shift_section(N: int) -> np.ndarray:
    """Exact section of the Hardy shift: polynomials of degree < N into degree < N+1."""
    S = np.zeros((N + 1, N), dtype=complex)
    S[np.arange(1, N + 1), np.arange(N)] = 1.0
    return S


def hardy_section_regularity(N: int, tol: Tolerances = DEFAULT_TOL) -> SectionRegularity:
    """Regularity of T1 = [[0,0],[I,0]], T2 = T_z (+) T_z on H^2 (+) H^2, seen through a window.

    Inputs are polynomials of degree < N and every operator is applied
    exactly, so outputs may reach degree N.  Exactness keeps the shift
    isometric, hence D_{T2} = 0 as on the full Hardy space.  Both ranges are
    compared with the degree < N part of D_{T1} (+) D_{T2}:
    ``codim = dim(window) - dim(Ran ∩ window)``.
    """
    S = _shift_section(N)
    E = np.vstack([np.eye(N), np.zeros((1, N))])
    O = np.zeros((N + 1, N))
    On = np.zeros((N, N))
    E2 = np.block([[E, O], [O, E]])                        # input window -> output window
    T2 = np.block([[S, O], [O, S]])
    T = np.block([[O, O], [S, O]])
    T1_in = np.block([[On, On], [np.eye(N), On]])
    D1_out = np.diag(np.r_[np.zeros(N + 1), np.ones(N + 1)])
    D_T = sqrt_psd(np.eye(2 * N) - T.conj().T @ T, tol)
    D_T2 = sqrt_psd(np.eye(2 * N) - T2.conj().T @ T2, tol)

    lam_img = np.vstack([D1_out @ T2, E2 @ D_T2])
    lamr_img = np.vstack([D1_out @ E2, E2 @ D_T2 @ T1_in])
    X = range_basis(D_T, tol, scale=1.0).basis.conj().T @ D_T
    L, _ = solve_on_span(X, lam_img)
    Lr, _ = solve_on_span(X, lamr_img)
    window = range_basis(np.vstack([D1_out @ E2, np.zeros_like(E2)]), tol, scale=1.0)
    ran12 = range_basis(lam_img, tol, scale=1.0)
    ran21 = range_basis(lamr_img, tol, scale=1.0)
    return SectionRegularity(
        N=N, window_dim=window.dim,
        codim_12=window.dim - intersection_dim(ran12, window, tol),
        codim_21=window.dim - intersection_dim(ran21, window, tol),
        lambda_isometry_defect=fro(L.conj().T @ L - np.eye(L.shape[1])),
        lambda_r_isometry_defect=fro(Lr.conj().T @ Lr - np.eye(Lr.shape[1])))
