"""Single-contraction calculus: defect operators, the limit Q, c.n.u. splitting."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import NoConvergence, NotContraction, DimensionMismatch
from .matcore import (DEFAULT_TOL, Subspace, Tolerances, as_matrix, fro, opnorm,
                      orth_complement, range_basis, sqrt_psd)

__all__ = ["DefectData", "CnuSplit", "Classification", "check_contraction", "defect",
           "strong_limit_Q", "cnu_split", "is_pure", "classify", "spectral_radius"]

MAX_DOUBLINGS = 64


@dataclass
class DefectData:
    """Defect operator ``D = (I - T*T)^{1/2}`` with its range.

    ``D_on_space`` is ``basis* D basis``, invertible on the defect space.
    """

    D: np.ndarray
    space: Subspace
    D_on_space: np.ndarray

    @property
    def coords(self) -> np.ndarray:
        """The map h -> D h written in defect-space coordinates (k x n)."""
        return self.space.basis.conj().T @ self.D


@dataclass
class CnuSplit:
    unitary_part: Subspace
    cnu_part: Subspace
    Q: np.ndarray
    reducing_residual: float


@dataclass
class Classification:
    """Three independent verdicts which must agree for matrices."""

    spectral_radius: float
    rho_below_one: bool
    pure: bool
    cnu: bool

    @property
    def consistent(self) -> bool:
        return self.rho_below_one == self.pure == self.cnu


def spectral_radius(T) -> float:
    T = as_matrix(T)
    if T.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(T))))


def check_contraction(T, tol: Tolerances = DEFAULT_TOL, name="T") -> np.ndarray:
    T = as_matrix(T, name)
    if opnorm(T) > 1.0 + tol.residual_tol:
        raise NotContraction(f"{name} has norm {opnorm(T):.6g} > 1")
    return T


def defect(T, tol: Tolerances = DEFAULT_TOL) -> DefectData:
    """Defect operator and defect space of a contraction.

    Examples
    --------
    >>> d = defect(np.array([[0, 0], [1, 0]]))
    >>> np.round(d.D.real, 12)
    array([[0., 0.],
           [0., 1.]])
    >>> d.space.dim
    1
    """
    T = check_contraction(T, tol)
    n = T.shape[1]
    D = sqrt_psd(np.eye(n) - T.conj().T @ T, tol)
    space = range_basis(D, tol, scale=1.0)
    B = space.basis
    return DefectData(D=D, space=space, D_on_space=B.conj().T @ D @ B)


def strong_limit_Q(T, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``Q = (lim T^n T*^n)^{1/2}`` by repeated squaring of T."""
    T = check_contraction(T, tol)
    if T.shape[0] != T.shape[1]:
        raise DimensionMismatch("T must be square")
    M = T.copy()
    A = M @ M.conj().T
    for _ in range(MAX_DOUBLINGS):
        M = M @ M
        A_next = M @ M.conj().T
        if fro(A_next - A) <= tol.iter_tol:
            return sqrt_psd(A_next, tol)
        A = A_next
    raise NoConvergence(f"no convergence after {MAX_DOUBLINGS} doublings")


def cnu_split(T, tol: Tolerances = DEFAULT_TOL) -> CnuSplit:
    """Split off the unitary part via Schur vectors of unimodular eigenvalues.

    The reducing property is checked, not assumed; ``reducing_residual``
    reports ``||(I-P) T P|| + ||P T (I-P)||`` plus the unitarity defect of
    T on the unitary part.
    """
    T = check_contraction(T, tol)
    n = T.shape[0]
    thresh = 1.0 - tol.rank_tol
    _, Z, sdim = sla.schur(T, output="complex", sort=lambda x: abs(x) >= thresh)
    unitary = Subspace(Z[:, :sdim]) if sdim else Subspace.zero(n)
    cnu = orth_complement(unitary) if sdim else Subspace.full(n)
    P = unitary.projection
    R = np.eye(n) - P
    res = fro(R @ T @ P) + fro(P @ T @ R)
    if sdim:
        Tu = unitary.basis.conj().T @ T @ unitary.basis
        res += fro(Tu.conj().T @ Tu - np.eye(sdim))
    return CnuSplit(unitary_part=unitary, cnu_part=cnu, Q=strong_limit_Q(T, tol),
                    reducing_residual=res)


def is_pure(T, tol: Tolerances = DEFAULT_TOL) -> bool:
    return opnorm(strong_limit_Q(T, tol)) <= tol.residual_tol


def classify(T, tol: Tolerances = DEFAULT_TOL) -> Classification:
    rho = spectral_radius(T)
    split = cnu_split(T, tol)
    return Classification(spectral_radius=rho,
                          rho_below_one=rho < 1.0 - tol.rank_tol,
                          pure=opnorm(split.Q) <= tol.residual_tol,
                          cnu=split.unitary_part.dim == 0)
