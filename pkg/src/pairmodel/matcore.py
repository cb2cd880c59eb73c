"""Dense complex linear-algebra primitives shared by every other module.

All routines take a :class:`Tolerances` instance; the module-level
``DEFAULT_TOL`` is used when none is given.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import DimensionMismatch, NotHermitian, NotProjection, NotPSD, NotUnitary

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "Subspace",
    "as_matrix",
    "opnorm",
    "fro",
    "sqrt_psd",
    "range_basis",
    "orth_complement",
    "complete_to_unitary",
    "solve_on_span",
    "intersection_dim",
    "check_unitary",
    "check_projection",
]


@dataclass(frozen=True)
class Tolerances:
    """Global tolerance policy.

    Attributes
    ----------
    rank_tol : float
        Relative singular-value cutoff used when computing ranges.
    residual_tol : float
        Pass threshold for verification residuals.
    iter_tol : float
        Stopping threshold for fixed-point iterations.
    """

    rank_tol: float = 1e-10
    residual_tol: float = 1e-9
    iter_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rank_tol", "residual_tol", "iter_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    def replace(self, **kw) -> "Tolerances":
        vals = dict(rank_tol=self.rank_tol, residual_tol=self.residual_tol,
                    iter_tol=self.iter_tol)
        vals.update(kw)
        return Tolerances(**vals)


DEFAULT_TOL = Tolerances()


def as_matrix(A, name="matrix") -> np.ndarray:
    """Return `A` as a finite complex 2-d array."""
    A = np.asarray(A, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-dimensional, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DimensionMismatch(f"{name} has non-finite entries")
    return A


def opnorm(A) -> float:
    """Spectral norm; 0 for empty matrices."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def fro(A) -> float:
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A))


@dataclass
class Subspace:
    """Closed subspace of C^n given by an orthonormal basis (n x k)."""

    basis: np.ndarray
    _proj: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.basis = np.asarray(self.basis, dtype=complex)
        if self.basis.ndim != 2:
            raise DimensionMismatch("basis must be 2-dimensional")

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((n, 0), dtype=complex))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    @property
    def projection(self) -> np.ndarray:
        if self._proj is None:
            self._proj = self.basis @ self.basis.conj().T
        return self._proj

    def orthonormality_defect(self) -> float:
        return fro(self.basis.conj().T @ self.basis - np.eye(self.dim))


def sqrt_psd(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Hermitian positive square root of a Hermitian PSD matrix.

    Eigenvalues within ``rank_tol`` (relative to ``max(1, ||A||)``) of zero
    are set to zero, so roundoff in ``I - T*T`` does not turn into spurious
    ``1e-8``-sized defect directions after the square root.

    Raises
    ------
    NotHermitian
        If ``||A - A*||_F`` exceeds ``residual_tol * (1 + ||A||_F)``.
    NotPSD
        If an eigenvalue lies below ``-rank_tol * max(1, ||A||)``.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatch("sqrt_psd needs a square matrix")
    if A.size == 0:
        return A.copy()
    if fro(A - A.conj().T) > tol.residual_tol * (1.0 + fro(A)):
        raise NotHermitian("matrix is not Hermitian within residual_tol")
    w, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    scale = max(1.0, float(np.max(np.abs(w))))
    floor = tol.rank_tol * scale
    if w[0] < -floor:
        raise NotPSD(f"eigenvalue {w[0]:.3e} below -rank_tol")
    w = np.where(w <= floor, 0.0, w)
    S = (V * np.sqrt(w)) @ V.conj().T
    return 0.5 * (S + S.conj().T)


def _canonical_basis(U: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis for span(U), U with orthonormal columns.

    Columns of the projection UU* are orthonormalized by QR with column
    pivoting (largest column first, ties broken by lowest index), with
    phases fixed so that each basis vector is a positive multiple of the
    projected pivot column.  When the span is the whole space this returns
    the identity, so full-rank defect spaces keep standard coordinates.
    """
    n, k = U.shape
    if k == 0:
        return np.zeros((n, 0), dtype=complex)
    if k == n:
        return np.eye(n, dtype=complex)
    P = U @ U.conj().T
    Q, R, _ = sla.qr(P, pivoting=True, mode="economic")
    d = np.diag(R)[:k]
    ph = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    Q = Q[:, :k] * ph
    # one re-orthonormalization pass inside the span, preserving column order
    Q, R2 = np.linalg.qr(Q)
    d2 = np.diag(R2)
    return Q * np.where(np.abs(d2) > 0, d2 / np.where(np.abs(d2) > 0, np.abs(d2), 1.0), 1.0)


def range_basis(A, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> Subspace:
    """Orthonormal basis of the numerical range of `A`.

    Singular values above ``rank_tol * max(sigma_max, scale)`` are kept.
    Passing ``scale=1.0`` is appropriate for contractions and their defect
    operators, where a roundoff-sized matrix should count as zero.
    """
    A = as_matrix(A)
    m = A.shape[0]
    if A.size == 0:
        return Subspace.zero(m)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    ref = float(s[0]) if s.size else 0.0
    if scale is not None:
        ref = max(ref, float(scale))
    if ref == 0.0:
        return Subspace.zero(m)
    k = int(np.count_nonzero(s > tol.rank_tol * ref))
    return Subspace(_canonical_basis(U[:, :k]))


def orth_complement(S: Subspace) -> Subspace:
    """Orthogonal complement with the deterministic column order of `_canonical_basis`."""
    n, k = S.ambient_dim, S.dim
    if k == 0:
        return Subspace.full(n)
    if k == n:
        return Subspace.zero(n)
    M = np.eye(n) - S.projection
    U, s, _ = np.linalg.svd(M)
    return Subspace(_canonical_basis(U[:, : n - k]))


def complete_to_unitary(dom: Subspace, ran: Subspace, V0, complement=None,
                        tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Extend the isometry ``dom -> ran`` with matrix `V0` to a unitary on C^n.

    The complements ``dom^perp`` and ``ran^perp`` receive deterministic bases
    (see `orth_complement`) and are matched index to index.  `complement`
    optionally replaces that matching: either a permutation (sequence of
    ints) or an r x r unitary applied in complement coordinates.
    """
    V0 = as_matrix(V0) if np.size(V0) else np.zeros((ran.dim, dom.dim), dtype=complex)
    if dom.ambient_dim != ran.ambient_dim:
        raise DimensionMismatch("dom and ran live in different spaces")
    if dom.dim != ran.dim:
        raise DimensionMismatch(f"dim dom = {dom.dim} but dim ran = {ran.dim}")
    if V0.shape != (ran.dim, dom.dim):
        raise DimensionMismatch(f"V0 has shape {V0.shape}, expected {(ran.dim, dom.dim)}")
    if fro(V0.conj().T @ V0 - np.eye(dom.dim)) > tol.residual_tol:
        raise NotUnitary("V0 is not isometric")
    Cd = orth_complement(dom).basis
    Cr = orth_complement(ran).basis
    r = Cd.shape[1]
    if complement is None:
        K = np.eye(r)
    else:
        c = np.asarray(complement)
        if c.ndim == 1:
            if sorted(c.tolist()) != list(range(r)):
                raise DimensionMismatch("complement permutation has wrong size")
            K = np.eye(r)[:, c]
        else:
            K = as_matrix(c)
            if K.shape != (r, r) or fro(K.conj().T @ K - np.eye(r)) > tol.residual_tol:
                raise NotUnitary("complement matrix must be an r x r unitary")
    return ran.basis @ V0 @ dom.basis.conj().T + Cr @ K @ Cd.conj().T


def solve_on_span(X, Y):
    """Least-squares solution L of ``L @ X = Y`` and its relative residual.

    Used to read off the matrix of a map that is only known on a spanning
    set: the columns of `X` are inputs, the columns of `Y` their images.
    """
    X = as_matrix(X)
    Y = as_matrix(Y)
    if X.shape[1] != Y.shape[1]:
        raise DimensionMismatch("X and Y need the same number of columns")
    if X.shape[0] == 0:
        L = np.zeros((Y.shape[0], 0), dtype=complex)
        return L, fro(Y)
    if Y.shape[0] == 0:
        return np.zeros((0, X.shape[0]), dtype=complex), 0.0
    Lh, *_ = np.linalg.lstsq(X.conj().T, Y.conj().T, rcond=None)
    L = Lh.conj().T
    return L, fro(L @ X - Y)


def intersection_dim(A: Subspace, B: Subspace, tol: Tolerances = DEFAULT_TOL) -> int:
    """dim(A ∩ B) = dim A + dim B - dim(A + B)."""
    if A.dim == 0 or B.dim == 0:
        return 0
    both = np.hstack([A.basis, B.basis])
    return A.dim + B.dim - range_basis(both, tol, scale=1.0).dim


def check_unitary(U, tol: Tolerances = DEFAULT_TOL, name="U") -> np.ndarray:
    U = as_matrix(U)
    n = U.shape[0]
    if U.shape != (n, n) or fro(U.conj().T @ U - np.eye(n)) > tol.residual_tol:
        raise NotUnitary(f"{name} is not unitary")
    return U


def check_projection(P, tol: Tolerances = DEFAULT_TOL, name="P") -> np.ndarray:
    P = as_matrix(P)
    n = P.shape[0]
    if P.shape != (n, n) or fro(P - P.conj().T) > tol.residual_tol or fro(P @ P - P) > tol.residual_tol:
        raise NotProjection(f"{name} is not an orthogonal projection")
    return P
