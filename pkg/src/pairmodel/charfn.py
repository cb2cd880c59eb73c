"""Characteristic functions and contractive analytic functions on the disk.

Rational functions are stored as transfer-function realizations

    Theta(z) = D + z C (I - z A)^{-1} B,

so Taylor coefficients are exact (``D, CB, CAB, ...``) and products and
direct sums are block operations on (A, B, C, D).  Finite Blaschke
products, monomials, matrix polynomials and characteristic functions of
matrices all fit this form.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contraction import check_contraction, defect
from .errors import (DimensionMismatch, FactorizationMismatch, NotConstantOnUnitaryPart,
                     NotContraction, SingularResolvent, UnsupportedTheta)
from .matcore import (DEFAULT_TOL, Tolerances, as_matrix, fro, opnorm, range_basis,
                      solve_on_span, sqrt_psd)

__all__ = ["CircleGrid", "AnalyticFn", "SampledFn", "theta_eval", "delta_eval",
           "z_operator", "is_regular_factorization", "purely_contractive_split",
           "probe_points"]


@dataclass(frozen=True)
class CircleGrid:
    """The M-th roots of unity."""

    M: int = 256

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("grid size must be positive")

    @property
    def points(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.M) / self.M)


def probe_points(grid: CircleGrid | None = None, n_boundary: int = 16) -> np.ndarray:
    """Boundary grid points plus Chebyshev-spaced interior points."""
    grid = grid or CircleGrid()
    step = max(1, grid.M // n_boundary)
    bnd = grid.points[::step]
    r = np.cos(np.pi * (2 * np.arange(6) + 1) / 12)   # Chebyshev nodes in (-1, 1)
    interior = np.concatenate([0.9 * r, 0.7j * r, 0.6 * np.exp(0.7j) * r])
    return np.concatenate([bnd, interior])


@dataclass
class AnalyticFn:
    """Contractive analytic function given by a realization (A, B, C, D).

    ``kind`` is a label only; ``zeros``/``unimodular`` are kept for scalar
    Blaschke products so division can be done on zero sets, and ``blocks``
    records the diagonal entries of a direct sum.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    kind: str = "rational"
    zeros: tuple | None = None
    unimodular: complex = 1.0
    blocks: tuple | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.D = np.asarray(self.D, dtype=complex).reshape(np.shape(self.D) or (1, 1))
        p, m = self.D.shape
        s = np.shape(self.A)[0] if np.size(self.A) else 0
        self.A = np.asarray(self.A, dtype=complex).reshape(s, s)
        self.B = np.asarray(self.B, dtype=complex).reshape(s, m)
        self.C = np.asarray(self.C, dtype=complex).reshape(p, s)

    # -- shape -------------------------------------------------------------
    @property
    def in_dim(self) -> int:
        return self.D.shape[1]

    @property
    def out_dim(self) -> int:
        return self.D.shape[0]

    @property
    def degree(self) -> int:
        """State dimension of the realization (McMillan degree if minimal)."""
        return self.A.shape[0]

    @property
    def is_polynomial(self) -> bool:
        s = self.degree
        return s == 0 or opnorm(np.linalg.matrix_power(self.A, s)) == 0.0

    # -- evaluation --------------------------------------------------------
    def __call__(self, z) -> np.ndarray:
        z = complex(z)
        s = self.degree
        if s == 0 or z == 0:
            return self.D.copy()
        R = np.eye(s) - z * self.A
        if np.linalg.svd(R, compute_uv=False)[-1] < 1e-13:
            raise SingularResolvent(f"I - zA is singular at z = {z}")
        return self.D + z * self.C @ np.linalg.solve(R, self.B)

    def taylor(self, K: int) -> np.ndarray:
        """First K Taylor coefficients, shape (K, out_dim, in_dim)."""
        out = np.zeros((K, self.out_dim, self.in_dim), dtype=complex)
        if K == 0:
            return out
        out[0] = self.D
        X = self.B
        for k in range(1, K):
            out[k] = self.C @ X
            X = self.A @ X
        return out

    def guard(self, eps: float = 1e-15, cap: int = 8192) -> int:
        """Smallest g >= 1 with ||Theta_k|| <= eps for every k >= g.

        Relies on ``||C A^{k-1} B|| <= ||C A^{k-1}|| ||B||`` together with
        a contractive state matrix A (true for every constructor here), which
        makes the bound non-increasing in k.  Polynomials of degree d give
        exactly d + 1.
        """
        if self.degree == 0:
            return 1
        nB = opnorm(self.B)
        X = self.C.copy()
        for k in range(1, cap + 1):
            if opnorm(X) * nB <= eps:
                return k
            X = X @ self.A
        raise UnsupportedTheta("Taylor coefficients do not decay within the cap")

    def adjoint_values(self, z) -> np.ndarray:
        return self(z).conj().T

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, C) -> "AnalyticFn":
        C = as_matrix(C)
        p, m = C.shape
        return cls(np.zeros((0, 0)), np.zeros((0, m)), np.zeros((p, 0)), C, kind="constant")

    @classmethod
    def blaschke(cls, zeros, unimodular: complex = 1.0) -> "AnalyticFn":
        """Scalar finite Blaschke product ``u * prod (z - a)/(1 - conj(a) z)``."""
        zeros = tuple(complex(a) for a in zeros)
        if any(abs(a) >= 1 for a in zeros):
            raise UnsupportedTheta("Blaschke zeros must lie in the open disk")
        f = cls.constant([[unimodular]])
        for a in zeros:
            s = np.sqrt(1.0 - abs(a) ** 2)
            fa = cls([[np.conj(a)]], [[s]], [[s]], [[-a]])
            f = f @ fa
        f.kind, f.zeros, f.unimodular = "blaschke", zeros, complex(unimodular)
        return f

    @classmethod
    def monomial(cls, N: int, dim: int = 1) -> "AnalyticFn":
        """``z^N`` times the identity of C^dim."""
        f = cls.blaschke([0.0] * N)
        if dim > 1:
            f = cls.diag(*([f] * dim))
        f.kind = "monomial"
        f.meta["power"] = N
        return f

    @classmethod
    def polynomial(cls, coeffs) -> "AnalyticFn":
        """Matrix polynomial ``sum_k coeffs[k] z^k``."""
        cs = [as_matrix(c) for c in coeffs]
        p, m = cs[0].shape
        d = len(cs) - 1
        if d == 0:
            return cls.constant(cs[0])
        A = np.zeros((d * m, d * m), dtype=complex)
        for k in range(1, d):
            A[k * m:(k + 1) * m, (k - 1) * m:k * m] = np.eye(m)
        B = np.zeros((d * m, m), dtype=complex)
        B[:m] = np.eye(m)
        C = np.hstack(cs[1:])
        f = cls(A, B, C, cs[0], kind="polynomial")
        return f

    @classmethod
    def from_contraction(cls, T, tol: Tolerances = DEFAULT_TOL) -> "AnalyticFn":
        """Characteristic function of T in defect-space coordinates."""
        T = check_contraction(T, tol)
        dT = defect(T, tol)
        dS = defect(T.conj().T, tol)
        B, Bs = dT.space.basis, dS.space.basis
        f = cls(T.conj().T, dT.D @ B, Bs.conj().T @ dS.D, -Bs.conj().T @ T @ B,
                kind="from_contraction")
        f.meta["T"] = T
        return f

    @classmethod
    def diag(cls, *fns: "AnalyticFn") -> "AnalyticFn":
        """Direct sum of analytic functions."""
        from scipy.linalg import block_diag

        A = block_diag(*[f.A for f in fns]) if any(f.degree for f in fns) else np.zeros((0, 0))
        B = _block_diag_rect([f.B for f in fns])
        C = _block_diag_rect([f.C for f in fns])
        D = _block_diag_rect([f.D for f in fns])
        return cls(A, B, C, D, kind="diag", blocks=tuple(fns))

    def __matmul__(self, other: "AnalyticFn") -> "AnalyticFn":
        """Pointwise product ``self(z) @ other(z)`` (other acts first)."""
        if self.in_dim != other.out_dim:
            raise DimensionMismatch("inner dimensions differ")
        s1, s2 = self.degree, other.degree
        A = np.zeros((s1 + s2, s1 + s2), dtype=complex)
        A[:s1, :s1] = self.A
        A[:s1, s1:] = self.B @ other.C
        A[s1:, s1:] = other.A
        B = np.vstack([self.B @ other.D, other.B])
        C = np.hstack([self.C, self.D @ other.C])
        return AnalyticFn(A, B, C, self.D @ other.D, kind="product")

    def scaled(self, c: complex) -> "AnalyticFn":
        f = AnalyticFn(self.A, self.B, c * self.C, c * self.D, kind=self.kind,
                       zeros=self.zeros, unimodular=c * self.unimodular, blocks=None)
        return f

    def conjugated(self, left, right) -> "AnalyticFn":
        """``z -> left @ Theta(z) @ right`` for constant matrices."""
        left, right = as_matrix(left), as_matrix(right)
        return AnalyticFn(self.A, self.B @ right, left @ self.C, left @ self.D @ right,
                          kind=self.kind)


def _block_diag_rect(mats):
    rows = sum(M.shape[0] for M in mats)
    cols = sum(M.shape[1] for M in mats)
    out = np.zeros((rows, cols), dtype=complex)
    r = c = 0
    for M in mats:
        out[r:r + M.shape[0], c:c + M.shape[1]] = M
        r += M.shape[0]
        c += M.shape[1]
    return out


@dataclass
class SampledFn:
    """Contractive function known only through its values on a circle grid."""

    grid: CircleGrid
    values: np.ndarray  # shape (M, out_dim, in_dim)

    @property
    def in_dim(self) -> int:
        return self.values.shape[2]

    @property
    def out_dim(self) -> int:
        return self.values.shape[1]

    def __call__(self, z) -> np.ndarray:
        pts = self.grid.points
        k = int(np.argmin(np.abs(pts - z)))
        if abs(pts[k] - z) > 1e-12:
            raise UnsupportedTheta("sampled function can only be evaluated on its grid")
        return self.values[k].copy()


def theta_eval(T, z, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``-T + z D_{T*} (I - z T*)^{-1} D_T`` compressed to defect bases.

    Examples
    --------
    >>> np.round(theta_eval(np.array([[0.5]]), 0.3), 12)
    array([[-0.23529412+0.j]])
    """
    T = check_contraction(T, tol)
    dT, dS = defect(T, tol), defect(T.conj().T, tol)
    n = T.shape[0]
    R = np.eye(n) - complex(z) * T.conj().T
    if np.linalg.svd(R, compute_uv=False)[-1] < 1e-13:
        raise SingularResolvent(f"I - zT* is singular at z = {z}")
    full = -T + complex(z) * dS.D @ np.linalg.solve(R, dT.D)
    return dS.space.basis.conj().T @ full @ dT.space.basis


def delta_eval(theta_at, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``(I - Theta* Theta)^{1/2}`` at one point."""
    th = as_matrix(theta_at)
    if opnorm(th) > 1.0 + tol.residual_tol:
        raise NotContraction(f"||Theta|| = {opnorm(th):.6g} > 1")
    return sqrt_psd(np.eye(th.shape[1]) - th.conj().T @ th, tol)


@dataclass
class ZData:
    Z: np.ndarray
    onto: bool
    dim_D: int
    dim_D1: int
    dim_D2: int
    isometry_defect: float
    spaces: tuple = ()


def z_operator(theta, theta1, theta2, tol: Tolerances = DEFAULT_TOL) -> ZData:
    """``D_Theta h -> D_{Theta1} Theta2 h (+) D_{Theta2} h`` at one point.

    `theta` = `theta1` @ `theta2`, with theta2 applied first.  Coordinates
    are the range bases of the three defect operators.
    """
    th, t1, t2 = as_matrix(theta), as_matrix(theta1), as_matrix(theta2)
    if t1.shape[1] != t2.shape[0] or th.shape != (t1.shape[0], t2.shape[1]):
        raise DimensionMismatch("factor shapes do not match")
    mis = fro(th - t1 @ t2)
    if mis > tol.residual_tol:
        raise FactorizationMismatch(f"||Theta - Theta1 Theta2|| = {mis:.3e}")
    D, D1, D2 = delta_eval(th, tol), delta_eval(t1, tol), delta_eval(t2, tol)
    S, S1, S2 = (range_basis(X, tol, scale=1.0) for X in (D, D1, D2))
    X = S.basis.conj().T @ D
    Y = np.vstack([S1.basis.conj().T @ D1 @ t2, S2.basis.conj().T @ D2])
    Z, _ = solve_on_span(X, Y)
    iso = fro(Z.conj().T @ Z - np.eye(S.dim))
    return ZData(Z=Z, onto=S.dim == S1.dim + S2.dim, dim_D=S.dim, dim_D1=S1.dim,
                 dim_D2=S2.dim, isometry_defect=iso, spaces=(S, S1, S2))


def is_regular_factorization(thetaA, theta1, theta2, grid: CircleGrid | None = None,
                             tol: Tolerances = DEFAULT_TOL):
    """True iff Z is onto at every grid point; also returns the per-point data."""
    grid = grid or CircleGrid()
    report = [z_operator(thetaA(z), theta1(z), theta2(z), tol) for z in grid.points]
    return all(r.onto for r in report), report


@dataclass
class ContractiveSplit:
    unitary_part: np.ndarray
    pure_part: AnalyticFn
    basis_change: tuple
    dim_unitary: int


def purely_contractive_split(theta: AnalyticFn, tol: Tolerances = DEFAULT_TOL,
                             probes=None) -> ContractiveSplit:
    """Split off the block on which Theta(0) is isometric.

    On that block Theta must be constant; this is checked at `probes`
    (default: interior and boundary probe points).  `basis_change` is the
    pair (V, W) of unitaries on the input and output spaces whose leading
    columns span the unitary block.
    """
    th0 = theta(0.0)
    U, s, Vh = np.linalg.svd(th0)
    k = int(np.count_nonzero(s >= 1.0 - tol.rank_tol))
    V, W = Vh.conj().T, U
    Vu, Wu = V[:, :k], W[:, :k]
    unitary = Wu.conj().T @ th0 @ Vu
    pts = probe_points() if probes is None else probes
    for z in pts:
        if abs(z) > 1 - 1e-9 and theta.degree and np.max(np.abs(np.linalg.eigvals(theta.A))) > 1 - 1e-9:
            continue
        tz = theta(z)
        err = fro(tz @ Vu - th0 @ Vu) + fro(tz.conj().T @ Wu - th0.conj().T @ Wu)
        if err > tol.residual_tol * (1 + abs(z)):
            raise NotConstantOnUnitaryPart(f"Theta varies on the isometric block at z = {z}")
    pure = theta.conjugated(W[:, k:].conj().T, V[:, k:])
    return ContractiveSplit(unitary_part=unitary, pure_part=pure, basis_change=(V, W),
                            dim_unitary=k)
