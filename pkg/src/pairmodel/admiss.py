"""Admissible triples, truncated functional models and coincidence of triples.

Model space layout
------------------
The ambient space is ``C^{N p}`` (Taylor coefficients 0..N-1 of an
H^2(D_*) function, level-major, ``p = out_dim``) followed by one block
``Ran Delta(zeta_k)`` per grid point, written in the basis
``range_basis(Delta(zeta_k))`` and weighted by ``1/sqrt(M)``.

Graph generators are ``Theta z^j e_i (+) Delta z^j e_i`` for every j < N.
For inner Theta the truncated Toeplitz section has singular values that are
either roundoff-small or 1, so the graph is read off by a rank decision and
the model space is its orthogonal complement.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .charfn import AnalyticFn, CircleGrid, delta_eval, probe_points
from .errors import DegreeOverflow, DimensionMismatch, UnsupportedTheta
from .fundamental import CharTriple, GridUnitaries
from .matcore import (DEFAULT_TOL, Subspace, Tolerances, as_matrix, fro, opnorm,
                      orth_complement, range_basis)

__all__ = ["ModelSpace", "AdmissReport", "graph_subspace", "model_pair", "check_admissible",
           "scalar_criterion", "scalar_criterion_proof", "coincidence_verify",
           "coincidence_search", "word_moments", "pencil", "model_operators"]

MIN_N = 16


@dataclass
class ModelSpace:
    """Truncated model space of a contractive analytic function."""

    theta: AnalyticFn
    grid: CircleGrid
    N: int
    guard: int
    H_basis: Subspace
    graph_basis: Subspace
    generators: np.ndarray
    gen_degree: np.ndarray
    delta_bases: list = field(repr=False)

    @property
    def out_dim(self) -> int:
        return self.theta.out_dim

    @property
    def h2_dim(self) -> int:
        return self.N * self.out_dim

    @property
    def ambient_dim(self) -> int:
        return self.H_basis.ambient_dim

    @property
    def dim(self) -> int:
        return self.H_basis.dim

    @property
    def delta_dims(self) -> list:
        return [B.shape[1] for B in self.delta_bases]

    @property
    def safe_columns(self) -> np.ndarray:
        """Generators whose image under a degree-one pencil stays below level N."""
        return np.flatnonzero(self.gen_degree <= self.N - self.guard - 1)


@dataclass
class AdmissReport:
    cond1_contraction: dict
    cond2_product: float
    cond3_invariance: dict
    cond4_product_on_model: dict
    verdict: bool
    tol: Tolerances = DEFAULT_TOL

    def residuals(self) -> dict:
        out = {f"cond1_{k}": v for k, v in self.cond1_contraction.items()}
        out["cond2"] = self.cond2_product
        out.update({f"cond3_{k}": v for k, v in self.cond3_invariance.items()})
        out.update({f"cond4_{k}": v for k, v in self.cond4_product_on_model.items()})
        return out


def _toeplitz_section(theta: AnalyticFn, N: int) -> np.ndarray:
    """Matrix of f -> P_N (Theta f) on polynomials of degree < N."""
    t = theta.taylor(N)
    p, m = theta.out_dim, theta.in_dim
    out = np.zeros((N * p, N * m), dtype=complex)
    for l in range(N):
        for j in range(N - l):
            out[(j + l) * p:(j + l + 1) * p, j * m:(j + 1) * m] = t[l]
    return out


def graph_subspace(theta: AnalyticFn, grid: CircleGrid | None = None, N: int | None = None,
                   tol: Tolerances = DEFAULT_TOL) -> ModelSpace:
    """Truncated model space ``(H^2_N(D_*) (+) Delta-part) minus graph``.

    `N` defaults to ``max(2 * guard + 2, 16)``, where ``guard`` is the
    number of Taylor coefficients of Theta above 1e-15.

    Raises
    ------
    DegreeOverflow
        If ``N <= 2 * theta.degree`` or N exceeds the grid size.
    """
    if not isinstance(theta, AnalyticFn):
        raise UnsupportedTheta("model spaces need a realized (rational) Theta")
    grid = grid or CircleGrid()
    g = theta.guard()
    if N is None:
        N = max(2 * g + 2, MIN_N)
    if N <= 2 * theta.degree:
        raise DegreeOverflow(f"N = {N} must exceed twice the degree {theta.degree}")
    if N > grid.M:
        raise DegreeOverflow(f"N = {N} exceeds the grid size {grid.M}")
    m = theta.in_dim
    H2 = _toeplitz_section(theta, N)
    pts = grid.points
    bases, blocks = [], []
    powers = pts[:, None] ** np.arange(N)[None, :]          # (M, N)
    w = 1.0 / np.sqrt(grid.M)
    for k, z in enumerate(pts):
        Dk = delta_eval(theta(z), tol)
        Bk = range_basis(Dk, tol, scale=1.0).basis
        bases.append(Bk)
        if Bk.shape[1]:
            blocks.append(w * np.kron(powers[k][None, :], Bk.conj().T @ Dk))
    gens = np.vstack([H2] + blocks) if blocks else H2
    graph = range_basis(gens, tol, scale=1.0)
    return ModelSpace(theta=theta, grid=grid, N=N, guard=g, H_basis=orth_complement(graph),
                      graph_basis=graph, generators=gens,
                      gen_degree=np.repeat(np.arange(N), m), delta_bases=bases)


def pencil(A0, A1, N: int) -> np.ndarray:
    """Truncated multiplication by ``A0 + z A1`` on C^N (x) C^p (overflow level dropped)."""
    A0, A1 = as_matrix(A0), as_matrix(A1)
    S = np.eye(N, k=-1)
    return np.kron(np.eye(N), A0) + np.kron(S, A1)


def _w_block(space: ModelSpace, w) -> np.ndarray:
    mats = [np.asarray(x, dtype=complex).reshape(r, r) for x, r in zip(w, space.delta_dims)]
    return sla.block_diag(*mats) if mats else np.zeros((0, 0))


def model_operators(triple: CharTriple, space: ModelSpace):
    """Ambient operators ``M_{G1*+zG2} (+) W1``, ``M_{G2*+zG1} (+) W2``, ``M_z (+) M_zeta``."""
    G1, G2 = as_matrix(triple.G1), as_matrix(triple.G2)
    p, N = space.out_dim, space.N
    if G1.shape != (p, p) or G2.shape != (p, p):
        raise DimensionMismatch(f"G matrices must be {p} x {p}")
    dims = space.delta_dims
    r = sum(dims)
    if r and triple.W is None:
        raise DimensionMismatch("Theta is not inner on the grid; W1, W2 are required")
    Ops = []
    for A0, A1, w in ((G1.conj().T, G2, None if triple.W is None else triple.W.w1),
                      (G2.conj().T, G1, None if triple.W is None else triple.W.w2)):
        Ops.append(sla.block_diag(pencil(A0, A1, N), _w_block(space, w) if r else np.zeros((0, 0))))
    zeta = np.repeat(space.grid.points, dims) if r else np.zeros(0)
    Opz = sla.block_diag(pencil(np.zeros((p, p)), np.eye(p), N), np.diag(zeta))
    return Ops[0], Ops[1], Opz


def model_pair(triple: CharTriple, space: ModelSpace):
    """Compressions of the three model operators to the model space."""
    H = space.H_basis.basis
    return tuple(H.conj().T @ Op @ H for Op in model_operators(triple, space))


def _pencil_sup(A0, A1, n: int) -> float:
    zs = np.exp(2j * np.pi * np.arange(n) / n)
    vals = A0[None] + zs[:, None, None] * A1[None]
    return float(np.max(np.linalg.norm(vals, ord=2, axis=(1, 2)))) if A0.size else 0.0


def check_admissible(triple: CharTriple, space: ModelSpace,
                     tol: Tolerances = DEFAULT_TOL) -> AdmissReport:
    """Evaluate the four admissibility conditions on the truncation-exact window.

    (1) sup-norm excess of both pencils (sampled on 8 M points) and the
        unitarity defect of the W-parts;
    (2) ``w1 w2 - zeta`` on the grid;
    (3) ``||(I - P_graph) Op g|| / ||g||`` over safe graph generators g;
    (4) ``||(Op_i* Op_j* - Opz*) H||`` on the model space, both orders.
    """
    G1, G2 = as_matrix(triple.G1), as_matrix(triple.G2)
    n_fine = 8 * space.grid.M
    wdef = triple.W.unitarity_residual() if triple.W is not None else 0.0
    c1 = {"op1": max(0.0, _pencil_sup(G1.conj().T, G2, n_fine) - 1.0) + wdef,
          "op2": max(0.0, _pencil_sup(G2.conj().T, G1, n_fine) - 1.0) + wdef}
    c2 = triple.W.product_residual() if triple.W is not None else 0.0
    Op1, Op2, Opz = model_operators(triple, space)
    Bg = space.graph_basis.basis
    gens = space.generators[:, space.safe_columns]
    norms = np.linalg.norm(gens, axis=0)
    keep = norms > 0
    gens, norms = gens[:, keep], norms[keep]
    c3 = {}
    for name, Op in (("op1", Op1), ("op2", Op2), ("opz", Opz)):
        if gens.shape[1] == 0:
            c3[name] = 0.0
            continue
        img = Op @ gens
        out = img - Bg @ (Bg.conj().T @ img)
        c3[name] = float(np.max(np.linalg.norm(out, axis=0) / norms))
    H = space.H_basis.basis
    c4 = {}
    for name, (A, B) in (("12", (Op1, Op2)), ("21", (Op2, Op1))):
        c4[name] = opnorm(A.conj().T @ (B.conj().T @ H) - Opz.conj().T @ H)
    allres = list(c1.values()) + [c2] + list(c3.values()) + list(c4.values())
    return AdmissReport(cond1_contraction=c1, cond2_product=c2, cond3_invariance=c3,
                        cond4_product_on_model=c4,
                        verdict=all(r <= tol.residual_tol for r in allres), tol=tol)


def _scalar_theta_split(theta: AnalyticFn):
    """(power of z, nonzero zeros) for z^N or z^N times a Blaschke product with simple zeros."""
    if theta.zeros is None or theta.in_dim != 1 or theta.out_dim != 1:
        raise UnsupportedTheta("need a scalar Blaschke product with recorded zeros")
    zs = np.array(theta.zeros, dtype=complex)
    at0 = np.abs(zs) < 1e-14
    N, nz = int(at0.sum()), zs[~at0]
    if N < 1:
        raise UnsupportedTheta("Theta must carry a factor z^N with N >= 1")
    if nz.size and np.min(np.abs(nz[:, None] - nz[None, :]) + 2 * np.eye(nz.size)) < 1e-12:
        raise UnsupportedTheta("nonzero zeros must be simple")
    return N, nz


def scalar_criterion(g1, g2, theta: AnalyticFn, atol: float = 1e-12) -> bool:
    """Literal criterion: (g1, g2) or (g2, g1) lies in the closed disk times {0}."""
    _scalar_theta_split(theta)
    g1, g2 = complex(g1), complex(g2)
    return bool((abs(g2) <= atol and abs(g1) <= 1 + atol)
                or (abs(g1) <= atol and abs(g2) <= 1 + atol))


def scalar_criterion_proof(g1, g2, theta: AnalyticFn, atol: float = 1e-12) -> bool:
    """Verdict obtained by carrying out the interpolation argument.

    ``g1 g2 = 0`` always; when the model space has dimension at least two
    the interpolation at a second node forces ``|g1|^2 + |g2|^2 = 1``,
    while for Theta = z only contractivity of the pencil remains.
    """
    N, nz = _scalar_theta_split(theta)
    g1, g2 = complex(g1), complex(g2)
    if abs(g1 * g2) > atol:
        return False
    if N + nz.size == 1:
        return abs(g1) + abs(g2) <= 1 + atol
    return abs(abs(g1) ** 2 + abs(g2) ** 2 - 1) <= atol


def _omega(Ba, Bb, u):
    return Bb.conj().T @ u @ Ba


def coincidence_verify(A: CharTriple, B: CharTriple, u, u_star, grid: CircleGrid | None = None,
                       tol: Tolerances = DEFAULT_TOL, probes=None):
    """Check that ``(u, u_*)`` makes two triples coincide.

    Returns ``(ok, residuals)`` with the Theta intertwining residual on the
    probe set, the G-conjugation residual, the unitarity defects and, when
    both triples carry W-parts, the conjugation residual of W on the grid.
    """
    grid = grid or CircleGrid()
    u, us = as_matrix(u), as_matrix(u_star)
    ta, tb = A.theta, B.theta
    if u.shape != (tb.in_dim, ta.in_dim) or us.shape != (tb.out_dim, ta.out_dim):
        raise DimensionMismatch("u, u_star shapes do not match the two triples")
    pts = probe_points(grid) if probes is None else probes
    res = {
        "unitary_u": fro(u.conj().T @ u - np.eye(u.shape[1])) + fro(u @ u.conj().T - np.eye(u.shape[0])),
        "unitary_u_star": fro(us.conj().T @ us - np.eye(us.shape[1]))
        + fro(us @ us.conj().T - np.eye(us.shape[0])),
        "theta": max(fro(us @ ta(z) - tb(z) @ u) for z in pts),
        "G": max(fro(us @ as_matrix(A.G1) @ us.conj().T - as_matrix(B.G1)),
                 fro(us @ as_matrix(A.G2) @ us.conj().T - as_matrix(B.G2))),
    }
    if A.W is not None and B.W is not None:
        wr = 0.0
        for k, z in enumerate(grid.points):
            Ba = range_basis(delta_eval(ta(z), tol), tol, scale=1.0).basis
            Bb = range_basis(delta_eval(tb(z), tol), tol, scale=1.0).basis
            Om = _omega(Ba, Bb, u)
            for wa, wb in ((A.W.w1[k], B.W.w1[k]), (A.W.w2[k], B.W.w2[k])):
                if np.size(wa) or np.size(wb):
                    wr = max(wr, fro(Om @ wa @ Om.conj().T - wb))
        res["W"] = wr
    elif (A.W is None) != (B.W is None):
        res["W"] = np.inf
    return all(v <= tol.residual_tol for v in res.values()), res


def _intertwiner_system(A: CharTriple, B: CharTriple, pts):
    """Linear system for V = X (+) Y intertwining the *-closed data of A and B.

    Unknowns are ``vec(X)`` (m x m) then ``vec(Y)`` (p x p), column-major.
    """
    m, p = A.theta.in_dim, A.theta.out_dim
    Im, Ip = np.eye(m), np.eye(p)
    nx = m * m
    rows = []

    def eq(xcoef, ycoef):
        rows.append(np.hstack([xcoef if xcoef is not None else np.zeros((ycoef.shape[0], nx)),
                               ycoef if ycoef is not None else np.zeros((xcoef.shape[0], p * p))]))

    for z in pts:
        Ta, Tb = A.theta(z), B.theta(z)
        # Y Ta - Tb X = 0
        eq(-np.kron(Im, Tb), np.kron(Ta.T, Ip))
        # X Ta* - Tb* Y = 0
        eq(np.kron(Ta.conj(), Im), -np.kron(Ip, Tb.conj().T))
    for Ga, Gb in ((A.G1, B.G1), (A.G2, B.G2)):
        Ga, Gb = as_matrix(Ga), as_matrix(Gb)
        for Ma, Mb in ((Ga, Gb), (Ga.conj().T, Gb.conj().T)):
            eq(None, np.kron(Ma.T, Ip) - np.kron(Ip, Mb))
    return np.vstack(rows), m, p


def coincidence_search(A: CharTriple, B: CharTriple, grid: CircleGrid | None = None,
                       tol: Tolerances = DEFAULT_TOL, seed: int = 0, tries: int = 4):
    """Best-effort search for a coincidence witness ``(u, u_*)``.

    The pair ``u (+) u_*`` is sought among intertwiners of the self-adjoint
    data ``[[0, Theta*], [Theta, 0]](z)`` at probe points and of
    ``G_i, G_i*``.  That solution set is a linear space closed under taking
    polar parts, so a generic element is polar-decomposed and its unitary
    factor tested with `coincidence_verify`.  Returns None when nothing
    passes; None is inconclusive.
    """
    grid = grid or CircleGrid()
    ta, tb = A.theta, B.theta
    if (ta.in_dim, ta.out_dim) != (tb.in_dim, tb.out_dim):
        return None
    m, p = ta.in_dim, ta.out_dim
    if m + p > 12:
        return None
    pts = probe_points(grid)
    ok, _ = coincidence_verify(A, B, np.eye(m), np.eye(p), grid, tol, pts)
    if ok:
        return np.eye(m, dtype=complex), np.eye(p, dtype=complex)
    Msys, m, p = _intertwiner_system(A, B, pts)
    ns = sla.null_space(Msys, rcond=max(tol.rank_tol, 1e-9))
    if ns.shape[1] == 0:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        c = rng.normal(size=ns.shape[1]) + 1j * rng.normal(size=ns.shape[1])
        v = ns @ c
        X = v[:m * m].reshape(m, m, order="F")
        Y = v[m * m:].reshape(p, p, order="F")
        try:
            u = sla.polar(X)[0] if m else X
            us = sla.polar(Y)[0] if p else Y
        except (ValueError, np.linalg.LinAlgError):
            continue
        ok, _ = coincidence_verify(A, B, u, us, grid, tol, pts)
        if ok:
            return u, us
    return None


WORD_LETTERS = ("T1", "T1*", "T2", "T2*")


def word_moments(T1, T2, max_len: int = 4) -> dict:
    """``tr w(T1, T1*, T2, T2*)`` for every word of length 1..max_len."""
    T1, T2 = as_matrix(T1), as_matrix(T2)
    mats = {"T1": T1, "T1*": T1.conj().T, "T2": T2, "T2*": T2.conj().T}
    out = {}
    prods = {(): np.eye(T1.shape[0], dtype=complex)}
    for L in range(1, max_len + 1):
        nxt = {}
        for w, P in prods.items():
            if len(w) != L - 1:
                continue
            for a in WORD_LETTERS:
                Q = P @ mats[a]
                nxt[w + (a,)] = Q
                out[" ".join(w + (a,))] = complex(np.trace(Q))
        prods = nxt
    return out
