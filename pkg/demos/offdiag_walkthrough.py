"""Walk through every stage for the pair T1 = [[0, a], [b, 0]], T2 = [[0, x], [y, 0]].

Run:  python demos/offdiag_walkthrough.py
"""
import numpy as np

from pairmodel.ando import CommutingPair, build_ando_tuple, regularity
from pairmodel.charfn import CircleGrid, delta_eval
from pairmodel.contraction import classify
from pairmodel.fixtures import offdiag_pair
from pairmodel.fundamental import char_triple, gs_from_tuple, solve_fundamental

np.set_printoptions(precision=4, suppress=True)


def show(label, M):
    print(f"{label}:\n{np.round(M, 12)}\n")


fx = offdiag_pair(0.5, 0.3, 0.5, 0.3)          # a y = b x holds, so the two matrices commute
pair = CommutingPair(fx.T1, fx.T2)
print(f"{fx.name}: ||[T1, T2]|| = {pair.commutator:.1e}")
show("T = T1 T2", pair.product)

# 1. defects and the c.n.u. verdict for the product
c = classify(pair.product)
print(f"dim D_T1 = {pair.d1.space.dim}, dim D_T2 = {pair.d2.space.dim}, dim D_T = {pair.d.space.dim}")
print(f"spectral radius {c.spectral_radius:.3f}; pure = {c.pure}, c.n.u. = {c.cnu}\n")

# 2. the Ando tuple: Lambda isometric, U a unitary extension of U0
t = build_ando_tuple(pair)
rep = regularity(pair)
print(f"fiber dim {t.F_dim}; dom U0 has dim {rep.dim_dom_U0}, ran U0 has dim {rep.dim_ran_U0}")
print(f"regular_12 = {rep.regular_12}, regular_21 = {rep.regular_21}")
print(f"||Lambda* Lambda - I|| = {np.linalg.norm(t.Lambda.conj().T @ t.Lambda - np.eye(t.Lambda.shape[1])):.1e}\n")

# 3. fundamental operators two ways
G1, G2, res = solve_fundamental(pair)
H1, H2 = gs_from_tuple(pair)
show("G1 (solver)", G1)
show("G2 (solver)", G2)
print(f"solver residual {res:.1e}; tuple formula differs by "
      f"{max(np.linalg.norm(G1 - H1), np.linalg.norm(G2 - H2)):.1e}\n")

# 4. characteristic triple; rho(T) < 1 so Theta is inner and Delta vanishes on the circle
tr = char_triple(pair, CircleGrid(256))
worst = max(np.linalg.norm(delta_eval(tr.theta(z))) for z in CircleGrid(256).points)
print(f"Theta has state dimension {tr.theta.degree}; max ||Delta(zeta)|| on the grid = {worst:.1e}")
show("Theta(0)", tr.theta(0.0))
