"""Invariant subspaces of a model pair from inner divisors of Theta.

Theta = b I_2 with b a Blaschke product and fundamental operators (0, V).
A divisor Theta'' gives the subspace {Theta'' f} minus {Theta h}.  It is
jointly invariant for the model pair exactly when the pencils intertwine
through Theta'', i.e. when suitable (G1', G2') exist.

Run:  python demos/invariant_subspaces.py
"""
import numpy as np

from pairmodel.admiss import graph_subspace, model_pair
from pairmodel.charfn import AnalyticFn, CircleGrid
from pairmodel.fundamental import CharTriple
from pairmodel.invsub import inner_subspace, solve_Gprime, verify_joint_invariance

grid = CircleGrid(256)
zeros = [0.0, 0.3]
b = AnalyticFn.blaschke(zeros)
theta = AnalyticFn.diag(b, b)
space = graph_subspace(theta, grid)
one = AnalyticFn.constant([[1.0]])
print(f"Theta = diag(b, b), zeros of b: {zeros}; model dim {space.dim}\n")

Vs = {"I": np.eye(2), "diag(1, i)": np.diag([1, 1j]),
      "rotation": np.array([[1, 1], [-1, 1]]) / np.sqrt(2)}
print(f"{'V':11s} {'divisor':22s} {'dim':>3s} {'invariant':>9s} {'G residual':>10s}")
for vname, V in Vs.items():
    triple = CharTriple(np.zeros((2, 2)), V.astype(complex), theta)
    pair = model_pair(triple, space)[:2]
    for zs in ([0.0], [0.3]):
        d = AnalyticFn.blaschke(zs)
        for dname, div in ((f"diag(b{zs}, b{zs})", AnalyticFn.diag(d, d)),
                           (f"diag(b{zs}, 1)", AnalyticFn.diag(d, one))):
            Hp = inner_subspace(div, theta, space)
            inv = verify_joint_invariance(Hp, pair)["ok"]
            _, _, res = solve_Gprime(triple.G1, triple.G2, div)
            print(f"{vname:11s} {dname:22s} {Hp.dim:3d} {inv!s:>9s} {res:10.1e}")
