"""Which scalar pairs (g1, g2) are admissible with an inner Theta carrying a factor z?

Brute force (the four conditions on the truncated model) is set against two
closed forms: the short statement "one of g1, g2 vanishes and the other lies
in the closed disk", and the sharper verdict that follows from interpolating
at two nodes, which also forces |g1|^2 + |g2|^2 = 1 once the model space has
dimension two or more.

Run:  python demos/scalar_admissibility.py
"""
import numpy as np

from pairmodel.admiss import (check_admissible, graph_subspace, scalar_criterion,
                              scalar_criterion_proof)
from pairmodel.charfn import AnalyticFn, CircleGrid
from pairmodel.fundamental import CharTriple

grid = CircleGrid(256)
values = [0.0, 0.3, 0.6, 1.0, 0.6j, -1.0]

for label, theta in (("z", AnalyticFn.monomial(1)), ("z^2", AnalyticFn.monomial(2)),
                     ("z b_0.4", AnalyticFn.blaschke([0.0, 0.4]))):
    space = graph_subspace(theta, grid)
    print(f"Theta = {label}  (model dim {space.dim})")
    print(f"  {'g1':>8s} {'g2':>8s}  brute  short  sharp")
    for g1 in values:
        for g2 in values:
            tr = CharTriple(np.array([[g1]], complex), np.array([[g2]], complex), theta)
            brute = check_admissible(tr, space).verdict
            short, sharp = scalar_criterion(g1, g2, theta), scalar_criterion_proof(g1, g2, theta)
            if brute or short:
                flag = "" if brute == short else "   <- short statement disagrees"
                print(f"  {g1!s:>8s} {g2!s:>8s}  {brute!s:5s}  {short!s:5s}  {sharp!s:5s}{flag}")
    print()
