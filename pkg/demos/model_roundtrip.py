"""From a pair to its characteristic triple, into the functional model and back.

The model pair lives on a different space, so it is compared with the
original through traces of words in T1, T1*, T2, T2*: unitarily equivalent
pairs have identical moments.  A unitarily conjugated copy of the pair
produces a coinciding triple, and the witness is recovered numerically.

Run:  python demos/model_roundtrip.py
"""
import numpy as np

from pairmodel.admiss import (check_admissible, coincidence_search, coincidence_verify,
                              graph_subspace, model_pair, word_moments)
from pairmodel.ando import CommutingPair
from pairmodel.charfn import CircleGrid
from pairmodel.fixtures import gen_commuting_pair
from pairmodel.fundamental import char_triple

grid = CircleGrid(256)
fx = gen_commuting_pair(seed=11, dim=3, scale=0.75)
pair = CommutingPair(fx.T1, fx.T2)
triple = char_triple(pair, grid)

space = graph_subspace(triple.theta, grid)
print(f"{fx.name}")
print(f"model: N = {space.N} Taylor levels, ambient dim {space.ambient_dim}, model dim {space.dim}")

rep = check_admissible(triple, space)
print("admissibility residuals:")
for k, v in rep.residuals().items():
    print(f"  {k:10s} {v:.1e}")
print(f"verdict: {rep.verdict}\n")

T1m, T2m, _ = model_pair(triple, space)
a, b = word_moments(pair.T1, pair.T2), word_moments(T1m, T2m)
err = max(abs(a[w] - b[w]) for w in a)
print(f"{len(a)} word moments, largest difference {err:.1e}")
for w in ("T1", "T1 T2*", "T2* T1 T1 T2"):
    print(f"  tr {w:14s} original {a[w]:.6f}   model {b[w]:.6f}")

rng = np.random.default_rng(0)
V, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
other = char_triple(CommutingPair(V @ pair.T1 @ V.conj().T, V @ pair.T2 @ V.conj().T), grid)
print(f"\nidentity witness works for the conjugated pair: "
      f"{coincidence_verify(triple, other, np.eye(3), np.eye(3), grid)[0]}")
u, u_star = coincidence_search(triple, other, grid)
ok, res = coincidence_verify(triple, other, u, u_star, grid)
print(f"searched witness works: {ok}  (Theta residual {res['theta']:.1e}, G residual {res['G']:.1e})")
