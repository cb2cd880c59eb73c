"""JSON encodings of matrices, pair fixtures and triples.

Floats are written with Python's shortest round-trip repr, so
``parse(serialize(x))`` reproduces every bit pattern.
"""
from __future__ import annotations

import json

import numpy as np

from .charfn import AnalyticFn, CircleGrid
from .errors import DimensionMismatch, UnsupportedTheta
from .fixtures import PairFixture
from .fundamental import CharTriple, GridUnitaries

__all__ = ["matrix_to_json", "matrix_from_json", "pair_to_json", "pair_from_json",
           "theta_to_json", "theta_from_json", "triple_to_json", "triple_from_json",
           "load_json", "dump_json"]


def matrix_to_json(A) -> dict:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        A = A.reshape(1, 1) if A.ndim == 0 else A
    return {"rows": int(A.shape[0]), "cols": int(A.shape[1]),
            "re": [float(v) for v in A.real.ravel()], "im": [float(v) for v in A.imag.ravel()]}


def matrix_from_json(d) -> np.ndarray:
    r, c = int(d["rows"]), int(d["cols"])
    re = np.asarray(d["re"], dtype=float)
    im = np.asarray(d.get("im", [0.0] * (r * c)), dtype=float)
    if re.size != r * c or im.size != r * c:
        raise DimensionMismatch(f"MatrixJson arrays must have {r * c} entries")
    return (re + 1j * im).reshape(r, c)


def _cplx(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _cjson(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def pair_to_json(fx: PairFixture) -> dict:
    return {"name": fx.name, "T1": matrix_to_json(fx.T1), "T2": matrix_to_json(fx.T2),
            "provenance": fx.provenance}


def pair_from_json(d) -> PairFixture:
    return PairFixture(d.get("name", "unnamed"), matrix_from_json(d["T1"]),
                       matrix_from_json(d["T2"]), d.get("provenance", "random_polynomial"))


def theta_to_json(f: AnalyticFn) -> dict:
    if f.kind == "monomial":
        return {"kind": "monomial", "power": int(f.meta["power"]), "dim": f.in_dim}
    if f.kind == "blaschke":
        return {"kind": "blaschke", "zeros": [_cjson(a) for a in f.zeros],
                "unimodular": _cjson(f.unimodular)}
    if f.kind == "constant":
        return {"kind": "constant", "value": matrix_to_json(f.D)}
    if f.kind == "from_contraction" and "T" in f.meta:
        return {"kind": "contraction", "T": matrix_to_json(f.meta["T"])}
    if f.kind == "diag" and f.blocks:
        return {"kind": "diag", "blocks": [theta_to_json(b) for b in f.blocks]}
    return {"kind": "realization", "A": matrix_to_json(f.A), "B": matrix_to_json(f.B),
            "C": matrix_to_json(f.C), "D": matrix_to_json(f.D)}


def theta_from_json(d) -> AnalyticFn:
    kind = d.get("kind")
    if kind == "monomial":
        return AnalyticFn.monomial(int(d["power"]), int(d.get("dim", 1)))
    if kind == "blaschke":
        return AnalyticFn.blaschke([_cplx(a) for a in d["zeros"]], _cplx(d.get("unimodular", 1.0)))
    if kind == "constant":
        return AnalyticFn.constant(matrix_from_json(d["value"]))
    if kind == "polynomial":
        return AnalyticFn.polynomial([matrix_from_json(c) for c in d["coeffs"]])
    if kind == "contraction":
        return AnalyticFn.from_contraction(matrix_from_json(d["T"]))
    if kind == "realization":
        return AnalyticFn(*(matrix_from_json(d[k]) for k in "ABCD"))
    if kind == "diag":
        return AnalyticFn.diag(*[theta_from_json(b) for b in d["blocks"]])
    raise UnsupportedTheta(f"unknown theta kind {kind!r}")


def triple_to_json(t: CharTriple) -> dict:
    out = {"G1": matrix_to_json(t.G1), "G2": matrix_to_json(t.G2), "theta": theta_to_json(t.theta)}
    if t.W is not None:
        out["W"] = {"M": t.W.grid.M, "w1": [matrix_to_json(w) for w in t.W.w1],
                    "w2": [matrix_to_json(w) for w in t.W.w2]}
    return out


def triple_from_json(d) -> CharTriple:
    W = None
    if d.get("W") is not None:
        w = d["W"]
        W = GridUnitaries(CircleGrid(int(w["M"])), [matrix_from_json(x) for x in w["w1"]],
                          [matrix_from_json(x) for x in w["w2"]])
    return CharTriple(matrix_from_json(d["G1"]), matrix_from_json(d["G2"]),
                      theta_from_json(d["theta"]), W)


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def dump_json(obj, path=None, **kw) -> str:
    s = json.dumps(obj, allow_nan=False, **kw)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(s + "\n")
    return s
