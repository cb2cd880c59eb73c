"""Command-line front end: ``pairmodel <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 bad input or violated
precondition.  ``--json`` switches every report to a single JSON object on
stdout; reports always echo the tolerances in use.
"""
from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import jsonio
from .acceptance import run_all
from .admiss import check_admissible, coincidence_search, coincidence_verify, graph_subspace, model_pair
from .ando import CommutingPair, build_ando_tuple, regularity
from .charfn import AnalyticFn, CircleGrid
from .contraction import classify
from .errors import PairModelError
from .fixtures import gen_commuting_pair
from .fundamental import char_triple, gs_from_tuple, solve_fundamental
from .invsub import divide_inner, inner_subspace, solve_Gprime, verify_joint_invariance
from .lift import douglas_ando_lift, schaffer_ando_lift, verify_lift
from .matcore import Tolerances, fro

__all__ = ["main", "build_parser"]


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        if x.ndim == 2:
            return jsonio.matrix_to_json(x)
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if np.isfinite(v) else str(v)
    return x


def _fmt(v) -> str:
    if isinstance(v, np.ndarray) and v.ndim == 2:
        return "\n" + np.array2string(np.round(v, 12), precision=6, suppress_small=True)
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6e}"
    return str(v)


def _emit(report: dict, as_json: bool):
    if as_json:
        print(jsonio.dump_json(_jsonable(report), sort_keys=True))
        return
    for k, v in report.items():
        if isinstance(v, dict):
            print(f"{k}:")
            for k2, v2 in v.items():
                print(f"  {k2}: {_fmt(v2)}")
        else:
            print(f"{k}: {_fmt(v)}")


def _tol(args) -> Tolerances:
    return Tolerances(rank_tol=args.rank_tol, residual_tol=args.residual_tol)


def _pair(path, tol) -> CommutingPair:
    fx = jsonio.pair_from_json(jsonio.load_json(path))
    return CommutingPair(fx.T1, fx.T2, tol)


def _echo(tol: Tolerances) -> dict:
    return {"rank_tol": tol.rank_tol, "residual_tol": tol.residual_tol, "iter_tol": tol.iter_tol}


# -- subcommands -----------------------------------------------------------------
def cmd_defect(args, tol):
    pair = _pair(args.pair, tol)
    c = classify(pair.product, tol)
    return {"dim_D_T1": pair.d1.space.dim, "dim_D_T2": pair.d2.space.dim,
            "dim_D_T": pair.d.space.dim, "dim_D_T*": pair.d_star.space.dim,
            "spectral_radius": c.spectral_radius, "pure": c.pure, "cnu": c.cnu,
            "verdicts_consistent": c.consistent}, 0 if c.consistent else 1


def cmd_ando(args, tol):
    pair = _pair(args.pair, tol)
    rep = regularity(pair)
    t = build_ando_tuple(pair)
    return {"regular_12": rep.regular_12, "regular_21": rep.regular_21, "dim_D_T": rep.dim_DT,
            "F_dim": rep.dim_ambient, "codim_dom": rep.codim_dom, "codim_ran": rep.codim_ran,
            "Lambda": t.Lambda, "P": t.P, "U": t.U}, 0


def _parse_points(pts):
    return [complex(p.replace(" ", "").replace("i", "j")) for p in pts or []]


def cmd_charfn(args, tol):
    pair = _pair(args.pair, tol)
    theta = AnalyticFn.from_contraction(pair.product, tol)
    grid = CircleGrid(args.grid)
    inner_res, sv_rows = 0.0, []
    for k, z in enumerate(grid.points):
        th = theta(z)
        inner_res = max(inner_res, fro(th.conj().T @ th - np.eye(th.shape[1])))
        for i, s in enumerate(np.linalg.svd(th, compute_uv=False)):
            sv_rows.append((k, i, float(s)))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["zeta_index", "singular_value_index", "value"])
            w.writerows((k, i, repr(s)) for k, i, s in sv_rows)
    samples = {str(z): theta(z) for z in _parse_points(args.points)}
    return {"grid": args.grid, "max_boundary_defect": inner_res, "samples": samples,
            "csv": args.csv or ""}, 0


def cmd_fundamental(args, tol):
    pair = _pair(args.pair, tol)
    G1, G2, res = solve_fundamental(pair)
    T1, T2 = gs_from_tuple(pair, check=False)
    agree = max(fro(T1 - G1), fro(T2 - G2))
    if args.triple_out:
        jsonio.dump_json(jsonio.triple_to_json(char_triple(pair)), args.triple_out)
    return {"G1": G1, "G2": G2, "solver_residual": res, "tuple_agreement": agree}, \
        0 if agree <= tol.residual_tol else 1


def cmd_lift(args, tol):
    pair = _pair(args.pair, tol)
    build = schaffer_ando_lift if args.form == "schaffer" else douglas_ando_lift
    rep = verify_lift(build(pair, None, args.N), pair, args.depth)
    out = {"form": args.form, "N": args.N, "depth": args.depth,
           "commutator_norm": rep.commutator_norm, "product_defect": rep.product_defect,
           "isometry_defect_interior": rep.isometry_defect_interior,
           "isometry_defect_boundary": rep.isometry_defect_boundary,
           "intertwining_interior": rep.intertwining_interior,
           "max_dilation_residual": rep.max_dilation,
           "pi_isometry_defect": rep.pi_isometry_defect}
    if rep.tail_law_residual is not None:
        out["tail_law_residual"] = rep.tail_law_residual
    bad = max(rep.commutator_norm, rep.isometry_defect_interior,
              max(rep.intertwining_interior.values()), rep.max_dilation) > tol.residual_tol
    return out, 1 if bad else 0


def cmd_admiss(args, tol):
    triple = jsonio.triple_from_json(jsonio.load_json(args.triple))
    space = graph_subspace(triple.theta, CircleGrid(args.grid), args.N, tol)
    rep = check_admissible(triple, space, tol)
    return {"N": space.N, "model_dim": space.dim, "verdict": rep.verdict,
            "residuals": rep.residuals()}, 0 if rep.verdict else 1


def cmd_coincide(args, tol):
    A = jsonio.triple_from_json(jsonio.load_json(args.tripleA))
    B = jsonio.triple_from_json(jsonio.load_json(args.tripleB))
    wit = coincidence_search(A, B, tol=tol)
    if wit is None:
        return {"verdict": "inconclusive"}, 1
    ok, res = coincidence_verify(A, B, *wit, tol=tol)
    return {"verdict": "coincide" if ok else "inconclusive", "u": wit[0], "u_star": wit[1],
            "residuals": res}, 0 if ok else 1


def cmd_invsub(args, tol):
    triple = jsonio.triple_from_json(jsonio.load_json(args.triple))
    factor = jsonio.theta_from_json(jsonio.load_json(args.factor))
    space = graph_subspace(triple.theta, N=args.N, tol=tol)
    Hp = inner_subspace(factor, triple.theta, space, tol=tol)
    T1m, T2m, _ = model_pair(triple, space)
    inv = verify_joint_invariance(Hp, (T1m, T2m), tol)
    G1p, G2p, res = solve_Gprime(triple.G1, triple.G2, factor)
    theta_prime = divide_inner(triple.theta, factor)
    agree = inv["ok"] == (res <= tol.residual_tol)
    return {"model_dim": space.dim, "Hprime_dim": Hp.dim, "theta_prime_degree": theta_prime.degree,
            "invariance": {"1": inv["1"], "2": inv["2"], "ok": inv["ok"]},
            "G1_prime": G1p, "G2_prime": G2p, "Gprime_residual": res,
            "consistent": agree}, 0 if agree else 1


def cmd_gen(args, tol):
    dim = args.dim if args.dim is not None else (2 if args.method == "paper_example" else 3)
    fx = gen_commuting_pair(args.seed, dim, args.method, scale=args.scale,
                            params=args.params)
    return jsonio.pair_to_json(fx), 0


def cmd_suite(args, tol):
    results = run_all(args.only)
    if not args.json:
        for r in results:
            print(r.line())
    rep = {f"{r.number}": {"title": r.title, "passed": r.passed, "details": r.details}
           for r in results}
    return rep, 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pairmodel", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    p.add_argument("--rank-tol", type=float, default=1e-10)
    p.add_argument("--residual-tol", type=float, default=1e-9)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("defect", help="defect dimensions, purity and c.n.u. verdict")
    s.add_argument("pair")
    s.set_defaults(func=cmd_defect)

    s = sub.add_parser("ando", help="regularity report and Ando tuple")
    s.add_argument("pair")
    s.set_defaults(func=cmd_ando)

    s = sub.add_parser("charfn", help="characteristic function samples and boundary identity")
    s.add_argument("pair")
    s.add_argument("--grid", type=int, default=256)
    s.add_argument("--points", nargs="*", default=[])
    s.add_argument("--csv", default=None, help="write singular values of Theta on the grid")
    s.set_defaults(func=cmd_charfn)

    s = sub.add_parser("fundamental", help="fundamental operators G1, G2")
    s.add_argument("pair")
    s.add_argument("--triple-out", default=None, help="write the characteristic triple as JSON")
    s.set_defaults(func=cmd_fundamental)

    s = sub.add_parser("lift", help="truncated Ando lift report")
    s.add_argument("pair")
    s.add_argument("--form", choices=("schaffer", "douglas"), default="schaffer")
    s.add_argument("--N", type=int, default=16)
    s.add_argument("--depth", type=int, default=8)
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("admiss", help="admissibility report for a triple")
    s.add_argument("triple")
    s.add_argument("--N", type=int, default=None)
    s.add_argument("--grid", type=int, default=256)
    s.set_defaults(func=cmd_admiss)

    s = sub.add_parser("coincide", help="search for a coincidence witness")
    s.add_argument("tripleA")
    s.add_argument("tripleB")
    s.set_defaults(func=cmd_coincide)

    s = sub.add_parser("invsub", help="invariant subspace from an inner divisor")
    s.add_argument("triple")
    s.add_argument("--factor", required=True)
    s.add_argument("--N", type=int, default=None)
    s.set_defaults(func=cmd_invsub)

    s = sub.add_parser("gen", help="emit a commuting pair fixture")
    s.add_argument("--method", default="random_polynomial",
                   choices=("random_polynomial", "truncated_hardy", "paper_example"))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--dim", type=int, default=None, help="default 3 (2 for paper_example)")
    s.add_argument("--scale", type=float, default=1.0)
    s.add_argument("--params", type=float, nargs=4, default=None, metavar=("A", "B", "X", "Y"))
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("suite", help="run the acceptance battery")
    s.add_argument("--only", type=int, nargs="+", choices=range(1, 10), default=None,
                   metavar="K", help="run only these criteria (1..9)")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = _tol(args)
        report, code = args.func(args, tol)
    except PairModelError as e:
        msg = {"error": type(e).__name__, "message": str(e), "exit_code": e.exit_code}
        if args.json:
            print(jsonio.dump_json(msg, sort_keys=True))
        else:
            print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except (OSError, ValueError, KeyError, TypeError) as e:
        if args.json:
            print(jsonio.dump_json({"error": type(e).__name__, "message": str(e), "exit_code": 2}))
        else:
            print(f"error: {e}", file=sys.stderr)
        return 2
    if args.command == "gen":
        print(jsonio.dump_json(report))
        return code
    if args.command == "suite" and not args.json:
        return code
    report["tolerances"] = _echo(tol)
    _emit(report, args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
