"""Command-line driver.

Subcommands: approx (compute/export coefficients), solve (apply to a
matrix and right-hand side), certify (positivity certificate plus
doubly-nonnegative check), table1/table2/figures (batch reproductions).
Exit codes: 0 success, 2 certification failure, 1 any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from .certify import check_positivity_conditions, verify_equioscillation
from .coeff_io import coefficients_to_dict, save_coefficients
from .errors import BurafracError
from .experiments import ExperimentConfig, get_approximation, run_figures, run_table1, run_table2
from .matrices import laplacian_1d, load_matrix_market, normalize
from .rhs import RhsSpec, build_rhs, grid_nodes
from .solver import SolverConfig, apply_bura_inverse, verify_doubly_nonnegative


def _add_bura_flags(p: argparse.ArgumentParser):
    p.add_argument("--alpha", type=float, required=True, help="fractional power in (0, 1)")
    p.add_argument("--beta", type=int, default=1, help="integer shift (default 1)")
    p.add_argument("--k", type=int, required=True, help="denominator degree")
    p.add_argument("--m", type=int, default=-1, help="numerator degree (default: same as k)")
    p.add_argument("--precision-bits", type=int, default=0, help="Remez working precision")


def _add_matrix_flags(p: argparse.ArgumentParser):
    p.add_argument("--matrix", default="laplacian1d", help="laplacian1d or mtx:<path>")
    p.add_argument("--n", type=int, default=0, help="dimension (laplacian1d)")
    p.add_argument("--mesh-exp", type=int, default=0, help="set the dimension as n = 2^mesh_exp - 1")


def _build_matrix(args):
    if args.matrix == "laplacian1d":
        n = args.n
        if n == 0 and getattr(args, "mesh_exp", 0) > 0:
            n = 2**args.mesh_exp - 1
        return laplacian_1d(n)
    if args.matrix.startswith("mtx:"):
        mat = load_matrix_market(args.matrix[4:])
        return normalize(mat)
    raise ValueError(f"unknown matrix spec {args.matrix!r}")


def _get_pf(args):
    return get_approximation(args.alpha, args.k, beta=args.beta, m=args.m, precision_bits=args.precision_bits)


def _cmd_approx(args) -> int:
    r, pf = _get_pf(args)
    cert = check_positivity_conditions(pf)
    doc = coefficients_to_dict(pf)
    doc["certificate"] = asdict(cert)
    doc["equioscillation_spread"] = r.final_spread
    print(json.dumps(doc, indent=2))
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        name = f"bura_alpha{args.alpha}_beta{args.beta}_k{args.k}.json"
        save_coefficients(outdir / name, pf)
        print(f"wrote {outdir / name}", file=sys.stderr)
    return 0


def _cmd_solve(args) -> int:
    a = _build_matrix(args)
    f = build_rhs(RhsSpec.parse(args.rhs), a.n)
    _, pf = _get_pf(args)
    cfg = SolverConfig(linear_solver=args.solver)
    report = apply_bura_inverse(pf, a, f, cfg)
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    sol_path = outdir / "solution.csv"
    with open(sol_path, "w", encoding="utf-8") as fh:
        if args.matrix == "laplacian1d":
            fh.write("index,x,value\n")
            for i, (x, v) in enumerate(zip(grid_nodes(a.n), report.u_r)):
                fh.write(f"{i},{float(x)!r},{float(v)!r}\n")
        else:
            fh.write("index,value\n")
            for i, v in enumerate(report.u_r):
                fh.write(f"{i},{float(v)!r}\n")
    rep_path = outdir / "solve_report.json"
    with open(rep_path, "w", encoding="utf-8") as fh:
        json.dump(
            {
                "terms_evaluated": report.terms_evaluated,
                "wall_time": report.wall_time,
                "per_term_residuals": report.per_term_residuals.tolist(),
                "max_residual": float(np.max(report.per_term_residuals)),
                "solution_min": float(np.min(report.u_r)),
                "solution_max": float(np.max(report.u_r)),
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    print(f"wrote {sol_path} and {rep_path}")
    return 0


def _cmd_certify(args) -> int:
    r, pf = _get_pf(args)
    cert = check_positivity_conditions(pf)
    extrema = verify_equioscillation(r)
    doc = {
        "params": {"alpha": args.alpha, "beta": args.beta, "m": pf.params.m, "k": args.k},
        "E": r.minimax_error,
        "certificate": asdict(cert),
        "alternation_points": len(extrema.points),
        "alternation_ok": extrema.alternation_ok,
    }
    ok = cert.certified and extrema.alternation_ok
    if args.n > 0 or getattr(args, "mesh_exp", 0) > 0 or args.matrix != "laplacian1d":
        a = _build_matrix(args)
        dnn = verify_doubly_nonnegative(pf, a, n_cap=args.n_cap)
        doc["doubly_nonnegative"] = {
            "min_entry": dnn.min_entry,
            "max_entry": dnn.max_entry,
            "symmetry_defect": dnn.symmetry_defect,
            "nonnegative": dnn.nonnegative,
            "symmetric": dnn.symmetric,
        }
        ok = ok and dnn.nonnegative and dnn.symmetric
    print(json.dumps(doc, indent=2))
    return 0 if ok else 2


def _experiment_config(args) -> ExperimentConfig:
    if args.config:
        config = ExperimentConfig.from_json_file(args.config)
    else:
        config = ExperimentConfig()
    if args.out:
        config = replace(config, outputs=args.out)
    if args.precision_bits:
        config = replace(config, precision_bits=args.precision_bits)
    if getattr(args, "rhs", None):
        config = replace(config, rhs=RhsSpec.parse(args.rhs))
    if getattr(args, "mesh_exp", None):
        config = replace(config, mesh_exponents=tuple(args.mesh_exp))
    return config


def _cmd_table1(args) -> int:
    errors = run_table1(_experiment_config(args))
    for (alpha, k), e in sorted(errors.items()):
        print(f"alpha={alpha} k={k} E={e:.4e}")
    return 0


def _cmd_table2(args) -> int:
    table = run_table2(_experiment_config(args))
    for (mexp, alpha, k), v in sorted(table.items()):
        print(f"h=2^-{mexp} alpha={alpha} k={k} l2rel={v:.3e}")
    return 0


def _cmd_figures(args) -> int:
    config = _experiment_config(args)
    run_figures(config)
    where = config.outputs or "(in memory only; pass --out to write CSV)"
    print(f"figure data written to {where}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="burafrac",
        description="Rational-approximation solvers for fractional powers of normalized SPD M-matrices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approx", help="compute and export approximation coefficients")
    _add_bura_flags(p)
    p.add_argument("--out", default=None, help="directory for the JSON coefficient file")
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("solve", help="apply the approximate fractional inverse to a right-hand side")
    _add_bura_flags(p)
    _add_matrix_flags(p)
    p.add_argument("--rhs", default="f2", help="f1 | f2 | unit:<i> | file:<path>")
    p.add_argument("--solver", default="auto", choices=("auto", "thomas", "cg"))
    p.add_argument("--out", default=None, help="output directory (default: current)")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("certify", help="positivity certificate and doubly-nonnegative check")
    _add_bura_flags(p)
    _add_matrix_flags(p)
    p.add_argument("--n-cap", type=int, default=1024, help="materialization cap")
    p.set_defaults(func=_cmd_certify)

    for name, fn in (("table1", _cmd_table1), ("table2", _cmd_table2), ("figures", _cmd_figures)):
        p = sub.add_parser(name, help=f"run the {name} batch experiment")
        p.add_argument("--config", default=None, help="JSON experiment config")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--precision-bits", type=int, default=0)
        if name != "table1":
            p.add_argument("--rhs", default=None, help="override the configured rhs")
            p.add_argument("--mesh-exp", type=int, nargs="+", default=None,
                           help="override the configured mesh exponents")
        p.set_defaults(func=fn)

    return parser


def cli_dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help; usage problems map to the error code
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except BurafracError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))
