"""Batch drivers: minimax-error tables, mesh-refinement error grids, figure data.

Each run writes plot-ready CSV files plus a manifest carrying the config and
its hash.  Outputs are bit-deterministic for a fixed config: floats are
serialized with shortest round-trip repr, summation orders are fixed, and
worker pools only distribute independent cells whose results are collected
in a fixed order.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fractions import PartialFractionForm, partial_fractions
from .matrices import NormalizedMatrix, laplacian_1d
from .oracle import decompose
from .remez import BuraParams, RationalApprox, RemezOptions, bura_compute
from .rhs import RhsSpec, build_rhs, grid_nodes
from .solver import apply_bura_inverse

DEFAULT_ALPHAS = (0.25, 0.5, 0.75)
DEFAULT_KS = (5, 6, 7)
DEFAULT_MESH_EXPONENTS = (5, 6, 7, 8, 9, 10, 11)

_bura_cache: dict = {}


@dataclass
class ExperimentConfig:
    alphas: tuple = DEFAULT_ALPHAS
    ks: tuple = DEFAULT_KS
    beta: int = 1
    mesh_exponents: tuple = DEFAULT_MESH_EXPONENTS
    rhs: RhsSpec = field(default_factory=RhsSpec)
    outputs: str | None = None
    precision_bits: int = 0
    workers: int = 1

    def to_dict(self) -> dict:
        return {
            "alphas": list(self.alphas),
            "ks": list(self.ks),
            "beta": self.beta,
            "mesh_exponents": list(self.mesh_exponents),
            "rhs": {
                "kind": self.rhs.kind,
                "amplitude": self.rhs.amplitude,
                "index": self.rhs.index,
                "path": self.rhs.path,
                "support": list(self.rhs.support),
            },
            "outputs": self.outputs,
            "precision_bits": self.precision_bits,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        rhs_doc = doc.get("rhs", {})
        rhs = RhsSpec(
            kind=rhs_doc.get("kind", "f2"),
            amplitude=rhs_doc.get("amplitude", 1.0),
            index=rhs_doc.get("index", 0),
            path=rhs_doc.get("path"),
            support=tuple(rhs_doc.get("support", (0.5, 0.75))),
        )
        return cls(
            alphas=tuple(doc.get("alphas", DEFAULT_ALPHAS)),
            ks=tuple(doc.get("ks", DEFAULT_KS)),
            beta=doc.get("beta", 1),
            mesh_exponents=tuple(doc.get("mesh_exponents", DEFAULT_MESH_EXPONENTS)),
            rhs=rhs,
            outputs=doc.get("outputs"),
            precision_bits=doc.get("precision_bits", 0),
            workers=doc.get("workers", 1),
        )

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def config_hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def get_approximation(alpha: float, k: int, beta: int = 1, m: int = -1, precision_bits: int = 0):
    """Cached (RationalApprox, PartialFractionForm) for one parameter set."""
    key = (alpha, beta, m, k, precision_bits)
    if key not in _bura_cache:
        params = BuraParams(alpha=alpha, beta=beta, m=m, k=k)
        opts = RemezOptions(precision_bits=precision_bits)
        r = bura_compute(params, opts)
        _bura_cache[key] = (r, partial_fractions(r))
    return _bura_cache[key]


def _ensure_outdir(config: ExperimentConfig) -> Path | None:
    if config.outputs is None:
        return None
    out = Path(config.outputs)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_csv(path: Path, header: list, rows: list) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _write_manifest(out: Path, config: ExperimentConfig, command: str, files: list) -> None:
    doc = {
        "command": command,
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "outputs": sorted(files),
    }
    with open(out / f"manifest_{command}.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_table1(config: ExperimentConfig | None = None) -> dict:
    """Minimax errors E(k, k; 1) over the (alpha, k) grid; CSV with 5
    significant digits."""
    config = config or ExperimentConfig()
    errors = {}
    for alpha in config.alphas:
        for k in config.ks:
            r, _ = get_approximation(alpha, k, beta=config.beta, precision_bits=config.precision_bits)
            errors[(alpha, k)] = r.minimax_error
    out = _ensure_outdir(config)
    if out is not None:
        rows = [
            (alpha, k, f"{errors[(alpha, k)]:.4e}") for alpha in config.alphas for k in config.ks
        ]
        _write_csv(out / "table1.csv", ["alpha", "k", "E"], rows)
        _write_manifest(out, config, "table1", ["table1.csv"])
    return errors


def _mesh_cells(config: ExperimentConfig):
    for mexp in config.mesh_exponents:
        n = 2**mexp - 1
        yield mexp, 2.0**-mexp, n


def _solve_cell(pf: PartialFractionForm, a: NormalizedMatrix, f, alpha, h):
    """One (alpha, k, h) cell: discrete solution scaled by (h/2)^(2 alpha).

    Returns (l2_relative, a2_relative, ratio): the l2 error of the scaled
    solutions, the A^2-energy relative error of the unscaled ones, and their
    quotient (expected O(h^(-2(1-alpha)))).
    """
    eig = decompose(a)
    u = eig.apply_power(-alpha, f)
    u_r = apply_bura_inverse(pf, a, f).u_r
    fnorm = float(np.linalg.norm(f))
    scale = (h / 2.0) ** (2.0 * alpha)
    l2rel = scale * float(np.linalg.norm(u_r - u)) / fnorm
    diff_c = eig.project(u_r - u)
    a2rel = float(np.sqrt(np.sum(eig.eigenvalues**2 * diff_c**2))) / fnorm
    ratio = l2rel / a2rel if a2rel > 0 else 0.0
    return l2rel, a2rel, ratio


def _grid_results(config: ExperimentConfig, rhs: RhsSpec):
    """Solve every (h, alpha, k) cell; cells are independent jobs, results
    are keyed so output order never depends on scheduling."""
    for alpha in config.alphas:
        for k in config.ks:
            get_approximation(alpha, k, beta=config.beta, precision_bits=config.precision_bits)
    jobs = []
    for mexp, h, n in _mesh_cells(config):
        a = laplacian_1d(n)
        f = build_rhs(rhs, n)
        for alpha in config.alphas:
            for k in config.ks:
                _, pf = get_approximation(alpha, k, beta=config.beta, precision_bits=config.precision_bits)
                jobs.append(((mexp, alpha, k), pf, a, f, alpha, h))
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            vals = list(pool.map(lambda j: _solve_cell(*j[1:]), jobs))
    else:
        vals = [_solve_cell(*j[1:]) for j in jobs]
    return {key: val for (key, *_), val in zip(jobs, vals)}


def run_table2(config: ExperimentConfig | None = None) -> dict:
    """l2 relative errors ||u_hr - u_h||_2 / ||f||_2 over the (h, alpha, k) grid."""
    config = config or ExperimentConfig()
    results = _grid_results(config, config.rhs)
    table = {key: val[0] for key, val in results.items()}
    out = _ensure_outdir(config)
    if out is not None:
        header = ["h"] + [f"alpha{alpha}_k{k}" for alpha in config.alphas for k in config.ks]
        rows = []
        for mexp, h, _ in _mesh_cells(config):
            rows.append([f"2^-{mexp}"] + [table[(mexp, alpha, k)] for alpha in config.alphas for k in config.ks])
        _write_csv(out / "table2.csv", header, rows)
        _write_manifest(out, config, "table2", ["table2.csv"])
    return table


def run_figures(config: ExperimentConfig | None = None) -> dict:
    """Data bundles for the three figure families.

    fig1: test data f1, f2 and their exact fractional solutions on the finest
    mesh.  fig2: rational approximations of the solution on f1 for every k at
    the finest mesh, against the oracle.  fig3: the l2/energy error quotient
    versus h (one column per k), whose log-log slope is -2(1-alpha).
    """
    config = config or ExperimentConfig()
    finest = max(config.mesh_exponents)
    n_fine = 2**finest - 1
    h_fine = 2.0**-finest
    a_fine = laplacian_1d(n_fine)
    eig = decompose(a_fine)
    x = grid_nodes(n_fine)
    f1 = build_rhs(RhsSpec(kind="f1"), n_fine)
    f2 = build_rhs(RhsSpec(kind="f2"), n_fine)
    bundle: dict = {"x": x, "f1": f1, "f2": f2}
    files = []
    out = _ensure_outdir(config)

    fig1_cols = {"x": x, "f1": f1, "f2": f2}
    for alpha in config.alphas:
        su = (h_fine / 2.0) ** (2.0 * alpha)
        fig1_cols[f"uh_f1_alpha{alpha}"] = su * eig.apply_power(-alpha, f1)
        fig1_cols[f"uh_f2_alpha{alpha}"] = su * eig.apply_power(-alpha, f2)
    bundle["fig1"] = fig1_cols
    if out is not None:
        _write_csv(
            out / "fig1.csv",
            list(fig1_cols),
            list(zip(*[col.tolist() for col in fig1_cols.values()])),
        )
        files.append("fig1.csv")

    fig2 = {}
    for alpha in config.alphas:
        su = (h_fine / 2.0) ** (2.0 * alpha)
        cols = {"x": x, "u_exact": su * eig.apply_power(-alpha, f1)}
        for k in config.ks:
            _, pf = get_approximation(alpha, k, beta=config.beta, precision_bits=config.precision_bits)
            cols[f"u_k{k}"] = su * apply_bura_inverse(pf, a_fine, f1).u_r
        fig2[alpha] = cols
        if out is not None:
            name = f"fig2_alpha{alpha}.csv"
            _write_csv(out / name, list(cols), list(zip(*[c.tolist() for c in cols.values()])))
            files.append(name)
    bundle["fig2"] = fig2

    results = _grid_results(config, RhsSpec(kind="f1"))
    fig3 = {}
    for alpha in config.alphas:
        hs = np.array([h for _, h, _ in _mesh_cells(config)])
        cols = {"h": hs}
        for k in config.ks:
            cols[f"ratio_k{k}"] = np.array([results[(mexp, alpha, k)][2] for mexp, _, _ in _mesh_cells(config)])
        fig3[alpha] = cols
        if out is not None:
            name = f"fig3_alpha{alpha}.csv"
            _write_csv(out / name, list(cols), list(zip(*[c.tolist() for c in cols.values()])))
            files.append(name)
    bundle["fig3"] = fig3

    if out is not None:
        _write_manifest(out, config, "figures", files)
    return bundle


def fit_loglog_slope(hs: np.ndarray, values: np.ndarray) -> float:
    """Least-squares slope of log2(values) against log2(h)."""
    mask = values > 0
    coeffs = np.polyfit(np.log2(hs[mask]), np.log2(values[mask]), 1)
    return float(coeffs[0])


def mesh_l2_error_bound(alpha: float, k: int, h: float) -> float:
    """Mesh-dependent envelope (4/h)^(2(1-alpha)) |sin(pi(1-alpha))| e^(-2 pi sqrt((1-alpha)k))."""
    om = 1.0 - alpha
    return (4.0 / h) ** (2.0 * om) * abs(np.sin(np.pi * om)) * float(np.exp(-2.0 * np.pi * np.sqrt(om * k)))
