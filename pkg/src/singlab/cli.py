"""Command-line harness: ``singlab <subcommand> ...``.

Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.
Artifacts go to ``--out``, else ``$SINGLAB_OUT``, else ``./singlab_out``.
"""
from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml
from scipy.special import iv

from . import __version__
from .growth import (admissible_window, dirac_admissible, exponential_orders,
                     parse_nonlinearity, subcritical_check)
from .pde import (BoundaryMeasure, GridMode, PolarGrid, SolverError, SolverOptions,
                  solve_nonlinear)
from .pde.io import config_hash, read_solution, versions, write_solution
from .pde.measure import load_density_csv
from .pde.studies import (MonotonicityError, grid_refinement, kernel_estimate,
                          monotone_truncation_sequence, removability_experiment,
                          theorem_d_sequence)
from .pde.weak import mass_balance, weak_residual
from .profile2d import RootBracketError, boundary_residuals, sign_analysis, solve_profile2d
from .profile_nd import (ConvergenceError, IntegrationError, MultipleRootsError, NoSolution,
                         j_energy, residual_nd, shoot_solve, variational_solve)
from .regimes import ProblemParams, critical_exponents
from .singularity import AmbiguousError, characteristic_roots, classify_singularity

NUMERICAL_ERRORS = (SolverError, ConvergenceError, IntegrationError, MultipleRootsError,
                    AmbiguousError, MonotonicityError, RootBracketError)


class ConfigError(ValueError):
    pass


# --------------------------------------------------------------------------
# configuration

SCHEMA = {
    "subcommand": None,
    "problem": {"N": None, "p": None},
    "g": None,
    "measure": {"atoms": None, "uniform_density": None, "density_file": None,
                "epsilon": None, "epsilon_spacings": None},
    "grid": {"mode": None, "n_r": None, "n_ang": None},
    "solver": {"tol": None, "max_iter": None, "damping": None},
    "output": {"directory": None, "format": None},
    "study": {"kind": None, "sizes": None, "eps_list": None, "eps_spacings": None,
              "levels": None, "probe_distances": None, "point": None, "weight": None},
}

DEFAULTS = {
    "grid": {"mode": "disk", "n_r": 64, "n_ang": 64},
    "solver": {"tol": 1e-10, "max_iter": 200, "damping": 1.0},
    "output": {"directory": None, "format": "json"},
}

MODES = {"disk": GridMode.DISK_2D, "ball": GridMode.BALL_3D_AXISYMMETRIC,
         "DISK_2D": GridMode.DISK_2D, "BALL_3D_AXISYMMETRIC": GridMode.BALL_3D_AXISYMMETRIC}


def _check_keys(data, schema, where=""):
    if not isinstance(data, dict):
        raise ConfigError(f"section {where or '<root>'} must be a mapping")
    for key, val in data.items():
        if key not in schema:
            raise ConfigError(f"unknown key {where + key!r}")
        if isinstance(schema[key], dict) and val is not None:
            _check_keys(val, schema[key], f"{where}{key}.")


def _merge(base: dict, extra: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in extra.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = val
    return out


def _apply_override(cfg: dict, text: str) -> None:
    key, sep, raw = text.partition("=")
    if not sep:
        raise ConfigError(f"override {text!r} is not key=value")
    parts = key.strip().split(".")
    node = cfg
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override {key!r} descends into a scalar")
    node[parts[-1]] = yaml.safe_load(raw)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    raw: dict  # fully merged, validated mapping; hashed into every artifact
    params: ProblemParams | None
    g_spec: str | None
    measure: BoundaryMeasure | None
    grid: PolarGrid | None
    solver: SolverOptions
    out_dir: Path
    fmt: str

    @property
    def hash(self) -> str:
        return config_hash(self.raw)


def _float_list(val, name):
    if val is None:
        return None
    if not isinstance(val, list) or not val:
        raise ConfigError(f"{name} must be a non-empty list")
    try:
        return [float(v) for v in val]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def load_config(path: str | Path | None, subcommand: str, overrides=(), base_dir=None,
                cli_out: str | None = None) -> RunConfig:
    data = {}
    if path is not None:
        try:
            data = yaml.safe_load(Path(path).read_text()) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        base_dir = Path(path).resolve().parent
    _check_keys(data, SCHEMA)
    cfg = _merge(DEFAULTS, data)
    for text in overrides:
        _apply_override(cfg, text)
    _check_keys(cfg, SCHEMA)
    if cfg.get("subcommand") not in (None, subcommand):
        raise ConfigError(f"config is for {cfg['subcommand']!r}, not {subcommand!r}")
    cfg["subcommand"] = subcommand

    try:
        prob = cfg.get("problem") or {}
        params = None
        if prob.get("N") is not None or prob.get("p") is not None:
            params = ProblemParams(prob["N"], float(prob["p"]))
        gd = cfg["grid"]
        if gd["mode"] not in MODES:
            raise ConfigError(f"grid.mode must be 'disk' or 'ball', got {gd['mode']!r}")
        grid = PolarGrid(MODES[gd["mode"]], int(gd["n_r"]), int(gd["n_ang"]))
        if params is not None and params.N != grid.dim:
            raise ConfigError(f"problem.N = {params.N} but the {gd['mode']} grid is {grid.dim}-D")
        g_spec = cfg.get("g")
        if g_spec is None and params is not None:
            g_spec = f"pow:{params.p!r}"
        if g_spec is not None:
            parse_nonlinearity(str(g_spec))
        so = cfg["solver"]
        solver = SolverOptions(tol=float(so["tol"]), max_iter=int(so["max_iter"]),
                               damping=float(so["damping"]))
        if not (solver.tol > 0 and solver.max_iter > 0 and 0 < solver.damping <= 1):
            raise ConfigError("solver needs tol > 0, max_iter > 0 and 0 < damping <= 1")
        measure = _build_measure(cfg.get("measure"), grid, base_dir)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc

    fmt = cfg["output"]["format"]
    if fmt not in ("json", "binary"):
        raise ConfigError(f"output.format must be 'json' or 'binary', got {fmt!r}")
    out_dir = _output_dir(cli_out, cfg["output"]["directory"])
    return RunConfig(subcommand, cfg, params, g_spec, measure, grid, solver, out_dir, fmt)


def _build_measure(spec, grid: PolarGrid, base_dir) -> BoundaryMeasure | None:
    if spec is None:
        return None
    atoms = []
    for a in spec.get("atoms") or []:
        if not isinstance(a, dict) or set(a) - {"theta", "weight"}:
            raise ConfigError("atoms are mappings with keys theta and weight")
        atoms.append((float(a["theta"]), float(a["weight"])))
    density = None
    if spec.get("uniform_density") is not None and spec.get("density_file") is not None:
        raise ConfigError("give either uniform_density or density_file, not both")
    if spec.get("uniform_density") is not None:
        density = float(spec["uniform_density"])
    if spec.get("density_file") is not None:
        fpath = Path(spec["density_file"])
        if not fpath.is_absolute() and base_dir is not None:
            fpath = Path(base_dir) / fpath
        density = load_density_csv(fpath)
    if spec.get("epsilon") is not None and spec.get("epsilon_spacings") is not None:
        raise ConfigError("give either epsilon or epsilon_spacings, not both")
    eps = 0.0
    if spec.get("epsilon") is not None:
        eps = float(spec["epsilon"])
    elif spec.get("epsilon_spacings") is not None:
        eps = float(spec["epsilon_spacings"]) * grid.boundary_spacing
    label = str(spec["density_file"]) if spec.get("density_file") else ""
    return BoundaryMeasure(atoms, density, eps, label)


def _output_dir(cli_out, cfg_dir) -> Path:
    if cli_out:
        return Path(cli_out)
    env = os.environ.get("SINGLAB_OUT")
    if env:
        return Path(env)
    return Path(cfg_dir) if cfg_dir else Path("singlab_out")


# --------------------------------------------------------------------------
# artifacts

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if v is None:
        return ""
    return str(v)


def write_csv(path: Path, columns: list[str], rows: list, cfg_hash: str) -> Path:
    buf = io.StringIO()
    buf.write(f"# {json.dumps(versions(), sort_keys=True)}\n")
    buf.write(f"# config_hash {cfg_hash}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buf.getvalue())
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_json(path: Path, payload: dict, cfg_hash: str) -> Path:
    body = {"versions": versions(), "config_hash": cfg_hash, **_jsonable(payload)}
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")
    return path


def _params_or_usage(N, p) -> ProblemParams:
    try:
        return ProblemParams(N, p)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# --------------------------------------------------------------------------
# subcommands

def cmd_exponents(args) -> int:
    params = _params_or_usage(args.N, args.p)
    crit = critical_exponents(params)
    rows = []
    for delta in args.delta:
        if delta < 0:
            raise ConfigError("delta must be >= 0")
        cr = characteristic_roots(params.N, params.p, delta)
        rows.append([crit.N, crit.p, crit.ell, crit.p_low, crit.p_high, crit.regime.value,
                     delta, cr.xi1, cr.xi2, cr.theta1, cr.theta2])
    cols = ["N", "p", "ell", "p_low", "p_high", "regime", "delta", "xi1", "xi2",
            "theta1", "theta2"]
    h = config_hash({"subcommand": "exponents", "N": params.N, "p": params.p,
                     "delta": list(args.delta)})
    path = write_csv(_output_dir(args.out, None) / "exponents.csv", cols, rows, h)
    print(",".join(cols))
    for row in rows:
        print(",".join(_fmt(v) for v in row))
    print(f"wrote {path}")
    return 0


def cmd_profile(args) -> int:
    params = _params_or_usage(args.N, args.p)
    out = _output_dir(args.out, None)
    h = config_hash({"subcommand": "profile", "N": params.N, "p": params.p,
                     "method": args.method, "grid_size": args.grid_size, "steps": args.steps})
    if params.N == 2:
        sols = solve_profile2d(params.p)
        payload = {"N": 2, "p": params.p, "profiles": []}
        for prof in sols:
            entry = {"a": prof.a, "b": prof.b}
            if not prof.is_zero:
                entry["boundary_residuals"] = list(boundary_residuals(prof))
                sa = sign_analysis(prof)
                entry["sign"] = sa.pattern.value
                entry["crossings"] = list(sa.crossings)
            payload["profiles"].append(entry)
            print(f"a = {prof.a:.17g}  b = {prof.b:.17g}")
        if len(sols) == 1:
            print("only the zero profile exists")
        print(f"wrote {write_json(out / 'profile2d.json', payload, h)}")
        return 0

    results = {}
    if args.method in ("shoot", "both"):
        results["shoot"] = shoot_solve(params, steps=args.steps)
    if args.method in ("variational", "both"):
        results["variational"] = variational_solve(params, grid_size=args.grid_size)
    rows = []
    for name, res in results.items():
        if isinstance(res, NoSolution):
            print(f"{name}: NO_SOLUTION ({res.reason})")
            write_json(out / f"profile_{name}.json", res.to_dict(), h)
            rows.append([name, "NO_SOLUTION", math.nan, math.nan, math.nan, math.nan, math.nan])
            continue
        interior, bnd = residual_nd(res)
        energy = j_energy(res.resample(args.grid_size)).total
        print(f"{name}: alpha = {res.alpha:.17g}  sup = {res.sup_norm:.6g}  "
              f"interior residual = {interior:.3e}  boundary residual = {bnd:.3e}  J = {energy:.6g}")
        write_json(out / f"profile_{name}.json", res.to_dict(), h)
        rows.append([name, "PROFILE", res.alpha, res.sup_norm, interior, bnd, energy])
    cols = ["method", "result", "alpha", "sup_norm", "interior_residual", "boundary_residual",
            "energy"]
    if len(results) == 2 and not any(isinstance(r, NoSolution) for r in results.values()):
        a = results["shoot"].resample(args.grid_size).values
        b = results["variational"].values
        diff = float(np.max(np.abs(a - b)))
        print(f"sup |shoot - variational| on {args.grid_size + 1} nodes = {diff:.3e}")
        rows.append(["difference", "", math.nan, diff, math.nan, math.nan, math.nan])
    print(f"wrote {write_csv(out / 'profile_residuals.csv', cols, rows, h)}")
    return 0


def _bessel_oracle(cfg: RunConfig) -> float | None:
    """Centre value for g = 0 with uniform flux m on the unit disk or ball."""
    m = cfg.measure
    if cfg.g_spec != "zero" or m is None or m.atoms or m.density is None or np.ndim(m.density):
        return None
    if cfg.grid.dim == 2:
        return float(m.density) / float(iv(1, 1.0))
    return float(m.density) / (math.cosh(1.0) - math.sinh(1.0))


def cmd_solve(args) -> int:
    cfg = load_config(args.config, "solve", args.set, cli_out=args.out)
    if cfg.g_spec is None:
        raise ConfigError("solve needs g or problem.p")
    if cfg.measure is None:
        raise ConfigError("solve needs a measure section")
    g = parse_nonlinearity(cfg.g_spec)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    try:
        sol = solve_nonlinear(g, cfg.measure, cfg.grid, cfg.solver, cfg.params)
    except SolverError as exc:
        hist = write_csv(out / "residual_history.csv", ["iteration", "residual"],
                         list(enumerate(exc.history)), cfg.hash)
        print(f"solver failed: {exc}; history in {hist}", file=sys.stderr)
        return 1
    ext = "json" if cfg.fmt == "json" else "bin"
    spath = write_solution(sol, out / f"solution.{ext}", cfg.fmt, cfg.raw)
    mb = mass_balance(sol)
    wr = weak_residual(sol)
    report = {"iterations": sol.iterations, "final_residual": sol.final_residual,
              "center": sol.center, "weak_residual": wr,
              "mass_balance": {"interior": mb.interior, "boundary": mb.boundary,
                               "data": mb.data, "relative_error": mb.relative_error}}
    oracle = _bessel_oracle(cfg)
    if oracle is not None:
        report["bessel_oracle_center"] = oracle
        report["center_relative_error"] = abs(sol.center - oracle) / abs(oracle)
    write_json(out / "report.json", report, cfg.hash)
    print(f"mass balance: interior {mb.interior:.10g} + boundary {mb.boundary:.10g} = "
          f"{mb.lhs:.10g} vs data {mb.data:.10g} (relative error {mb.relative_error:.3e})")
    print(f"weak residual {wr:.3e}; {sol.iterations} iterations; centre value {sol.center:.10g}")
    if oracle is not None:
        print(f"Bessel oracle centre value {oracle:.10g}")
    print(f"wrote {spath}")
    return 0


def cmd_classify(args) -> int:
    try:
        sol = read_solution(args.solution)
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"cannot read {args.solution}: {exc}") from exc
    if args.p is not None:
        params = _params_or_usage(sol.grid.dim, args.p)
    elif sol.params is not None:
        params = sol.params
    else:
        raise ConfigError("the solution file carries no exponent; pass --p")
    window = tuple(args.window) if args.window else None
    rep = classify_singularity(sol, args.point, params, window=window)
    h = config_hash({"subcommand": "classify", "solution": Path(args.solution).name,
                     "point": args.point, "window": window, "p": params.p})
    print(f"class {rep.cls.value}  constant {rep.constant:.10g}  exponent "
          f"{rep.fitted_exponent:.6g}  residual {rep.fit_residual:.3e}")
    print(f"wrote {write_json(_output_dir(args.out, None) / 'classification.json', rep.to_dict(), h)}")
    return 0


def _eps_list(study: dict, grid: PolarGrid, default=None):
    eps = _float_list(study.get("eps_list"), "study.eps_list")
    if eps is None:
        sp = _float_list(study.get("eps_spacings"), "study.eps_spacings")
        if sp is not None:
            eps = [s * grid.boundary_spacing for s in sp]
    if eps is None:
        eps = default
    if eps is None:
        raise ConfigError("study needs eps_list or eps_spacings")
    return eps


def cmd_study(args) -> int:
    cfg = load_config(args.config, "study", args.set, cli_out=args.out)
    study = cfg.raw.get("study") or {}
    kind = args.kind or study.get("kind")
    if kind not in ("grid", "epsilon", "truncation", "removability", "kernel"):
        raise ConfigError(f"unknown study kind {kind!r}")
    out = cfg.out_dir
    grid = cfg.grid

    if kind == "grid":
        sizes = [int(s) for s in (_float_list(study.get("sizes"), "study.sizes") or [32, 64, 128])]
        dens = 1.0
        if cfg.measure is not None and cfg.measure.density is not None:
            dens = float(cfg.measure.density)
        rows = [[r.n, r.value, r.difference, r.ratio]
                for r in grid_refinement(grid.mode, sizes, dens)]
        cols = ["n", "center", "difference", "ratio"]
    elif kind == "kernel":
        point = float(study.get("point") or 0.0)
        weight = float(study.get("weight") or 1.0)
        fit = kernel_estimate(grid, point, _eps_list(study, grid, [2 * grid.boundary_spacing]),
                              weight)
        rows = [[pt.epsilon, pt.value, fit.expected, pt.window[0], pt.window[1]]
                for pt in fit.points]
        cols = ["epsilon", "estimate", "expected", "r_min", "r_max"]
    else:
        if cfg.measure is None:
            raise ConfigError(f"study {kind} needs a measure section")
        if kind == "epsilon":
            g = parse_nonlinearity(cfg.g_spec)
            res = theorem_d_sequence(g, cfg.measure, grid, _eps_list(study, grid), cfg.solver)
            diffs = res.l1_differences + [math.nan]
            rows = [[e, s.center, d, s.iterations]
                    for e, s, d in zip(res.epsilons, res.solutions, diffs)]
            cols = ["epsilon", "center", "l1_diff_to_next", "iterations"]
        elif kind == "truncation":
            if cfg.params is None:
                raise ConfigError("truncation study needs problem.p")
            levels = _float_list(study.get("levels"), "study.levels") or [0.25, 0.5, 1, 2, 4, 8]
            res = monotone_truncation_sequence(cfg.params.p, cfg.measure, grid, levels, cfg.solver)
            rows = []
            prev = None
            for k, s in zip(res.levels, res.solutions):
                inc = math.nan if prev is None else float(np.max(s.values - prev.values))
                viol = 0 if prev is None else int(np.sum(s.values - prev.values > 1e-10))
                rows.append([k, float(s.values.max()), float(s.values.min()), inc, viol,
                             float(np.max(s.values - res.linear.values))])
                prev = s
            cols = ["level", "max", "min", "max_increase", "violations", "excess_over_linear"]
        else:
            if cfg.params is None:
                raise ConfigError("removability study needs problem.p")
            probes = _float_list(study.get("probe_distances"), "study.probe_distances") or \
                [0.05, 0.1, 0.2]
            weight = float(study.get("weight") or 1.0)
            res = removability_experiment(cfg.params.p, grid, weight, _eps_list(study, grid),
                                          probes, cfg.solver)
            rows = [[r.epsilon, *r.probes, r.iterations] for r in res]
            cols = ["epsilon", *[f"u_at_{d:g}" for d in probes], "iterations"]
    path = write_csv(out / f"study_{kind}.csv", cols, rows, cfg.hash)
    print(",".join(cols))
    for row in rows:
        print(",".join(_fmt(v) for v in row))
    print(f"wrote {path}")
    return 0


def cmd_growth(args) -> int:
    try:
        g = parse_nonlinearity(args.g)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.N < 2:
        raise ConfigError("N must be >= 2")
    payload = {"g": g.spec, "N": args.N}
    if args.N >= 3:
        ok, est = subcritical_check(g, args.N)
        payload.update(subcritical=ok, integral_estimate=est)
        print(f"subcritical in dimension {args.N}: {ok} (integral estimate {est:.6g})")
    a_plus, a_minus = exponential_orders(g)
    lo, hi = admissible_window(g)
    payload.update(a_plus=a_plus, a_minus=a_minus, window=[lo, hi])
    print(f"exponential orders a+ = {a_plus:.6g}, a- = {a_minus:.6g}; "
          f"admissible Dirac weights [{lo:.6g}, {hi:.6g}]")
    if args.weights:
        adm = dirac_admissible(g, args.weights)
        payload["weights"] = [{"weight": w, "admissible": a} for w, a in zip(args.weights, adm)]
        for w, a in zip(args.weights, adm):
            print(f"  weight {w:.6g}: {'admissible' if a else 'not admissible'}")
    h = config_hash({"subcommand": "growth", "g": g.spec, "N": args.N,
                     "weights": list(args.weights or [])})
    print(f"wrote {write_json(_output_dir(args.out, None) / 'growth.json', payload, h)}")
    return 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="singlab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"singlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output directory (overrides config and SINGLAB_OUT)")
        return p

    p = common(sub.add_parser("exponents", help="critical exponents and characteristic roots"))
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--delta", type=float, nargs="+", default=[0.0])
    p.set_defaults(func=cmd_exponents)

    p = common(sub.add_parser("profile", help="separable profile on the hemisphere"))
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--method", choices=["shoot", "variational", "both"], default="both")
    p.add_argument("--grid-size", type=int, default=400)
    p.add_argument("--steps", type=int, default=10000)
    p.set_defaults(func=cmd_profile)

    for name, func, hlp in (("solve", cmd_solve, "grid solve from a YAML config"),
                            ("study", cmd_study, "convergence and order studies")):
        p = common(sub.add_parser(name, help=hlp))
        p.add_argument("config", nargs="?", help="YAML run configuration")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config entry, e.g. grid.n_r=128")
        if name == "study":
            p.add_argument("--kind",
                           choices=["grid", "epsilon", "truncation", "removability", "kernel"])
        p.set_defaults(func=func)

    p = common(sub.add_parser("classify", help="classify a boundary singularity"))
    p.add_argument("solution", help="solution file written by 'singlab solve'")
    p.add_argument("--point", type=float, default=0.0, help="boundary angle of the point")
    p.add_argument("--window", type=float, nargs=2, metavar=("R_MIN", "R_MAX"))
    p.add_argument("--p", type=float, help="exponent, if not recorded in the file")
    p.set_defaults(func=cmd_classify)

    p = common(sub.add_parser("growth", help="growth analysis of a nonlinearity"))
    p.add_argument("--g", required=True, help="pow:<p>, exp:<a>, trunc:<inner>:<level>, "
                                              "table:<csv> or zero")
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--weights", type=float, nargs="*")
    p.set_defaults(func=cmd_growth)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"singlab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except NUMERICAL_ERRORS as exc:
        print(f"singlab {args.command}: numerical failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:  # invalid inputs detected inside the library
        print(f"singlab {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
