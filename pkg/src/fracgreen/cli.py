"""Command-line front end.

    fracgreen <command> --config <path> [--seed N] [--out DIR]

Commands:
    kernel-eval     tabulate the kernel and its constants on a log grid
    solve-ball      positive solution of the power nonlinearity on the ball
    moving-plane    reflection sweeps of the solved field along each axis
    liouville-scan  exponent-cascade table over the subcritical range
    verify          run the configured machine-check suites
    all             verify, solve-ball, moving-plane, liouville-scan in order

Exit codes: 0 success, 1 check violations / solver non-convergence /
runtime failure, 2 bad usage or bad config.  Diagnostics go to stderr;
result files go to the output directory.  Identical config and seed
produce byte-identical data files; wall-clock timing appears only in
summary.csv (the one file excluded from that guarantee).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .config import Config, load_config
from .errors import ConfigError, FracGreenError, UsageError
from .grids import ball_grid
from .kernel import green_constants, green_values, kernel_bracket
from .ops import pv_constant
from .params import ModelParams
from .solver import liouville_cascade, moving_plane_sweep, nonlinear_power_solve
from .verify import DEFAULT_SAMPLES, run_suite

COMMANDS = ("kernel-eval", "solve-ball", "moving-plane", "liouville-scan",
            "verify", "all")


def _fmt(x) -> str:
    """Shortest round-trip decimal form; stable across runs."""
    return format(float(x), ".17g")


def _clean(obj):
    # JSON-safe copy: tuples/arrays to lists, non-finite floats to strings
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_clean(obj), fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def write_field_csv(path, points, values):
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float)
    dim = points.shape[1]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(f"x{i + 1}" for i in range(dim)) + ",value\n")
        for row, v in zip(points, values):
            fh.write(",".join(_fmt(c) for c in row) + f",{_fmt(v)}\n")


def write_sweep_csv(path, report):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("lambda,min_w,violations\n")
        for lam, mw, viol in zip(report.lambda_values, report.min_w,
                                 report.violation_counts):
            fh.write(f"{_fmt(lam)},{_fmt(mw)},{int(viol)}\n")


def write_summary_csv(path, reports):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("suite,violations,worst_margin,runtime_ms\n")
        for rep in reports:
            fh.write(f"{rep.suite},{rep.violations},"
                     f"{_fmt(rep.worst_margin)},{_fmt(rep.runtime_ms)}\n")


def _eprint(msg):
    print(msg, file=sys.stderr)


def _cmd_kernel_eval(cfg: Config) -> int:
    params = cfg.model
    con = green_constants(params)
    grid = np.logspace(-3.0, 3.0, 13)
    rows = []
    for s in grid:
        ss = np.full(grid.size, s)
        g = green_values(ss, grid, params, m=cfg.jacobi_nodes)
        br = kernel_bracket(ss, grid, params, m=cfg.jacobi_nodes)
        rows.extend((s, t, b, gv) for t, b, gv in zip(grid, br, g))
    path = os.path.join(cfg.output_dir, "kernel.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("s,t,bracket,green\n")
        for s, t, b, gv in rows:
            fh.write(f"{_fmt(s)},{_fmt(t)},{_fmt(b)},{_fmt(gv)}\n")
    write_json(os.path.join(cfg.output_dir, "constants.json"),
               {"n": params.n, "alpha": params.alpha, "A": con.A, "B": con.B,
                "pv_constant": pv_constant(params)})
    _eprint(f"[kernel-eval] wrote {len(rows)} kernel samples to {path}")
    return 0


def _require_p(cfg: Config, cmd: str) -> float:
    if cfg.model.p is None:
        raise ConfigError(f"{cmd} requires the config to set p")
    return cfg.model.p


def _solve(cfg: Config, cmd: str):
    p = _require_p(cfg, cmd)
    grid = ball_grid(cfg.model, cfg.ball_radial, cfg.ball_angular)
    return grid, nonlinear_power_solve(grid, p, cfg.solver, cfg.model)


def _cmd_solve_ball(cfg: Config) -> int:
    grid, res = _solve(cfg, "solve-ball")
    write_field_csv(os.path.join(cfg.output_dir, "solution.csv"),
                    grid.points, res.u.values)
    write_json(os.path.join(cfg.output_dir, "solve.json"),
               {"n": cfg.model.n, "alpha": cfg.model.alpha, "p": cfg.model.p,
                "ball_radial": cfg.ball_radial,
                "ball_angular": cfg.ball_angular,
                "lambda_star": res.lambda_star, "iterations": res.iters,
                "residual": res.residual,
                "fullgrid_residual": res.fullgrid_residual,
                "stage": res.stage})
    _eprint(f"[solve-ball] residual={res.residual:.3e} "
            f"lambda*={res.lambda_star:.6g} iters={res.iters}")
    return 0


def _cmd_moving_plane(cfg: Config) -> int:
    grid, res = _solve(cfg, "moving-plane")
    lams = cfg.lambda_grid()
    total_live_violations = 0
    axis_rows = []
    for axis in cfg.sweep_axes:
        rep = moving_plane_sweep(res.u, axis, lams, cfg.model,
                                 side=cfg.sweep_side)
        write_sweep_csv(os.path.join(cfg.output_dir,
                                     f"sweep_axis{axis}.csv"), rep)
        live = ~np.asarray(rep.skipped, dtype=bool)
        viol = int(np.asarray(rep.violation_counts)[live].sum())
        total_live_violations += viol
        axis_rows.append({"axis": axis, "side": rep.side,
                          "lambda0_estimate": rep.lambda0_estimate,
                          "violations": viol,
                          "skipped": int(np.count_nonzero(~live)),
                          "interp_error": rep.interp_error})
        _eprint(f"[moving-plane] axis {axis}: violations={viol} "
                f"lambda0={rep.lambda0_estimate:.4g}")
    write_json(os.path.join(cfg.output_dir, "sweeps.json"),
               {"side": cfg.sweep_side, "lambda_count": cfg.sweep_count,
                "axes": axis_rows})
    return 1 if total_live_violations else 0


def _cmd_liouville_scan(cfg: Config) -> int:
    rep = run_suite("liouville", cfg.model, seed=cfg.seed)
    d = rep.as_dict()
    d.pop("runtime_ms", None)
    write_json(os.path.join(cfg.output_dir, "liouville.json"), d)

    steps = DEFAULT_SAMPLES["liouville"]
    path = os.path.join(cfg.output_dir, "liouville.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("n,alpha,p,m_min,tau,f,fprime\n")
        for n in (3, 4, 5):
            for a in np.linspace(0.2, 1.8, 9):
                tau = (n + a) / (n - a)
                for j in range(1, steps + 1):
                    p = min(1.0 + (tau - 1.0) * j / steps, tau)
                    cas = liouville_cascade(ModelParams(n, a, p=p))
                    fh.write(f"{n},{_fmt(a)},{_fmt(p)},{cas.m_min},"
                             f"{_fmt(cas.tau_p)},{_fmt(cas.f_p)},"
                             f"{_fmt(cas.fprime_p)}\n")
    _eprint(f"[liouville-scan] violations={rep.violations} "
            f"worst={rep.worst_margin:.3e}")
    return 1 if rep.violations else 0


def _cmd_verify(cfg: Config) -> int:
    reports = []
    for name, samples in cfg.suites:
        rep = run_suite(name, cfg.model, sample_count=samples, seed=cfg.seed)
        d = rep.as_dict()
        d.pop("runtime_ms", None)
        write_json(os.path.join(cfg.output_dir, f"suite_{name}.json"), d)
        _eprint(f"[verify] {name}: violations={rep.violations} "
                f"worst_margin={rep.worst_margin:.3e} "
                f"({rep.runtime_ms:.0f} ms)")
        reports.append(rep)
    write_summary_csv(os.path.join(cfg.output_dir, "summary.csv"), reports)
    failed = [r.suite for r in reports if not r.passed]
    if failed:
        _eprint("[verify] FAILED: " + ", ".join(failed))
        return 1
    return 0


def _cmd_all(cfg: Config) -> int:
    for fn in (_cmd_verify, _cmd_solve_ball, _cmd_moving_plane,
               _cmd_liouville_scan):
        rc = fn(cfg)
        if rc:
            return rc
    return 0


_DISPATCH = {"kernel-eval": _cmd_kernel_eval, "solve-ball": _cmd_solve_ball,
             "moving-plane": _cmd_moving_plane,
             "liouville-scan": _cmd_liouville_scan, "verify": _cmd_verify,
             "all": _cmd_all}


def run_command(cmd: str, cfg: Config) -> int:
    """Execute one CLI command against a validated Config.

    Returns the process exit code instead of raising: 2 for usage or
    configuration errors, 1 for any runtime failure or check violation.
    """
    fn = _DISPATCH.get(cmd)
    if fn is None:
        _eprint(f"fracgreen: unknown command {cmd!r}; "
                "valid commands: " + ", ".join(COMMANDS))
        return 2
    try:
        os.makedirs(cfg.output_dir, exist_ok=True)
        if not os.access(cfg.output_dir, os.W_OK):
            raise ConfigError(f"output_dir {cfg.output_dir!r} is not writable")
        return fn(cfg)
    except (UsageError, ConfigError) as e:
        _eprint(f"fracgreen: {e}")
        return 2
    except FracGreenError as e:
        _eprint(f"fracgreen: {e}")
        return 1
    except OSError as e:
        _eprint(f"fracgreen: i/o failure: {e}")
        return 1


def _cap_threads():
    raw = os.environ.get("FRACGREEN_THREADS")
    if not raw:
        return
    try:
        want = max(1, int(raw))
    except ValueError:
        raise ConfigError("FRACGREEN_THREADS must be an integer")
    try:
        import numba
        numba.set_num_threads(min(want, numba.config.NUMBA_NUM_THREADS))
    except ImportError:
        pass


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fracgreen",
        description="kernel tables, ball solves, reflection sweeps and "
                    "check suites for the fractional-Laplacian toolkit")
    ap.add_argument("command", metavar="command", choices=COMMANDS,
                    help="one of: " + ", ".join(COMMANDS))
    ap.add_argument("--config", required=True, metavar="PATH",
                    help="JSON config file")
    ap.add_argument("--seed", type=int, default=None,
                    help="override the config seed")
    ap.add_argument("--out", default=None, metavar="DIR",
                    help="override the config output directory")
    ap.add_argument("--version", action="version",
                    version=f"%(prog)s {__version__}")
    return ap


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = load_config(ns.config).with_overrides(seed=ns.seed,
                                                    output_dir=ns.out)
        _cap_threads()
    except ConfigError as e:
        _eprint(f"fracgreen: {e}")
        return 2
    return run_command(ns.command, cfg)


if __name__ == "__main__":
    sys.exit(main())
