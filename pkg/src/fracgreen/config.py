"""Run-configuration loading for the command-line tools.

Configs are single JSON objects, validated fail-closed: any key the schema
does not know is an error naming the offending path, so a typo can never
silently fall back to a default.  The minimal valid config is
``{"n": 3, "alpha": 1.0}``; everything else has documented defaults (see
docs/formats.md).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, ParameterError
from .params import ModelParams
from .solver import SolveOptions
from .verify import SUITE_NAMES


@dataclass(frozen=True)
class Config:
    model: ModelParams
    ball_radial: int
    ball_angular: int
    slab_counts: tuple
    jacobi_nodes: int
    adaptive_tol: float
    solver: SolveOptions
    sweep_lambda_min: float
    sweep_lambda_max: float
    sweep_count: int
    sweep_side: str
    sweep_axes: tuple
    suites: tuple          # (name, sample_count or None) pairs
    seed: int
    output_dir: str

    def lambda_grid(self) -> np.ndarray:
        return np.linspace(self.sweep_lambda_min, self.sweep_lambda_max,
                           self.sweep_count)

    def with_overrides(self, seed=None, output_dir=None) -> "Config":
        out = self
        if seed is not None:
            out = replace(out, seed=int(seed))
        if output_dir is not None:
            out = replace(out, output_dir=str(output_dir))
        return out


def _reject_unknown(block: dict, allowed, path: str):
    unknown = sorted(set(block) - set(allowed))
    if unknown:
        where = [f"{path}.{k}" if path else k for k in unknown]
        raise ConfigError("unknown config key(s): " + ", ".join(where))


def _get(block, key, kind, path, default=None, required=False):
    if key not in block:
        if required:
            raise ConfigError(f"missing required config key: {path}")
        return default
    val = block[key]
    if kind is float and isinstance(val, int) and not isinstance(val, bool):
        val = float(val)
    if not isinstance(val, kind) or isinstance(val, bool):
        raise ConfigError(f"{path} must be of type {kind.__name__}")
    return val


def _positive_int(block, key, path, default, floor=1):
    v = _get(block, key, int, path, default=default)
    if v < floor:
        raise ConfigError(f"{path} must be >= {floor}")
    return v


def load_config(path) -> Config:
    """Parse and validate a JSON config file into a Config."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}")
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    _reject_unknown(raw, ("n", "alpha", "p", "grid", "quad", "solver",
                          "sweep", "suites", "seed", "output_dir"), "")

    n = _get(raw, "n", int, "n", required=True)
    alpha = _get(raw, "alpha", float, "alpha", required=True)
    p = _get(raw, "p", float, "p")
    try:
        model = ModelParams(n, alpha, p=p)
    except ParameterError as e:
        # ModelParams already names the offending field
        raise ConfigError(str(e))

    grid = _get(raw, "grid", dict, "grid", default={})
    _reject_unknown(grid, ("ball_radial", "ball_angular", "slab_counts"),
                    "grid")
    ball_radial = _positive_int(grid, "ball_radial", "grid.ball_radial",
                                16, floor=2)
    ball_angular = _positive_int(grid, "ball_angular", "grid.ball_angular",
                                 72, floor=2)
    slab_counts = grid.get("slab_counts", [8] * (n - 1) + [16])
    if (not isinstance(slab_counts, list) or len(slab_counts) != n
            or not all(isinstance(c, int) and not isinstance(c, bool)
                       and c >= 2 for c in slab_counts)):
        raise ConfigError(
            f"grid.slab_counts must be a list of {n} integers >= 2")

    quad = _get(raw, "quad", dict, "quad", default={})
    _reject_unknown(quad, ("jacobi_nodes", "adaptive_tol"), "quad")
    jacobi_nodes = _positive_int(quad, "jacobi_nodes", "quad.jacobi_nodes",
                                 48, floor=4)
    adaptive_tol = _get(quad, "adaptive_tol", float, "quad.adaptive_tol",
                        default=1e-12)
    if not (0.0 < adaptive_tol <= 1e-2):
        raise ConfigError("quad.adaptive_tol must lie in (0, 1e-2]")

    sol = _get(raw, "solver", dict, "solver", default={})
    _reject_unknown(sol, ("max_iter", "tol", "damping", "init"), "solver")
    init = _get(sol, "init", str, "solver.init", default="flat")
    if init not in ("flat", "bump"):
        raise ConfigError("solver.init must be 'flat' or 'bump'")
    try:
        solver_opts = SolveOptions(
            max_iter=_positive_int(sol, "max_iter", "solver.max_iter", 300),
            tol=_get(sol, "tol", float, "solver.tol", default=1e-11),
            damping=_get(sol, "damping", float, "solver.damping", default=0.5),
            init=init)
    except ParameterError as e:
        raise ConfigError(f"solver: {e}")

    sweep = _get(raw, "sweep", dict, "sweep", default={})
    _reject_unknown(sweep, ("lambda_min", "lambda_max", "count", "side",
                            "axes"), "sweep")
    lam_lo = _get(sweep, "lambda_min", float, "sweep.lambda_min", default=-0.9)
    lam_hi = _get(sweep, "lambda_max", float, "sweep.lambda_max", default=0.0)
    if not lam_lo < lam_hi:
        raise ConfigError("sweep.lambda_min must be below sweep.lambda_max")
    count = _positive_int(sweep, "count", "sweep.count", 32, floor=2)
    side = _get(sweep, "side", str, "sweep.side", default="low")
    if side not in ("low", "high"):
        raise ConfigError("sweep.side must be 'low' or 'high'")
    axes = sweep.get("axes", list(range(n)))
    if (not isinstance(axes, list) or len(axes) == 0
            or len(set(axes)) != len(axes)
            or not all(isinstance(a, int) and not isinstance(a, bool)
                       and 0 <= a < n for a in axes)):
        raise ConfigError(f"sweep.axes must be distinct integers in [0, {n})")

    if "suites" in raw:
        suites_raw = _get(raw, "suites", list, "suites")
        suites = []
        for i, entry in enumerate(suites_raw):
            where = f"suites[{i}]"
            if not isinstance(entry, dict):
                raise ConfigError(f"{where} must be an object")
            _reject_unknown(entry, ("name", "samples"), where)
            name = _get(entry, "name", str, f"{where}.name", required=True)
            if name not in SUITE_NAMES:
                raise ConfigError(f"{where}.name: unknown suite {name!r}; "
                                  "valid: " + ", ".join(SUITE_NAMES))
            if name == "symmetry" and model.p is None:
                raise ConfigError(f"{where}.name: the symmetry suite "
                                  "requires the config to set p")
            samples = entry.get("samples")
            if samples is not None and (not isinstance(samples, int)
                                        or isinstance(samples, bool)
                                        or samples < 1):
                raise ConfigError(f"{where}.samples must be an integer >= 1")
            suites.append((name, samples))
        suites = tuple(suites)
    else:
        # default: every suite at its own default budget; the symmetry suite
        # needs the nonlinearity, so it joins only when p is configured
        suites = tuple((name, None) for name in SUITE_NAMES
                       if name != "symmetry" or model.p is not None)

    seed = _get(raw, "seed", int, "seed", default=0)
    output_dir = _get(raw, "output_dir", str, "output_dir", default="out")
    if not output_dir:
        raise ConfigError("output_dir must be a non-empty path")

    return Config(model=model, ball_radial=ball_radial,
                  ball_angular=ball_angular, slab_counts=tuple(slab_counts),
                  jacobi_nodes=jacobi_nodes, adaptive_tol=adaptive_tol,
                  solver=solver_opts, sweep_lambda_min=float(lam_lo),
                  sweep_lambda_max=float(lam_hi), sweep_count=count,
                  sweep_side=side, sweep_axes=tuple(axes), suites=suites,
                  seed=seed, output_dir=output_dir)
