"""Run configuration: validation, defaults, and initial-datum construction.

A config is a plain JSON mapping; validate() normalizes it (fills defaults,
checks every field) and returns the canonical dict that gets hashed into all
outputs. Fourier initial data is validated for convexity on the actual grid
before any stepping, so a bad datum dies with exit code 2 instead of a guard
trip halfway through a run.
"""

import copy
import json
import os

import numpy as np

from .errors import ConfigError
from .grids import make_grid
from .support import SupportField, ellipsoid_support, fourier_support
from .support import curvature_matrix, hessian_eigs

SCHEMES = ("rk4", "heun")

DEFAULTS = {
    "scheme": "rk4",
    "cfl": 0.2,
    "dt_max": 1e-2,
    "t_end": 1.0,
    "snapshot_interval": 0.05,
    "stops": {"extinction_radius": 1e-3, "blowup_radius": 1e3,
              "convexity_floor": 1e-10},
    "seed": 0,
    "output": "run",
    "renormalize": False,
}


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def _positive_real(cfg, key, upper=None):
    v = cfg[key]
    _require(isinstance(v, (int, float)) and np.isfinite(v) and v > 0,
             f"'{key}' must be a positive finite number, got {v!r}")
    if upper is not None:
        _require(v <= upper, f"'{key}' must be <= {upper}, got {v!r}")
    return float(v)


def validate(raw):
    """Normalize and validate a config mapping; returns the canonical dict."""
    _require(isinstance(raw, dict), "config must be a JSON object")
    cfg = copy.deepcopy(raw)
    for key, val in DEFAULTS.items():
        if key == "stops":
            stops = dict(val)
            stops.update(cfg.get("stops", {}))
            cfg["stops"] = stops
        else:
            cfg.setdefault(key, val)

    known = {"n", "resolution", "initial"} | set(DEFAULTS)
    unknown = set(cfg) - known
    _require(not unknown, f"unknown config fields: {sorted(unknown)}")

    _require(cfg.get("n") in (1, 2), "'n' must be 1 or 2")
    n = cfg["n"]
    res = cfg.get("resolution")
    _require(isinstance(res, int) and not isinstance(res, bool),
             "'resolution' must be an integer")
    if n == 1:
        _require(res >= 16, "n=1 needs resolution >= 16")
    else:
        _require(res >= 17 and res % 2 == 1, "n=2 needs odd resolution >= 17")

    _require(cfg["scheme"] in SCHEMES, f"'scheme' must be one of {SCHEMES}")
    cfg["cfl"] = _positive_real(cfg, "cfl", upper=1.0)
    for key in ("dt_max", "t_end", "snapshot_interval"):
        cfg[key] = _positive_real(cfg, key)
    stops = cfg["stops"]
    extra = set(stops) - set(DEFAULTS["stops"])
    _require(not extra, f"unknown stop thresholds: {sorted(extra)}")
    for key in DEFAULTS["stops"]:
        stops[key] = _positive_real(stops, key)
    _require(stops["extinction_radius"] < stops["blowup_radius"],
             "extinction_radius must be smaller than blowup_radius")

    _require(isinstance(cfg["seed"], int) and not isinstance(cfg["seed"], bool)
             and cfg["seed"] >= 0, "'seed' must be a nonnegative integer")
    _require(isinstance(cfg["output"], str) and cfg["output"],
             "'output' must be a nonempty string")
    _require(isinstance(cfg["renormalize"], bool), "'renormalize' must be a bool")

    init = cfg.get("initial")
    _require(isinstance(init, dict) and "kind" in init,
             "'initial' must be an object with a 'kind'")
    kind = init["kind"]
    params = init.get("params", {})
    _require(isinstance(params, dict), "'initial.params' must be an object")
    if kind == "ellipsoid":
        has_m, has_r = "matrix" in params, "radius" in params
        _require(has_m != has_r,
                 "ellipsoid initial takes exactly one of 'matrix' or 'radius'")
        if has_r:
            _require(isinstance(params["radius"], (int, float))
                     and params["radius"] > 0, "'radius' must be positive")
        else:
            Q = np.asarray(params["matrix"], dtype=float)
            _require(Q.shape == (n + 1, n + 1),
                     f"'matrix' must be {(n + 1)}x{(n + 1)}")
            _require(np.allclose(Q, Q.T, atol=1e-12), "'matrix' must be symmetric")
            _require(np.min(np.linalg.eigvalsh(0.5 * (Q + Q.T))) > 0,
                     "'matrix' must be positive definite")
    elif kind == "fourier":
        _require(n == 1, "fourier initial data is only defined for n=1")
        _require("c0" in params, "fourier initial needs 'c0'")
        _require(isinstance(params["c0"], (int, float)) and params["c0"] > 0,
                 "'c0' must be positive")
        for key in ("a", "b"):
            coeffs = params.get(key, [])
            _require(isinstance(coeffs, list)
                     and all(isinstance(c, (int, float)) for c in coeffs),
                     f"fourier '{key}' must be a list of numbers")
            _require(len(coeffs) < res // 2,
                     f"fourier '{key}' has more modes than the grid resolves")
    elif kind == "file":
        _require(isinstance(params.get("path"), str) and params["path"],
                 "file initial needs a 'path'")
    else:
        raise ConfigError(f"unknown initial kind {kind!r}")

    return cfg


def build_initial(cfg):
    """Grid + SupportField for a validated config; convexity-checks the datum."""
    grid = make_grid(cfg["n"], cfg["resolution"])
    init = cfg["initial"]
    kind, params = init["kind"], init.get("params", {})
    if kind == "ellipsoid":
        if "radius" in params:
            Q = float(params["radius"]) ** 2 * np.eye(cfg["n"] + 1)
        else:
            Q = np.asarray(params["matrix"], dtype=float)
        field = ellipsoid_support(grid, Q)
    elif kind == "fourier":
        field = fourier_support(grid, params["c0"],
                                a=params.get("a", ()), b=params.get("b", ()))
        if field.min_s() <= 0:
            raise ConfigError("fourier initial datum has non-positive support")
        b = curvature_matrix(field)
        bmin = float(np.min(b)) if cfg["n"] == 1 else float(np.min(hessian_eigs(b)[0]))
        if bmin <= cfg["stops"]["convexity_floor"]:
            raise ConfigError(
                f"fourier initial datum is not uniformly convex (min curvature "
                f"eigenvalue {bmin:.3e})")
    else:  # file
        from .io import load_snapshot
        path = params["path"]
        if not os.path.exists(path):
            raise ConfigError(f"initial snapshot file not found: {path}")
        _, field, _ = load_snapshot(path, grid)
    return grid, field


def load_config_file(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    return validate(raw)


# ---------- sweeps ----------

SWEEP_DEFAULTS = {"parallelism": 4, "max_cells": 64}


def _walk_path(obj, path):
    """Yield (container, key) pairs along a dotted path; int segments index lists."""
    parts = path.split(".")
    for k, part in enumerate(parts):
        key = int(part) if part.lstrip("-").isdigit() else part
        if isinstance(obj, list):
            _require(isinstance(key, int) and -len(obj) <= key < len(obj),
                     f"sweep path {path!r}: bad list index {part!r}")
        else:
            _require(isinstance(obj, dict) and key in obj,
                     f"sweep path {path!r}: no field {part!r}")
        if k == len(parts) - 1:
            return obj, key
        obj = obj[key]
    raise ConfigError(f"empty sweep path {path!r}")


def set_by_path(cfg, path, value):
    container, key = _walk_path(cfg, path)
    container[key] = value


def validate_sweep(raw):
    _require(isinstance(raw, dict), "sweep spec must be a JSON object")
    spec = copy.deepcopy(raw)
    for key, val in SWEEP_DEFAULTS.items():
        spec.setdefault(key, val)
    unknown = set(spec) - {"base", "axes", "parallelism", "max_cells"}
    _require(not unknown, f"unknown sweep fields: {sorted(unknown)}")
    _require(isinstance(spec.get("base"), dict), "sweep needs a 'base' config")
    base = validate(spec["base"])
    axes = spec.get("axes", [])
    _require(isinstance(axes, list), "'axes' must be a list")
    size = 1
    for ax in axes:
        _require(isinstance(ax, dict) and isinstance(ax.get("path"), str)
                 and isinstance(ax.get("values"), list) and ax["values"],
                 "each axis needs a 'path' and a nonempty 'values' list")
        _walk_path(base, ax["path"])  # path must resolve in the base config
        size *= len(ax["values"])
    _require(isinstance(spec["parallelism"], int) and spec["parallelism"] >= 1,
             "'parallelism' must be a positive integer")
    _require(isinstance(spec["max_cells"], int) and spec["max_cells"] >= 1,
             "'max_cells' must be a positive integer")
    _require(size <= spec["max_cells"],
             f"sweep would run {size} cells, cap is {spec['max_cells']}")
    spec["base"] = base
    return spec


def sweep_cells(spec):
    """Cartesian product of the axes: list of (overrides dict, config dict)."""
    axes = spec.get("axes", [])
    cells = [({}, copy.deepcopy(spec["base"]))]
    for ax in axes:
        nxt = []
        for overrides, cfg in cells:
            for v in ax["values"]:
                o2, c2 = dict(overrides), copy.deepcopy(cfg)
                o2[ax["path"]] = v
                set_by_path(c2, ax["path"], v)
                nxt.append((o2, c2))
        cells = nxt
    for _, cfg in cells:
        validate(cfg)  # value substitution must leave the config valid
    return cells
