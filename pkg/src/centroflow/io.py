"""Disk formats: snapshot JSON, series CSV, metadata, and the config hash.

Node-ordering contract (must stay bit-stable across runs):
  n=1: values is the flat list s[k] at theta_k = 2 pi k / N, k = 0..N-1.
  n=2: values is a list of 6 faces in the fixed frame order of grids.FACE_FRAMES;
       each face is an M x M nested list, row-major, values[i][j] = s at
       (y1, y2) = (ys[i], ys[j]).

Floats are serialized with repr (shortest round trip), so identical configs
reproduce byte-identical files. Every artifact embeds the config hash so a
report can refuse to pair with a trajectory it was not computed from.
"""

import csv
import hashlib
import json
import os

import numpy as np

from .diagnostics import SERIES_COLUMNS
from .errors import ConfigError
from .flow import FlowState, Trajectory
from .grids import make_grid
from .support import SupportField

SNAP_DIR = "snapshots"
SERIES_NAME = "series.csv"
META_NAME = "metadata.json"
REPORT_NAME = "report.json"


def config_hash(config):
    """Short content hash of a config mapping (order-insensitive).

    The output path is excluded: the hash identifies the run itself, so the
    same physics written to two directories produces byte-identical data files.
    """
    scrubbed = {k: v for k, v in config.items() if k != "output"}
    blob = json.dumps(scrubbed, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _fmt(v):
    v = float(v)
    if np.isnan(v):
        return "nan"
    return repr(v)


def output_root():
    return os.environ.get("CENTROFLOW_OUTPUT_ROOT", "")


def resolve_outdir(path):
    root = output_root()
    if root and not os.path.isabs(path):
        return os.path.join(root, path)
    return path


def write_snapshot(path, field, t, cfg_hash):
    if field.n == 1:
        values = [float(v) for v in field.s]
        resolution = field.grid.N
    else:
        values = [[[float(v) for v in row] for row in face] for face in field.s]
        resolution = field.grid.M
    doc = {"n": field.n, "resolution": resolution, "time": float(t),
           "values": values, "config_hash": cfg_hash}
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_snapshot(path, grid=None):
    """Read one snapshot; returns (t, SupportField). Corrupt data -> ConfigError."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"unreadable snapshot {path}: {exc}")
    for key in ("n", "resolution", "time", "values"):
        if key not in doc:
            raise ConfigError(f"snapshot {path} missing field '{key}'")
    n, resolution = doc["n"], doc["resolution"]
    if grid is None:
        grid = make_grid(n, resolution)
    elif grid.n != n or (grid.N if n == 1 else grid.M) != resolution:
        raise ConfigError(f"snapshot {path} grid mismatch")
    values = np.asarray(doc["values"], dtype=float)
    want = (grid.N,) if n == 1 else (6, grid.M, grid.M)
    if values.shape != want:
        raise ConfigError(f"snapshot {path} has shape {values.shape}, want {want}")
    if not np.all(np.isfinite(values)) or np.min(values) <= 0.0:
        raise ConfigError(f"snapshot {path} holds non-positive or non-finite s")
    return float(doc["time"]), SupportField(grid, s=values), doc.get("config_hash")


def write_trajectory(outdir, traj, config, cfg_hash, wall_time, extra_meta=None):
    """Snapshot directory + metadata; returns the snapshot dir path."""
    snapdir = os.path.join(outdir, SNAP_DIR)
    os.makedirs(snapdir, exist_ok=True)
    for k, st in enumerate(traj.snapshots):
        write_snapshot(os.path.join(snapdir, f"snap_{k:06d}.json"),
                       st.field, st.t, cfg_hash)
    meta = {
        "config": config,
        "config_hash": cfg_hash,
        "termination": traj.termination,
        "step_count": traj.step_count,
        "renorm_factors": [float(f) for f in traj.renorm_factors],
        "snapshot_count": len(traj.snapshots),
        "wall_time_s": wall_time,
    }
    if extra_meta:
        meta.update(extra_meta)
    with open(os.path.join(outdir, META_NAME), "w") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return snapdir


def load_trajectory(outdir):
    """Rebuild a Trajectory (and its metadata) from a run directory."""
    meta_path = os.path.join(outdir, META_NAME)
    try:
        with open(meta_path) as fh:
            meta = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"unreadable metadata {meta_path}: {exc}")
    snapdir = os.path.join(outdir, SNAP_DIR)
    if not os.path.isdir(snapdir):
        raise ConfigError(f"missing snapshot directory {snapdir}")
    names = sorted(f for f in os.listdir(snapdir) if f.endswith(".json"))
    if not names:
        raise ConfigError(f"no snapshots in {snapdir}")
    grid = None
    states = []
    for name in names:
        t, field, snap_hash = load_snapshot(os.path.join(snapdir, name), grid)
        if snap_hash is not None and snap_hash != meta.get("config_hash"):
            raise ConfigError(f"snapshot {name} hash does not match metadata")
        grid = field.grid
        states.append(FlowState(t=t, field=field, step_count=0, last_dt=0.0))
    if any(b.t <= a.t for a, b in zip(states, states[1:])):
        raise ConfigError("snapshot times are not strictly increasing")
    factors = meta.get("renorm_factors") or [1.0] * len(states)
    if len(factors) != len(states):
        raise ConfigError("renorm_factors length does not match snapshots")
    traj = Trajectory(states, meta.get("termination", "ReachedTEnd"),
                      meta.get("step_count", 0), [float(f) for f in factors])
    return traj, meta


def write_series_csv(path, rows, cfg_hash):
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash={cfg_hash}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SERIES_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in SERIES_COLUMNS])


def read_csv_rows(path):
    """Rows of a #-commented CSV as dicts of floats (hash line returned too)."""
    with open(path) as fh:
        first = fh.readline().strip()
        cfg_hash = first.split("=", 1)[1] if first.startswith("# config_hash=") else None
        reader = csv.DictReader(fh)
        rows = [{k: float(v) for k, v in row.items()} for row in reader]
    return rows, cfg_hash


def write_report(path, report, cfg_hash, summary_extra=None):
    doc = report.to_dict()
    doc["config_hash"] = cfg_hash
    if summary_extra:
        doc["summary"].update(summary_extra)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def invariant_summary(inv):
    """Per-snapshot min/max/mean digest of every scalar invariant field."""
    out = {}
    for name in ("norm_T2", "norm_C2", "psi", "rho", "H", "det_g"):
        arr = getattr(inv, name)
        out[name] = {"min": float(np.min(arr)), "max": float(np.max(arr)),
                     "mean": float(np.mean(arr))}
    if inv.n >= 2:
        for name in ("J", "chi"):
            arr = getattr(inv, name)
            out[name] = {"min": float(np.min(arr)), "max": float(np.max(arr)),
                         "mean": float(np.mean(arr))}
    out["area"] = inv.area
    out["residual_C_symmetry"] = inv.residual_C_symmetry
    out["residual_relsupport"] = inv.residual_relsupport
    out["residual_gauss_cross"] = inv.residual_gauss_cross
    return out
