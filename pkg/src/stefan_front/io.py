"""CSV and JSON artifacts.

Numbers are written with ``%.17g`` so that files round-trip exactly and
identical runs give byte-identical output.  CSV files that carry metadata
start with a single ``# {json}`` header line.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .fbsolver import FrontFixedState, Trajectory, TwoFrontState

FMT = "%.17g"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if np.isnan(x):
            return "nan"
        if np.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def write_csv(path, columns: dict, header: dict | None = None):
    """Write equal-length columns; ``header`` becomes a leading ``# {json}`` line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    lines = []
    if header is not None:
        lines.append("# " + json.dumps(_jsonable(header), sort_keys=True))
    lines.append(",".join(names))
    with path.open("w") as fh:
        fh.write("\n".join(lines) + "\n")
        np.savetxt(fh, data, fmt=FMT, delimiter=",")


def read_csv(path):
    """Return (header dict or None, {column: array})."""
    header = None
    with Path(path).open() as fh:
        first = fh.readline()
        if first.startswith("#"):
            header = json.loads(first[1:].strip())
            names = fh.readline().strip().split(",")
        else:
            names = first.strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return header, {k: data[:, i] for i, k in enumerate(names)}


def write_profile(path, prof, grid_n: int | None = None):
    """Semi-wave profile as columns (z, q) with header {c_star, mu, residual, grid}."""
    z = prof.z if grid_n is None else np.linspace(0.0, prof.z_max, grid_n)
    header = {"c_star": prof.c_star, "mu": prof.mu, "residual": prof.residual,
              "grid": {"n": int(len(z)), "z_max": float(z[-1]), "dz": float(z[1] - z[0])}}
    write_csv(path, {"z": z, "q": prof(z)}, header)


def write_limit_state(path, state):
    """(t, u_c) or (x, v_a) samples of an almost periodic limit state."""
    if hasattr(state, "t"):
        write_csv(path, {"t": state.t, "u_c": state.values},
                  {"kind": "u_c", "signal": state.c.to_json(), "horizon": state.horizon})
    else:
        write_csv(path, {"x": state.x, "v_a": state.values},
                  {"kind": "v_a", "signal": state.a.to_json(), "pad": state.pad})


def write_trajectory(outdir, traj: Trajectory):
    """traj.csv (t, h, h_dot, channels...), snapshots/*.csv and meta.json."""
    outdir = Path(outdir)
    cols = {"t": traj.t, "h": traj.h, "h_dot": traj.h_dot}
    for name in sorted(traj.channels):
        series = np.asarray(traj.channels[name], dtype=float)
        if series.shape == traj.t.shape:
            cols[name] = series
    write_csv(outdir / "traj.csv", cols)
    snapdir = outdir / "snapshots"
    snapdir.mkdir(parents=True, exist_ok=True)
    for old in snapdir.glob("*.csv"):
        old.unlink()
    for k, s in enumerate(traj.snapshots):
        if isinstance(s, TwoFrontState):
            header = {"t": s.t, "g_minus": s.g_minus, "g_plus": s.g_plus, "mu": s.mu,
                      "gm_dot": s.gm_dot, "gp_dot": s.gp_dot, "frame": "interval"}
            write_csv(snapdir / f"snap_{k:05d}.csv", {"y": s.y, "x": s.x, "v": s.v}, header)
        else:
            header = {"t": s.t, "h": s.h, "h_dot": s.h_dot, "mu": s.mu, "frame": "front_fixed"}
            write_csv(snapdir / f"snap_{k:05d}.csv", {"xi": s.xi, "w": s.w}, header)
    write_json(outdir / "meta.json", traj.meta)


def read_trajectory(outdir) -> Trajectory:
    outdir = Path(outdir)
    _, cols = read_csv(outdir / "traj.csv")
    t, h, hd = cols.pop("t"), cols.pop("h"), cols.pop("h_dot")
    snaps = []
    for p in sorted((outdir / "snapshots").glob("*.csv")):
        hdr, c = read_csv(p)
        if hdr.get("frame") == "interval":
            snaps.append(TwoFrontState(hdr["t"], c["y"], c["v"], hdr["g_minus"], hdr["g_plus"],
                                       hdr["mu"], hdr["gm_dot"], hdr["gp_dot"]))
        else:
            snaps.append(FrontFixedState(hdr["t"], c["xi"], c["w"], hdr["h"], hdr["h_dot"], hdr["mu"]))
    meta_path = outdir / "meta.json"
    meta = read_json(meta_path) if meta_path.exists() else {}
    return Trajectory(t, h, hd, snaps, cols, meta)
