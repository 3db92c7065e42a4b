"""Command line entry points.

``stefan-front run CONFIG``       run one scenario, exit 0 iff every criterion passes
``stefan-front sweep CONFIGS``    run a JSON array of scenario configs in order
``stefan-front diagnose --traj DIR --check drift,speed,levelset``
``semiwave --f logistic --mu 1.0 --tol 1e-8``
``fbsolve --config run.json``
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import diagnostics as dg
from . import io
from .errors import StefanFrontError
from .nonlinearity import homogeneous_from_json
from .scenarios import ScenarioConfig, run, run_fbsolve
from .semiwave import find_cstar


def _print(obj):
    print(json.dumps(io._jsonable(obj), indent=2, sort_keys=True))


def _run_one(cfg_obj, out, base: Path | None = None):
    cfg = ScenarioConfig.from_json(cfg_obj)
    outdir = out or cfg.output
    if outdir is not None and base is not None and not Path(outdir).is_absolute():
        outdir = base / outdir
    return run(cfg, outdir)


def _cmd_run(args):
    path = Path(args.config)
    rep = _run_one(io.read_json(path), args.out)
    _print({"scenario": rep.scenario, "passed": rep.passed,
            "failed": [k for k, v in rep.criteria.items() if not v["passed"]]})
    return 0 if rep.passed else 1


def _cmd_sweep(args):
    configs = io.read_json(args.configs)
    if not isinstance(configs, list):
        raise SystemExit("sweep expects a JSON array of scenario configs")
    out = Path(args.out) if args.out else None
    rows = []
    for k, obj in enumerate(configs):
        sub = None if out is None else out / f"run_{k:03d}"
        rep = _run_one(obj, sub)
        rows.append({"index": k, "scenario": rep.scenario, "passed": rep.passed,
                     "failed": [n for n, v in rep.criteria.items() if not v["passed"]]})
    if out is not None:
        io.write_json(out / "sweep_summary.json", rows)
    _print(rows)
    return 0 if all(r["passed"] for r in rows) else 1


def _cmd_diagnose(args):
    traj = io.read_trajectory(args.traj)
    summary_path = Path(args.traj) / "summary.json"
    c_ref = args.c_ref
    if c_ref is None and summary_path.exists():
        c_ref = io.read_json(summary_path).get("data", {}).get("c_star")
    checks = [c.strip() for c in args.check.split(",") if c.strip()]
    out, ok = {}, True
    for name in checks:
        if name == "drift":
            if c_ref is None:
                out[name] = {"passed": False, "error": "no reference speed (pass --c-ref)"}
            else:
                rep = dg.drift(traj, float(c_ref)).to_json()
                rep["passed"] = rep["tail_drift"] <= args.drift_tol
                out[name] = rep
        elif name == "speed":
            rep = dg.estimate_global_mean_speed(traj).to_json()
            rep["passed"] = args.spread_tol is None or rep["spread"] <= args.spread_tol
            out[name] = rep
        elif name == "levelset":
            try:
                widths = {f"{lam:g}": dg.level_set_width(traj, lam) for lam in args.levels}
                out[name] = {"widths": widths, "passed": True}
            except StefanFrontError as exc:
                out[name] = {"passed": False, "error": str(exc)}
        else:
            out[name] = {"passed": False, "error": f"unknown check {name!r}"}
        ok &= bool(out[name]["passed"])
    out["passed"] = ok
    _print(out)
    return 0 if ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="stefan-front", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run one scenario config")
    r.add_argument("config")
    r.add_argument("--out", help="output directory (overrides the config)")
    r.set_defaults(func=_cmd_run)
    s = sub.add_parser("sweep", help="run a JSON array of scenario configs")
    s.add_argument("configs")
    s.add_argument("--out")
    s.set_defaults(func=_cmd_sweep)
    d = sub.add_parser("diagnose", help="diagnostics on a written trajectory")
    d.add_argument("--traj", required=True)
    d.add_argument("--check", default="drift,speed,levelset")
    d.add_argument("--c-ref", type=float, default=None)
    d.add_argument("--drift-tol", type=float, default=0.05)
    d.add_argument("--spread-tol", type=float, default=None)
    d.add_argument("--levels", type=float, nargs="+", default=[0.1, 0.5, 0.9])
    d.set_defaults(func=_cmd_diagnose)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


def semiwave_main(argv=None):
    p = argparse.ArgumentParser(prog="semiwave", description="semi-wave speed and profile")
    p.add_argument("--f", default="logistic", help='e.g. logistic, "bistable(0.25)", "combustion(0.3)"')
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-8, help="required bound on the shooting residual")
    p.add_argument("--out", help="write the profile CSV here")
    args = p.parse_args(argv)
    try:
        prof = find_cstar(homogeneous_from_json(args.f), args.mu)
    except StefanFrontError as exc:
        _print({"error": type(exc).__name__, "message": str(exc)})
        return 1
    if args.out:
        io.write_profile(args.out, prof)
    _print({"f": args.f, "mu": args.mu, "c_star": prof.c_star, "residual": prof.residual,
            "slope0": prof.slope0, "z_max": prof.z_max})
    return 0 if abs(prof.residual) <= args.tol else 1


def fbsolve_main(argv=None):
    p = argparse.ArgumentParser(prog="fbsolve", description="one-front solver run")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    args = p.parse_args(argv)
    try:
        traj = run_fbsolve(io.read_json(args.config), args.out)
    except StefanFrontError as exc:
        _print({"error": type(exc).__name__, "message": str(exc)})
        return 1
    _print({"t_end": traj.t[-1], "h_end": traj.h[-1], "h_dot_end": traj.h_dot[-1],
            "snapshots": len(traj.snapshots)})
    return 0


if __name__ == "__main__":
    sys.exit(main())
