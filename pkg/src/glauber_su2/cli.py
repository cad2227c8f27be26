"""Command-line front end.

    glauber-su2 run --config exp.json
    glauber-su2 run --preset fig2b
    glauber-su2 validate --config exp.json
    glauber-su2 presets

Relative output paths are resolved against $GLAUBER_SU2_OUTPUT_DIR when set,
otherwise against the current directory.  Each CSV gets a ``.meta.json``
sidecar echoing the config and the solver diagnostics.
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .observables import NoonSpec, energy_trace, noon_state, transition_probability
from .oscillators import ModelKind, block_evolution, coordinate_kernel, numeric_pair_solver, pair_solver
from .scenario import ScenarioError, scenario_from_dict
from .specfun import AccuracyError, PoleError
from .su2 import ParameterError, StiffnessError

__all__ = ["main", "run", "validate", "PRESETS", "Diagnostic", "ConfigError", "OUTPUT_DIR_ENV"]

OUTPUT_DIR_ENV = "GLAUBER_SU2_OUTPUT_DIR"
TASKS = ("propagator", "energy", "transition", "kernel", "compare")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4

_TOP_KEYS = {"model", "scenario", "task", "noon", "grid", "theta_grid", "N", "kernel",
             "route", "quantity", "output_path", "tolerance"}

_RABI = {"type": "rabi", "Omega0": 1.0, "omega0": 0.1, "nu0": 0.5}
_LMSZ = {"type": "lmsz", "gamma": 1.0, "omega0": 1.0, "tau_i": -20.0, "tau_f": 20.0}
_NOON1 = {"N": 1, "theta": math.pi / 4, "phi": 0.0}

PRESETS = {
    "fig1": {
        "model": "amplifier", "task": "energy",
        "scenario": {"type": "constant", "Omega0": 1.0, "omega0": 0.1},
        "noon": {"N": 1, "theta": 0.0, "phi": 0.0},
        "theta_grid": {"start": 0.0, "stop": math.pi, "n_points": 181},
        "grid": {"t_start": 0.0, "t_end": 50.0, "n_points": 11},
        "output_path": "fig1.csv",
    },
    "fig2a": {
        "model": "amplifier", "task": "energy", "scenario": _RABI, "noon": _NOON1,
        "grid": {"t_start": 0.0, "t_end": 80 * math.pi, "n_points": 801},
        "output_path": "fig2a.csv",
    },
    "fig2b": {
        "model": "amplifier", "task": "energy", "scenario": _LMSZ, "noon": _NOON1,
        "grid": {"t_start": -20.0, "t_end": 20.0, "n_points": 401},
        "output_path": "fig2b.csv",
    },
    "fig2c": {
        "model": "standard", "task": "energy", "scenario": _RABI, "noon": _NOON1,
        "grid": {"t_start": 0.0, "t_end": 80 * math.pi, "n_points": 801},
        "output_path": "fig2c.csv",
    },
    "fig2d": {
        "model": "standard", "task": "energy", "scenario": _LMSZ, "noon": _NOON1,
        "grid": {"t_start": -20.0, "t_end": 20.0, "n_points": 401},
        "output_path": "fig2d.csv",
    },
    "fig3a": {
        "model": "amplifier", "task": "transition", "scenario": _LMSZ, "N": 1,
        "grid": {"t_start": -20.0, "t_end": 20.0, "n_points": 401},
        "output_path": "fig3a.csv",
    },
    "fig3b": {
        "model": "standard", "task": "transition", "scenario": _LMSZ, "N": 1,
        "grid": {"t_start": -20.0, "t_end": 20.0, "n_points": 401},
        "output_path": "fig3b.csv",
    },
}


class ConfigError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Diagnostic:
    path: str
    message: str

    def __str__(self):
        return f"{self.path}: {self.message}"


def _is_num(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _check_range(cfg, key, diags, *, lo_key="t_start", hi_key="t_end"):
    g = cfg.get(key)
    if not isinstance(g, dict):
        diags.append(Diagnostic(key, "missing or not an object"))
        return
    for k in (lo_key, hi_key, "n_points"):
        if k not in g:
            diags.append(Diagnostic(f"{key}.{k}", "missing"))
        elif not _is_num(g[k]):
            diags.append(Diagnostic(f"{key}.{k}", "must be a finite number"))
    for k in g:
        if k not in (lo_key, hi_key, "n_points"):
            diags.append(Diagnostic(f"{key}.{k}", "unknown field"))
    n = g.get("n_points")
    if _is_num(n) and (int(n) != n or n < 2):
        diags.append(Diagnostic(f"{key}.n_points", "must be an integer >= 2"))
    lo, hi = g.get(lo_key), g.get(hi_key)
    if _is_num(lo) and _is_num(hi) and not lo < hi:
        diags.append(Diagnostic(f"{key}.{hi_key}", f"must exceed {lo_key}"))


def validate(cfg) -> list[Diagnostic]:
    """All problems with an experiment config; empty iff it can be run."""
    diags: list[Diagnostic] = []
    if not isinstance(cfg, dict):
        return [Diagnostic("", "config must be a JSON object")]
    for k in cfg:
        if k not in _TOP_KEYS:
            diags.append(Diagnostic(k, "unknown field"))
    try:
        ModelKind.parse(cfg.get("model"))
    except ValueError as exc:
        diags.append(Diagnostic("model", str(exc)))
    task = cfg.get("task")
    if task not in TASKS:
        diags.append(Diagnostic("task", f"must be one of {list(TASKS)}"))
    scen = None
    if "scenario" not in cfg:
        diags.append(Diagnostic("scenario", "missing"))
    else:
        try:
            scen = scenario_from_dict(cfg["scenario"])
        except ScenarioError as exc:
            diags.extend(Diagnostic(f"scenario.{f}" if f else "scenario", m) for f, m in exc.problems)
        except (TypeError, ValueError) as exc:
            diags.append(Diagnostic("scenario", str(exc)))
    _check_range(cfg, "grid", diags)
    if "theta_grid" in cfg:
        if task != "energy":
            diags.append(Diagnostic("theta_grid", "only allowed for task 'energy'"))
        _check_range(cfg, "theta_grid", diags, lo_key="start", hi_key="stop")
    if "tolerance" in cfg and not (_is_num(cfg["tolerance"]) and 1e-13 <= cfg["tolerance"] <= 1e-4):
        diags.append(Diagnostic("tolerance", "must lie in [1e-13, 1e-4]"))
    if "output_path" not in cfg or not isinstance(cfg.get("output_path"), str) or not cfg.get("output_path"):
        diags.append(Diagnostic("output_path", "missing or not a non-empty string"))
    if "route" in cfg and cfg["route"] not in ("analytic", "numeric"):
        diags.append(Diagnostic("route", "must be 'analytic' or 'numeric'"))

    needs_noon = task == "energy" or (task == "compare" and cfg.get("quantity", "energy") == "energy")
    if needs_noon:
        _check_noon(cfg, diags)
    elif "noon" in cfg:
        _check_noon(cfg, diags)
    if task in ("transition", "kernel") or (task == "compare" and cfg.get("quantity") == "transition"):
        n = cfg.get("N")
        if not (isinstance(n, int) and not isinstance(n, bool) and n >= 1):
            diags.append(Diagnostic("N", "required positive integer"))
        elif task == "kernel" and n > 60:
            diags.append(Diagnostic("N", "must be <= 60 for the kernel"))
    if task == "compare" and cfg.get("quantity", "energy") not in ("energy", "transition"):
        diags.append(Diagnostic("quantity", "must be 'energy' or 'transition'"))
    if task == "kernel":
        _check_kernel(cfg, diags)

    # window checks against the scenario's own range
    g = cfg.get("grid")
    if scen is not None and isinstance(g, dict) and _is_num(g.get("t_start")) and _is_num(g.get("t_end")):
        t0 = scen.start_time
        if g["t_start"] < t0 - 1e-12:
            diags.append(Diagnostic("grid.t_start", f"precedes the scenario start time {t0!r}"))
        t_end = getattr(scen, "end_time", None)
        if t_end is not None and g["t_end"] > t_end + 1e-12:
            diags.append(Diagnostic("grid.t_end", f"exceeds the scenario end time {t_end!r}"))
    kern = cfg.get("kernel")
    if task == "kernel" and scen is not None and isinstance(kern, dict) and _is_num(kern.get("t")):
        t_end = getattr(scen, "end_time", None)
        if kern["t"] < scen.start_time - 1e-12 or (t_end is not None and kern["t"] > t_end + 1e-12):
            diags.append(Diagnostic("kernel.t", "outside the scenario time window"))
    if task == "propagator" and cfg.get("route") == "numeric" and scen is not None:
        if isinstance(g, dict) and _is_num(g.get("t_end")) and not g["t_end"] > scen.start_time:
            diags.append(Diagnostic("grid.t_end", "must exceed the scenario start time"))
    return diags


def _check_noon(cfg, diags):
    nd = cfg.get("noon")
    if not isinstance(nd, dict):
        diags.append(Diagnostic("noon", "required for this task"))
        return
    for k in nd:
        if k not in ("N", "theta", "phi"):
            diags.append(Diagnostic(f"noon.{k}", "unknown field"))
    n = nd.get("N")
    if not (isinstance(n, int) and not isinstance(n, bool) and n >= 1):
        diags.append(Diagnostic("noon.N", "must be a positive integer"))
    for k in ("theta", "phi"):
        if k in nd and not _is_num(nd[k]):
            diags.append(Diagnostic(f"noon.{k}", "must be a finite number"))
    if "theta" not in nd and "theta_grid" not in cfg:
        diags.append(Diagnostic("noon.theta", "missing"))


_KERNEL_KEYS = ("t", "x1p", "x2p", "x2", "x01", "x02", "x_start", "x_stop", "n_points")


def _check_kernel(cfg, diags):
    k = cfg.get("kernel")
    if not isinstance(k, dict):
        diags.append(Diagnostic("kernel", "required for task 'kernel'"))
        return
    for key in k:
        if key not in _KERNEL_KEYS:
            diags.append(Diagnostic(f"kernel.{key}", "unknown field"))
    for key in ("t", "x1p", "x2p", "x2", "x_start", "x_stop", "n_points"):
        if key not in k:
            diags.append(Diagnostic(f"kernel.{key}", "missing"))
        elif not _is_num(k[key]):
            diags.append(Diagnostic(f"kernel.{key}", "must be a finite number"))
    for key in ("x01", "x02"):
        if key in k and not (_is_num(k[key]) and k[key] > 0):
            diags.append(Diagnostic(f"kernel.{key}", "must be > 0"))
    n = k.get("n_points")
    if _is_num(n) and (int(n) != n or n < 2):
        diags.append(Diagnostic("kernel.n_points", "must be an integer >= 2"))


# ---------------------------------------------------------------------------
# execution


def _fmt(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of negative zero
    return format(x, ".17g")


def _grid(g, lo="t_start", hi="t_end") -> np.ndarray:
    return np.linspace(float(g[lo]), float(g[hi]), int(g["n_points"]))


def _output_path(cfg) -> Path:
    p = Path(cfg["output_path"])
    if p.is_absolute():
        return p
    base = os.environ.get(OUTPUT_DIR_ENV)
    return (Path(base) if base else Path.cwd()) / p


def _norm_defects(solver, ts) -> float:
    return max((solver(t).norm_defect for t in ts), default=0.0)


def _execute(cfg) -> tuple[list[str], list[list[float]], dict]:
    kind = ModelKind.parse(cfg["model"])
    scen = scenario_from_dict(cfg["scenario"])
    tol = float(cfg.get("tolerance", 1e-12))
    ts = _grid(cfg["grid"])
    task = cfg["task"]
    meta: dict = {}

    if task == "propagator":
        if cfg.get("route", "analytic") == "numeric":
            solver = numeric_pair_solver(kind, scen, float(ts[-1]), tol)
        else:
            solver = pair_solver(kind, scen, tol)
        rows = []
        for t in ts:
            p = solver(t)
            rows.append([t, p.a.real, p.a.imag, p.b.real, p.b.imag, p.norm_defect])
        meta["norm_defect_max"] = max(r[-1] for r in rows)
        return ["t", "re_a", "im_a", "re_b", "im_b", "norm_defect"], rows, meta

    if task == "energy":
        nd = cfg["noon"]
        if "theta_grid" in cfg:
            thetas = _grid(cfg["theta_grid"], "start", "stop")
            solver = pair_solver(kind, scen, tol)
            rows = []
            spread = 0.0
            for th in thetas:
                spec = NoonSpec(int(nd["N"]), float(th), float(nd.get("phi", 0.0)))
                tr = energy_trace(kind, scen, spec, ts)
                spread = max(spread, float(np.ptp(tr.values)))
                rows.append([th, tr.values[0]])
            meta["time_spread_max"] = spread
            meta["norm_defect_max"] = _norm_defects(solver, ts)
            return ["theta", "E"], rows, meta
        spec = NoonSpec(int(nd["N"]), float(nd["theta"]), float(nd.get("phi", 0.0)))
        tr = energy_trace(kind, scen, spec, ts)
        meta["norm_defect_max"] = _norm_defects(pair_solver(kind, scen, tol), ts)
        return ["t", "E"], [[t, e] for t, e in zip(ts, tr.values)], meta

    if task == "transition":
        N = int(cfg["N"])
        solver = pair_solver(kind, scen, tol)
        rows = [[t, transition_probability(kind, scen, N, t, solver(t))] for t in ts]
        meta["norm_defect_max"] = _norm_defects(solver, ts)
        return ["t", "P"], rows, meta

    if task == "compare":
        quantity = cfg.get("quantity", "energy")
        cols = {}
        defect = 0.0
        for k in ModelKind:
            solver = pair_solver(k, scen, tol)
            defect = max(defect, _norm_defects(solver, ts))
            if quantity == "energy":
                nd = cfg["noon"]
                spec = NoonSpec(int(nd["N"]), float(nd["theta"]), float(nd.get("phi", 0.0)))
                cols[k] = energy_trace(k, scen, spec, ts).values
            else:
                N = int(cfg["N"])
                cols[k] = [transition_probability(k, scen, N, t, solver(t)) for t in ts]
        meta["norm_defect_max"] = defect
        q = "E" if quantity == "energy" else "P"
        rows = [[t, x, y] for t, x, y in zip(ts, cols[ModelKind.AMPLIFIER], cols[ModelKind.STANDARD])]
        return ["t", f"{q}_amplifier", f"{q}_standard"], rows, meta

    if task == "kernel":
        k = cfg["kernel"]
        N = int(cfg["N"])
        t = float(k["t"])
        block = block_evolution(kind, scen, N, t)
        xs = np.linspace(float(k["x_start"]), float(k["x_stop"]), int(k["n_points"]))
        rows = []
        for x in xs:
            val = coordinate_kernel(kind, scen, N, t, float(k["x1p"]), float(k["x2p"]), float(x), float(k["x2"]),
                                    float(k.get("x01", 1.0)), float(k.get("x02", 1.0)), block=block)
            rows.append([x, val.real, val.imag])
        meta["block_unitarity_defect"] = block.unitarity_defect()
        return ["x1", "re_K", "im_K"], rows, meta

    raise ConfigError([Diagnostic("task", f"unknown task {task!r}")])


def _write(path: Path, header, rows, meta_doc) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(x) for x in r])
    side = path.with_name(path.name + ".meta.json")
    side.write_text(json.dumps(meta_doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def run(cfg) -> Path:
    """Validate, execute and write one experiment; returns the CSV path."""
    diags = validate(cfg)
    if diags:
        raise ConfigError(diags)
    header, rows, meta = _execute(cfg)
    path = _output_path(cfg)
    meta_doc = {
        "config": cfg,
        "tolerance": float(cfg.get("tolerance", 1e-12)),
        "columns": header,
        "rows": len(rows),
        "version": __version__,
        **meta,
    }
    _write(path, header, rows, meta_doc)
    return path


def _load(args) -> dict:
    if args.preset:
        cfg = copy.deepcopy(PRESETS[args.preset])
    else:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([Diagnostic("", f"invalid JSON: {exc}")]) from None
        except OSError as exc:
            raise ConfigError([Diagnostic("", f"cannot read config: {exc}")]) from None
    if args.output and isinstance(cfg, dict):
        cfg["output_path"] = args.output
    return cfg


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="glauber-su2", description="Exact SU(2) dynamics of coupled oscillator models.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("run", "run an experiment and write CSV"), ("validate", "check a config")):
        sp = sub.add_parser(name, help=helptext)
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", help="JSON experiment file")
        src.add_argument("--preset", choices=sorted(PRESETS), help="bundled figure preset")
        sp.add_argument("--output", help="override output_path")
    sub.add_parser("presets", help="list bundled presets")
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "presets":
        for name in sorted(PRESETS):
            print(name)
        return EXIT_OK
    try:
        cfg = _load(args)
        if args.command == "validate":
            diags = validate(cfg)
            for d in diags:
                print(d)
            return EXIT_CONFIG if diags else EXIT_OK
        path = run(cfg)
    except ConfigError as exc:
        for d in exc.diagnostics:
            print(f"config error: {d}", file=sys.stderr)
        return EXIT_CONFIG
    except (StiffnessError, AccuracyError, PoleError, ParameterError, ScenarioError, ArithmeticError, ValueError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(path)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
