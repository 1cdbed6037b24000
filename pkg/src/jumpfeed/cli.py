"""Command-line front end.

Subcommands: ``simulate`` (deterministic master-equation run),
``sweep`` (amplitude grid), ``trajectories`` (stochastic ensemble),
``figure`` (named preset) and ``convert-rotation``.

File contracts, kept bit-exact for downstream tooling:

* time-series CSV header ``t,rho1_ee,rho1_gg,abs_rho_eg,px,py,pz,concurrence,purity``;
* grid CSV header ``axis,axis_value,t,observable,value`` (long form);
* every CSV gets an adjacent ``<name>.meta.json`` holding the resolved
  parameters plus the package version;
* floats are written with 17 significant digits (lossless round trip).

A flat ``key=value`` config file can prefill any option (keys are the long
flag names without the leading dashes); explicit flags win.  Exit codes:
0 success, 1 usage error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .experiments import (
    FIGURE_IDS,
    SWEEP_AXES,
    SWEEP_OBSERVABLES,
    InitialState,
    SweepGrid,
    SweepSpec,
    UnknownFigure,
    run_preset,
    sweep,
)
from .integrator import IntegrationConfig, StateCorrupted, TimeSeries, evolve
from .linalg import NotHermitian, NotPositive
from .model import (
    FeedbackVector,
    RotationForm,
    SystemParams,
    feedback_rhs,
    rotation_to_amplitudes,
)
from .observables import CSV_FIELDS
from .trajectories import EnsembleConfig, NotPure, ZeroNorm, run_ensemble

__all__ = ["main", "entry"]

TIMESERIES_HEADER = ",".join(CSV_FIELDS)
GRID_HEADER = "axis,axis_value,t,observable,value"

_RUNTIME_ERRORS = (
    StateCorrupted,
    NotPure,
    ZeroNorm,
    NotPositive,
    NotHermitian,
    UnknownFigure,
    OSError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        raise _UsageError(message)


def _fmt(x: float) -> str:
    x = float(x) + 0.0  # normalize -0.0
    return f"{x:.17g}"


def write_timeseries_csv(path, ts: TimeSeries) -> None:
    lines = [TIMESERIES_HEADER]
    for rec in ts.records:
        lines.append(",".join(_fmt(v) for v in rec.as_row()))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_grid_csv(path, grid: SweepGrid) -> None:
    lines = [GRID_HEADER]
    for i, av in enumerate(grid.axis_values):
        for j, t in enumerate(grid.times):
            lines.append(
                f"{grid.axis},{_fmt(av)},{_fmt(t)},{grid.observable},"
                f"{_fmt(grid.values[i, j])}"
            )
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_timeseries_json(path, ts: TimeSeries) -> None:
    payload = {
        "fields": list(CSV_FIELDS),
        "rows": [[float(_fmt(v)) for v in rec.as_row()] for rec in ts.records],
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def meta_path(out_path: str) -> str:
    stem = out_path[: -len(".csv")] if out_path.endswith(".csv") else out_path
    return stem + ".meta.json"


def write_meta(out_path, meta: dict) -> None:
    required = {"params", "feedback", "init", "integration", "ensemble"}
    body = {key: meta.get(key) for key in required}
    body.update(meta)
    body["version"] = __version__
    with open(meta_path(str(out_path)), "w", newline="\n") as fh:
        json.dump(body, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def load_config(path: str) -> dict[str, str]:
    """Flat key=value file; '#' starts a comment, blank lines are skipped."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise _UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values


@dataclass(frozen=True)
class _Opt:
    flag: str
    kind: type
    default: object
    help: str = ""
    choices: tuple = None

    @property
    def dest(self) -> str:
        return self.flag.replace("-", "_")


_PHYSICS = [
    _Opt("omega1", float, 1.0, "qubit-1 frequency (units of omega)"),
    _Opt("omega2", float, 1.0, "qubit-2 frequency"),
    _Opt("g", float, 1.0, "exchange coupling strength"),
    _Opt("gamma", float, 0.5, "qubit-2 decay rate"),
    _Opt("ax", float, 0.0, "feedback sigma_x amplitude"),
    _Opt("ay", float, 0.0, "feedback sigma_y amplitude"),
    _Opt("az", float, 0.0, "feedback sigma_z amplitude"),
    _Opt("init", str, "plus_plus", "initial state",
         ("plus_plus", "ge", "ee", "gg", "custom")),
    _Opt("init-amps", str, None,
         "comma-separated complex amplitudes for --init custom"),
]
_INTEGRATION = [
    _Opt("dt", float, 1e-3, "step size (units of 1/omega)"),
    _Opt("t-end", float, 10.0, "final time"),
    _Opt("sample-every", int, 1, "emit a sample every k steps"),
]
_OUTPUT = [
    _Opt("out", str, None, "output CSV path"),
    _Opt("format", str, "csv", "output format", ("csv", "json")),
]
_ENSEMBLE = [
    _Opt("n-traj", int, 1000, "number of trajectories"),
    _Opt("seed", int, 0, "master seed (64-bit unsigned)"),
]
_SWEEP = [
    _Opt("axis", str, "ax", "swept feedback amplitude", SWEEP_AXES),
    _Opt("lo", float, 0.0, "lowest axis value"),
    _Opt("hi", float, math.pi, "highest axis value"),
    _Opt("n-points", int, 101, "number of axis values"),
    _Opt("observable", str, "abs_rho_eg", "recorded observable",
         SWEEP_OBSERVABLES),
]


def _add_options(parser, opts):
    for o in opts:
        kwargs = {"type": o.kind, "default": None, "help": o.help}
        if o.choices:
            kwargs["choices"] = list(o.choices)
        parser.add_argument(f"--{o.flag}", **kwargs)
    parser.add_argument("--config", default=None, help="key=value config file")


def _resolve(args, opts) -> dict:
    """defaults < config file < explicit flags."""
    config = load_config(args.config) if getattr(args, "config", None) else {}
    known = {o.flag for o in opts}
    for key in config:
        if key not in known:
            raise _UsageError(f"unknown config key {key!r}")
    resolved = {}
    for o in opts:
        value = getattr(args, o.dest, None)
        if value is None and o.flag in config:
            try:
                value = o.kind(config[o.flag])
            except ValueError:
                raise _UsageError(
                    f"config key {o.flag}={config[o.flag]!r} is not a valid {o.kind.__name__}"
                )
            if o.choices and value not in o.choices:
                raise _UsageError(f"config key {o.flag} must be one of {o.choices}")
        if value is None:
            value = o.default
        resolved[o.dest] = value
    return resolved


def _parse_amplitudes(raw: str) -> tuple:
    try:
        amps = tuple(complex(part.strip().replace(" ", "")) for part in raw.split(","))
    except ValueError:
        raise _UsageError(f"cannot parse amplitudes {raw!r}")
    if len(amps) != 4:
        raise _UsageError("custom state needs exactly 4 amplitudes")
    return amps


def _build_common(r: dict):
    try:
        params = SystemParams(r["omega1"], r["omega2"], r["g"], r["gamma"])
        feedback = FeedbackVector(r["ax"], r["ay"], r["az"])
        if r["init"] == "custom":
            if not r["init_amps"]:
                raise _UsageError("--init custom requires --init-amps")
            init = InitialState("custom", amplitudes=_parse_amplitudes(r["init_amps"]))
        else:
            init = InitialState(r["init"])
        cfg = IntegrationConfig(r["dt"], r["t_end"], r["sample_every"])
    except ValueError as exc:
        raise _UsageError(str(exc))
    return params, feedback, init, cfg


def _require_out(r: dict) -> str:
    if not r["out"]:
        raise _UsageError("--out is required")
    return r["out"]


def _base_meta(params, feedback, init, cfg, ensemble=None) -> dict:
    from .experiments import _feedback_dict, _integration_dict, _params_dict

    return {
        "params": _params_dict(params),
        "feedback": _feedback_dict(feedback),
        "init": init.describe(),
        "integration": _integration_dict(cfg),
        "ensemble": ensemble,
    }


def _write_series(out: str, fmt: str, ts: TimeSeries) -> None:
    if fmt == "json":
        write_timeseries_json(out, ts)
    else:
        write_timeseries_csv(out, ts)
    write_meta(out, ts.meta)


def _cmd_simulate(args) -> int:
    r = _resolve(args, _PHYSICS + _INTEGRATION + _OUTPUT)
    params, feedback, init, cfg = _build_common(r)
    out = _require_out(r)
    meta = _base_meta(params, feedback, init, cfg)
    ts = evolve(
        init.density_matrix(),
        lambda rho: feedback_rhs(rho, params, feedback),
        cfg,
        meta=meta,
    )
    _write_series(out, r["format"], ts)
    return 0


def _cmd_trajectories(args) -> int:
    r = _resolve(args, _PHYSICS + _INTEGRATION + _ENSEMBLE + _OUTPUT)
    params, feedback, init, cfg = _build_common(r)
    out = _require_out(r)
    try:
        ecfg = EnsembleConfig(
            n_traj=r["n_traj"],
            dt=cfg.dt,
            t_end=cfg.t_end,
            seed=r["seed"],
            sample_every=cfg.sample_every,
        )
    except ValueError as exc:
        raise _UsageError(str(exc))
    meta = _base_meta(
        params,
        feedback,
        init,
        cfg,
        ensemble={
            "n_traj": int(r["n_traj"]),
            "dt": cfg.dt,
            "t_end": cfg.t_end,
            "seed": int(r["seed"]),
            "sample_every": int(cfg.sample_every),
        },
    )
    ts = run_ensemble(init.density_matrix(), params, feedback, ecfg, meta=meta)
    _write_series(out, r["format"], ts)
    jumps = ts.meta["jumps"]
    print(
        f"jumps per trajectory: mean={jumps['mean']:.6g} std={jumps['std']:.6g} "
        f"total={jumps['total']} (n_traj={jumps['n_traj']})"
    )
    return 0


def _cmd_sweep(args) -> int:
    r = _resolve(args, _PHYSICS + _INTEGRATION + _SWEEP + _OUTPUT)
    params, feedback, init, cfg = _build_common(r)
    out = _require_out(r)
    try:
        spec = SweepSpec(
            axis=r["axis"],
            lo=r["lo"],
            hi=r["hi"],
            n_points=r["n_points"],
            observable=r["observable"],
            params=params,
            init=init,
            integration=cfg,
            base_feedback=feedback,
        )
    except ValueError as exc:
        raise _UsageError(str(exc))
    grid = sweep(spec)
    write_grid_csv(out, grid)
    write_meta(out, grid.meta)
    return 0


def _cmd_figure(args) -> int:
    r = _resolve(args, _OUTPUT)
    out = _require_out(r)
    products = run_preset(args.figure_id)
    stem = out[:-4] if out.endswith(".csv") else out
    written = []
    for label, product in products.items():
        path = out if len(products) == 1 else f"{stem}_{label}.csv"
        if isinstance(product, SweepGrid):
            write_grid_csv(path, product)
            write_meta(path, product.meta)
        else:
            write_timeseries_csv(path, product)
            write_meta(path, product.meta)
        written.append(path)
    print("\n".join(written))
    return 0


def _cmd_convert_rotation(args) -> int:
    try:
        rot = RotationForm(angle=args.angle, theta=args.theta, phi=args.phi)
    except ValueError as exc:
        raise _UsageError(str(exc))
    f = rotation_to_amplitudes(rot)
    print(f"ax={_fmt(f.ax)}, ay={_fmt(f.ay)}, az={_fmt(f.az)}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="jumpfeed", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="deterministic master-equation run")
    _add_options(p, _PHYSICS + _INTEGRATION + _OUTPUT)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="feedback-amplitude sweep grid")
    _add_options(p, _PHYSICS + _INTEGRATION + _SWEEP + _OUTPUT)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("trajectories", help="stochastic trajectory ensemble")
    _add_options(p, _PHYSICS + _INTEGRATION + _ENSEMBLE + _OUTPUT)
    p.set_defaults(func=_cmd_trajectories)

    p = sub.add_parser("figure", help="run a named figure preset")
    p.add_argument("figure_id", choices=list(FIGURE_IDS))
    _add_options(p, _OUTPUT)
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("convert-rotation", help="Bloch rotation -> amplitudes")
    p.add_argument("--angle", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--phi", type=float, required=True)
    p.set_defaults(func=_cmd_convert_rotation)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        code = exc.code
        return int(code) if isinstance(code, int) else 0
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _RUNTIME_ERRORS as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
