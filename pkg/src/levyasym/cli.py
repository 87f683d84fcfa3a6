"""Command-line interface: ``levyasym <command> --model ...``.

Commands emit CSV (with header) or JSON on stdout or ``--output``; numbers
are printed with 12 significant digits so repeated runs are byte-identical.
Exit status is 0 on success, 1 when a verification does not converge or a
computation fails, and 2 on configuration errors (error JSON on stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import asym
from .asym import constant, constant_identities, limit_probe, sequence_report
from .catalog import ProcessModel, parse_model_reference
from .density import DensityQuery, density_at, density_at_origin, origin_karamata_ratio
from .errors import (
    DomainError,
    IndexRangeError,
    LevyAsymError,
    MissingIndexError,
    OutOfScopeError,
    ParamRangeError,
    SpecFileError,
    TransienceError,
)
from .potential import green_asym_ratio, green_ball, green_density
from .radial import QuadratureConfig
from .tail import TailQuery, tail_prob_raw, tail_ratio

CONFIG_ERRORS = (SpecFileError, ParamRangeError, DomainError, MissingIndexError, IndexRangeError,
                 OutOfScopeError, TransienceError)

THEOREMS = ("density-asymp", "tail", "green-ball", "green-point", "levy", "srlt", "karamata", "bgr")


class ConfigError(LevyAsymError):
    code = "CONFIG"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    v = float(v)
    if math.isnan(v):
        return ""
    return format(v, ".12g")


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return None if not math.isfinite(v) else float(format(v, ".12g"))
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def _emit(rows: list[dict], columns: list[str], args, stream):
    if args.format == "json":
        payload = {"schema": "levyasym/rows-v1", "command": args.command,
                   "columns": columns, "rows": [_json_value({c: r.get(c) for c in columns}) for r in rows]}
        text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_fmt(r.get(c)) for c in columns])
        text = buf.getvalue()
    _write(text, args, stream)


def _write(text, args, stream):
    if args.output and args.output != "-":
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        stream.write(text)


def _grid(values, log_range, name):
    if values:
        out = [float(v) for v in values]
    elif log_range:
        lo, hi, n = log_range
        n = int(n)
        if not (lo > 0 and hi > 0 and n >= 1):
            raise ConfigError(f"--{name}-range needs positive bounds and a count >= 1")
        out = list(np.geomspace(lo, hi, n))
    else:
        raise ConfigError(f"no {name} values given (use --{name} or --{name}-range)")
    if not out:
        raise ConfigError(f"empty {name} grid")
    return out


def _quad(args) -> QuadratureConfig:
    base = QuadratureConfig.from_profile(args.profile) if args.profile else QuadratureConfig.from_env()
    try:
        return base.with_overrides(rel_tol=args.rel_tol, max_segments=args.max_segments,
                                   window_length=args.window_length)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _safe(fn, *a):
    try:
        return fn(*a)
    except (MissingIndexError, IndexRangeError, OutOfScopeError, DomainError):
        return None


# ---------------------------------------------------------------------------
# row producers
# ---------------------------------------------------------------------------

def _cmd_density(model, args, quad):
    rows = []
    for t in _grid(args.t, args.t_range, "t"):
        p0 = density_at_origin(t, model, quad)
        for r in _grid(args.r, args.r_range, "r"):
            if r < 0:
                raise ConfigError("radii must be non-negative")
            p = p0 if r == 0 else density_at(DensityQuery(t, r, model), quad)
            rows.append({"t": t, "r": r, "p": p, "p0": p0, "srlt_ratio": p / p0})
    return rows, ["t", "r", "p", "p0", "srlt_ratio"]


def _cmd_tail(model, args, quad):
    rows = []
    for t in _grid(args.t, args.t_range, "t"):
        for r in _grid(args.r, args.r_range, "r"):
            if not r > 0:
                raise ConfigError("radii must be positive")
            raw = tail_prob_raw(TailQuery(t, r, model), quad)
            alpha = model.psi.declared_index("zero" if r > 1 else "infinity")
            ratio = raw / (t * float(model.psi(1.0 / r))) if alpha is not None and alpha < 2 else None
            rows.append({"t": t, "r": r, "P": min(1.0, max(0.0, raw)), "tail_ratio": ratio})
    return rows, ["t", "r", "P", "tail_ratio"]


def _cmd_levy(model, args, quad):
    if model.levy_density is None:
        raise ConfigError(f"{model.name} has no Levy density profile")
    rows = []
    for r in _grid(args.r, args.r_range, "r"):
        rows.append({"r": r, "nu": float(model.levy_density(r)),
                     "levy_ratio": asym.levy_ratio(r, model, quad)})
    return rows, ["r", "nu", "levy_ratio"]


def _cmd_green(model, args, quad):
    rows = []
    for r in _grid(args.r, args.r_range, "r"):
        g = green_density(r, model, quad)
        gb = green_ball(r, model, quad)
        ratios = _safe(lambda: green_asym_ratio(r, model, quad))
        rows.append({"r": r, "G": g, "G_ball": gb,
                     "green_ball_ratio": None if ratios is None else ratios.ball,
                     "green_point_ratio": None if ratios is None else ratios.point})
    return rows, ["r", "G", "G_ball", "green_ball_ratio", "green_point_ratio"]


def _cmd_constants(args, quad):
    if args.dim is None or args.alpha is None:
        raise ConfigError("constants requires --dim and --alpha")
    d, a = args.dim, args.alpha
    if d < 1:
        raise ConfigError("--dim must be a positive integer")
    row = {"dim": d, "alpha": a}
    for kind in asym.KINDS:
        row[kind] = _safe(lambda k=kind: constant(k, d, a).value)
    report = _safe(constant_identities, d, a, quad)
    row["identities"] = "" if report is None else ("pass" if report else "fail")
    return [row], ["dim", "alpha", "A", "C", "C_tilde", "A_tilde", "identities"]


# ---------------------------------------------------------------------------
# verification harness
# ---------------------------------------------------------------------------

def _index(model, at):
    alpha = model.psi.declared_index(at)
    if alpha is None:
        raise MissingIndexError(f"{model.name} declares no index at {at}")
    return alpha


def _spatial_side(model):
    """Limit point of |x| for density/tail/levy checks: small |x| probes psi at infinity."""
    a_inf = model.psi.rv_index_inf
    return "small" if a_inf is not None and 0 < a_inf < 2 else "large"


def _r_grid(side):
    return [1e-4, 3e-4, 1e-3] if side == "small" else [1e3, 3e3, 1e4]


def verify_theorem(model: ProcessModel, theorem: str, quad: QuadratureConfig,
                   levels=None, threshold: float = 0.05) -> dict:
    """Run one harness configuration and return its JSON-ready report."""
    d = model.dim
    if theorem in ("density-asymp", "tail"):
        side = _spatial_side(model)
        alpha = _index(model, "infinity" if side == "small" else "zero")
        levels = levels or [1e-2, 1e-3, 1e-4, 1e-5]
        if theorem == "density-asymp":
            target = constant("A", d, alpha).value
            fn = lambda t, r: asym.density_asym_ratio(t, r, model, quad)
        else:
            target = constant("C", d, alpha).value
            fn = lambda t, r: tail_ratio(t, 1.0 / r, model, quad,
                                         at="infinity" if side == "small" else "zero")
        rep = limit_probe(fn, "t_psi_to_zero", model, levels, _r_grid(side), target, threshold,
                          label=theorem)
    elif theorem == "srlt":
        levels = levels or [1e1, 1e2, 1e3, 1e4]
        rep = limit_probe(lambda t, r: density_at(DensityQuery(t, r, model), quad)
                          / density_at_origin(t, model, quad),
                          "t_psi_to_inf", model, levels, [1.0, 10.0, 100.0], 1.0, threshold,
                          label=theorem)
    elif theorem == "karamata":
        ts = levels or [1e1, 1e2, 1e3, 1e4]
        vals = [origin_karamata_ratio(t, model, quad, at="zero") for t in ts]
        rep = sequence_report(ts, vals, 1.0, threshold, label=theorem)
    elif theorem == "levy":
        xs = levels or ([1e-2, 1e-3, 1e-4, 1e-5] if _spatial_side(model) == "small"
                        else [1e2, 1e3, 1e4, 1e5])
        at = "infinity" if xs[-1] < 1 else "zero"
        target = constant("A", d, _index(model, at)).value
        rep = sequence_report(xs, [asym.levy_ratio(x, model, quad) for x in xs], target,
                              threshold, label=theorem)
    elif theorem in ("green-ball", "green-point"):
        if theorem == "green-ball":
            rs = levels or [1e1, 1e2, 1e3, 1e4]
            at = "zero"
        else:
            rs = levels or [1e-1, 1e-2, 1e-3, 1e-4]
            at = "infinity"
        _index(model, at)
        ratios = [green_asym_ratio(r, model, quad, at=at) for r in rs]
        vals = [g.ball if theorem == "green-ball" else g.point for g in ratios]
        rep = sequence_report(rs, vals, 1.0, threshold, label=theorem)
    elif theorem == "bgr":
        grid = levels or [1.0, 10.0, 100.0]
        low, high = asym.bgr_check(model, grid, grid, quad)
        ok = 0.1 < low and high < 10.0
        return {"label": "bgr", "model": model.name, "c_low": low, "c_high": high,
                "bounds": [0.1, 10.0], "verdict": "CONVERGED" if ok else "DIVERGED"}
    else:
        raise ConfigError(f"unknown theorem {theorem!r}; expected one of {list(THEOREMS)}")
    out = rep.to_dict()
    out["model"] = model.name
    return out


def _cmd_verify(model, args, quad, stream):
    theorems = args.theorem or list(THEOREMS)
    reports = []
    for th in theorems:
        try:
            reports.append(verify_theorem(model, th, quad, args.levels))
        except (MissingIndexError, IndexRangeError, TransienceError, OutOfScopeError) as exc:
            reports.append({"label": th, "model": model.name, "verdict": "SKIPPED",
                            "reason": exc.to_dict()})
    requested = [r for r in reports if r["verdict"] != "SKIPPED"] if not args.theorem else reports
    payload = {"schema": "levyasym/verify-v1", "reports": [_json_value(r) for r in reports]}
    _write(json.dumps(payload, indent=2) + "\n", args, stream)
    return 0 if requested and all(r["verdict"] == "CONVERGED" for r in requested) else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="levyasym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, model=True):
        if model:
            p.add_argument("--model", required=True,
                           help="spec file path or catalog shortcut such as stable:alpha=0.7,dim=3")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
        p.add_argument("--profile", default=None, help="quadrature profile: default, fast, accurate")
        p.add_argument("--rel-tol", type=float, default=None)
        p.add_argument("--max-segments", type=int, default=None)
        p.add_argument("--window-length", type=float, default=None)

    def grids(p, t=True):
        if t:
            p.add_argument("--t", type=float, nargs="+")
            p.add_argument("--t-range", type=float, nargs=3, metavar=("LO", "HI", "N"))
        p.add_argument("--r", type=float, nargs="+")
        p.add_argument("--r-range", type=float, nargs=3, metavar=("LO", "HI", "N"))

    for name, with_t in (("density", True), ("tail", True), ("levy", False), ("green", False)):
        p = sub.add_parser(name)
        common(p)
        grids(p, with_t)
    p = sub.add_parser("constants")
    common(p, model=False)
    p.add_argument("--dim", type=int)
    p.add_argument("--alpha", type=float)
    p = sub.add_parser("verify")
    common(p)
    p.add_argument("--theorem", action="append", choices=THEOREMS)
    p.add_argument("--levels", type=float, nargs="+", default=None,
                   help="override the control levels of the harness")
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise ConfigError("a command is required")
        quad = _quad(args)
        if args.command == "constants":
            rows, cols = _cmd_constants(args, quad)
            _emit(rows, cols, args, stdout)
            return 0
        model = parse_model_reference(args.model)
        if args.command == "verify":
            return _cmd_verify(model, args, quad, stdout)
        producer = {"density": _cmd_density, "tail": _cmd_tail, "levy": _cmd_levy,
                    "green": _cmd_green}[args.command]
        rows, cols = producer(model, args, quad)
        _emit(rows, cols, args, stdout)
        return 0
    except (ConfigError,) + CONFIG_ERRORS as exc:
        stderr.write(json.dumps(exc.to_dict()) + "\n")
        return 2
    except ValueError as exc:
        stderr.write(json.dumps({"error": "CONFIG", "message": str(exc)}) + "\n")
        return 2
    except LevyAsymError as exc:
        stderr.write(json.dumps(exc.to_dict()) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
