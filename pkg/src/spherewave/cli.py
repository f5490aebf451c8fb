"""
Command-line interface: ``spherewave <command> [options]``.

Commands
--------
eval-green      closed form and plane-wave value of G at one point
eval-legendre   P_lam by series, integral and inverse-power expansion
sweep           CSV over a (theta, phi) grid
verify          run the self-check suites; exit 1 if any fails
planar-check    planar reference field, closed form against contours
build-contour   dump a sliding contour as JSON

JSON output carries ``"schema": "spherewave/1"`` and 17 significant
digits; CSV uses 12.  Angles are radians.  Exit codes: 0 success,
1 failure (failed suite or computation error), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from .contours import QuadratureControl, build_gamma
from .errors import SphereWaveError
from .geometry import NORTH_POLE, SpherePoint, angular_distance
from .green import DEFAULT_DELTA, GreenProblem, green_closed, green_pw, green_pw_general
from .planar import PLANAR_DOMAINS, PlanarProblem, planar_closed, planar_pw
from .special import SeriesControl, legendre_p_infinity, legendre_p_integral, legendre_p_series
from .suites import SUITES, run_suite

SCHEMA = "spherewave/1"
SWEEP_COLUMNS = ["theta", "phi", "m", "closed_re", "closed_im", "pw_re", "pw_im",
                 "rel_err", "error"]


class UsageError(Exception):
    """Bad argument values detected after parsing."""


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _num(v: float) -> str:
    v = float(v)
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def dumps(obj) -> str:
    """JSON text with every float written to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag])
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if hasattr(obj, "item"):
        return dumps(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _c(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _csv_num(v) -> str:
    if v is None or v == "":
        return ""
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".12g")


def _error_record(exc: Exception) -> dict:
    code = getattr(exc, "code", type(exc).__name__)
    return {"code": code, "message": str(exc)}


def _emit(record: dict, fmt: str, out) -> None:
    record = {"schema": SCHEMA, **record}
    if fmt == "json":
        out.write(dumps(record) + "\n")
        return
    flat = {}
    for k, v in record.items():
        if isinstance(v, complex):
            flat[f"{k}_re"], flat[f"{k}_im"] = v.real, v.imag
        elif isinstance(v, (list, tuple)) and len(v) == 2 and all(
                isinstance(t, float) for t in v):
            flat[f"{k}_re"], flat[f"{k}_im"] = v
        elif isinstance(v, (dict, list, tuple)):
            flat[k] = dumps(v)
        else:
            flat[k] = v
    w = csv.writer(out, lineterminator="\n")
    w.writerow(list(flat))
    w.writerow([_csv_num(v) if isinstance(v, (int, float)) and not isinstance(v, bool)
                else v for v in flat.values()])


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _radians(text: str) -> float:
    t = text.strip().lower()
    if t.endswith(("deg", "°", "d")):
        raise argparse.ArgumentTypeError("angles are radians only; degrees are rejected")
    try:
        v = float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("angle must be finite")
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _add_common(p: argparse.ArgumentParser, lam: bool = True) -> None:
    if lam:
        p.add_argument("--lambda", dest="lam", nargs=2, type=float, metavar=("RE", "IM"),
                       default=[0.3, 0.2], help="degree lambda = RE + i IM")
    p.add_argument("--delta", type=_positive, default=DEFAULT_DELTA,
                   help="sliding-contour parameter delta in (0, 0.5]")
    p.add_argument("--tol", type=_positive, default=None, help="relative tolerance")
    p.add_argument("--output", choices=["json", "csv"], default="json")
    p.add_argument("--seed", type=int, default=42, help="seed for random suites")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spherewave",
        description="Plane-wave representations for the Laplace-Beltrami equation on the sphere.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval-green", help="evaluate G by closed form and plane waves")
    _add_common(p)
    p.add_argument("--theta", type=_radians, required=True)
    p.add_argument("--phi", type=_radians, default=0.0)
    p.add_argument("--theta0", type=_radians, default=0.0, help="source polar angle")
    p.add_argument("--phi0", type=_radians, default=0.0, help="source azimuth")
    p.add_argument("--m", type=int, choices=[1, 2, 3, 4, 5], default=None,
                   help="sliding contour (source at the north pole only)")

    p = sub.add_parser("eval-legendre", help="evaluate P_lambda")
    _add_common(p)
    p.add_argument("--q", type=float, default=None, help="real argument in (-1, 1]")
    p.add_argument("--z", type=float, nargs=2, metavar=("RE", "IM"), default=None,
                   help="complex argument with |z| > 1")

    p = sub.add_parser("sweep", help="CSV sweep over a (theta, phi) grid")
    _add_common(p)
    p.add_argument("--n-theta", type=int, default=40)
    p.add_argument("--n-phi", type=int, default=40)
    p.add_argument("--theta0", type=_radians, default=0.0)
    p.add_argument("--phi0", type=_radians, default=0.0)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")

    p = sub.add_parser("verify", help="run the self-check suites")
    _add_common(p, lam=False)
    p.add_argument("--suite", action="append", choices=sorted(SUITES), default=None,
                   help="suite to run (repeatable); default all")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock seconds (output is then not reproducible)")

    p = sub.add_parser("planar-check", help="planar reference field")
    _add_common(p, lam=False)
    p.add_argument("--k", type=_positive, default=1.0)
    p.add_argument("--y1", type=float, required=True)
    p.add_argument("--y2", type=float, required=True)
    p.add_argument("--m", type=int, choices=list(PLANAR_DOMAINS), default=None)

    p = sub.add_parser("build-contour", help="dump gamma^(m) as JSON")
    _add_common(p, lam=False)
    p.add_argument("--m", type=int, choices=[1, 2, 3, 4, 5], required=True)
    p.add_argument("--samples", type=int, default=256)
    return parser


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _point(theta: float, phi: float) -> SpherePoint:
    if not 0.0 <= theta <= math.pi:
        raise UsageError(f"theta={theta} outside [0, pi]")
    return SpherePoint(theta, phi)


def _quad(cfg) -> QuadratureControl:
    return QuadratureControl(rel_tol=cfg.tol) if cfg.tol else QuadratureControl()


def _lam(cfg) -> complex:
    return complex(cfg.lam[0], cfg.lam[1])


def _check_delta(cfg):
    if not 0.0 < cfg.delta <= 0.5:
        raise UsageError("delta must lie in (0, 0.5]")


def cmd_eval_green(cfg) -> dict:
    _check_delta(cfg)
    x = _point(cfg.theta, cfg.phi)
    x0 = _point(cfg.theta0, cfg.phi0)
    prob = GreenProblem(_lam(cfg), x0)
    closed = green_closed(prob, x)
    if cfg.m is not None:
        if angular_distance(x0, NORTH_POLE) > 0:
            raise UsageError("--m needs the source at the north pole")
        pw, err = green_pw(prob, x, cfg.m, _quad(cfg), cfg.delta, full_output=True)
        m = cfg.m
    else:
        pw, m, err = green_pw_general(prob, x, _quad(cfg), cfg.delta, full_output=True)
    abs_err = abs(pw - closed)
    return {"command": "eval-green", "closed": _c(closed), "pw": _c(pw),
            "abs_err": abs_err, "rel_err": abs_err / abs(closed), "m_used": m,
            "quadrature_error_estimate": err}


def cmd_eval_legendre(cfg) -> dict:
    lam = _lam(cfg)
    ctrl = SeriesControl(rel_tol=cfg.tol) if cfg.tol else SeriesControl()
    rec: dict = {"command": "eval-legendre", "lambda": _c(lam)}
    if cfg.q is None and cfg.z is None:
        raise UsageError("give --q or --z")
    if cfg.q is not None:
        rec["q"] = cfg.q
        rec["series"] = _c(legendre_p_series(lam, cfg.q, ctrl))
        if 0.0 < cfg.q <= 1.0:
            rec["integral"] = _c(legendre_p_integral(lam, cfg.q))
    if cfg.z is not None:
        z = complex(*cfg.z)
        rec["z"] = _c(z)
        rec["infinity"] = _c(legendre_p_infinity(lam, z, ctrl))
    return rec


def _sweep_row(args) -> list:
    theta, phi, lam, x0, delta, tol = args
    row = {"theta": theta, "phi": phi}
    try:
        prob = GreenProblem(lam, x0)
        x = SpherePoint(theta, phi)
        closed = green_closed(prob, x)
        row.update(closed_re=closed.real, closed_im=closed.imag)
        ctrl = QuadratureControl(rel_tol=tol) if tol else QuadratureControl()
        pw, m, _ = green_pw_general(prob, x, ctrl, delta, full_output=True)
        row.update(m=m, pw_re=pw.real, pw_im=pw.imag, rel_err=abs(pw - closed) / abs(closed))
    except SphereWaveError as exc:
        row["error"] = exc.code
    return [_csv_num(row.get(c)) if c != "error" else row.get(c, "") for c in SWEEP_COLUMNS]


def sweep_grid(n_theta: int, n_phi: int) -> list[tuple[float, float]]:
    """Cell-centred polar angles and uniform azimuths, theta-major order."""
    return [((i + 0.5) * math.pi / n_theta, 2.0 * math.pi * j / n_phi)
            for i in range(n_theta) for j in range(n_phi)]


def cmd_sweep(cfg, out) -> None:
    _check_delta(cfg)
    if cfg.n_theta < 0 or cfg.n_phi < 0:
        raise UsageError("grid sizes must be non-negative")
    x0 = _point(cfg.theta0, cfg.phi0)
    tasks = [(t, p, _lam(cfg), x0, cfg.delta, cfg.tol) for t, p in sweep_grid(cfg.n_theta,
                                                                               cfg.n_phi)]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_sweep_row, tasks, chunksize=16))
    else:
        rows = [_sweep_row(t) for t in tasks]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    w.writerows(rows)


def cmd_verify(cfg) -> tuple[dict, int]:
    names = cfg.suite or list(SUITES)
    results = [run_suite(n, cfg.seed, cfg.tol) for n in names]
    failed = [r.name for r in results if not r.passed]
    rec = {"command": "verify", "seed": cfg.seed, "passed": not failed,
           "failed": failed, "suites": [r.as_dict(cfg.timing) for r in results]}
    return rec, (1 if failed else 0)


def cmd_planar_check(cfg) -> dict:
    prob = PlanarProblem(cfg.k, cfg.y1, cfg.y2)
    closed = planar_closed(prob)
    ms = [cfg.m] if cfg.m is not None else sorted(prob.domains())
    ctrl = _quad(cfg)
    pw = {}
    for m in ms:
        pw[str(m)] = _c(planar_pw(prob, m, ctrl))
    rel = max(abs(complex(*v) - closed) for v in pw.values()) / abs(closed)
    return {"command": "planar-check", "k": cfg.k, "y": [cfg.y1, cfg.y2],
            "closed": _c(closed), "pw": pw, "max_rel_err": rel}


def cmd_build_contour(cfg) -> dict:
    _check_delta(cfg)
    if cfg.samples < 64:
        raise UsageError("--samples must be >= 64")
    c = build_gamma(cfg.m, cfg.delta, cfg.samples)
    return {"command": "build-contour", "m": cfg.m, "delta": cfg.delta,
            **c.to_dict(cfg.samples)}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        cfg = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = cfg.output
    try:
        if cfg.command == "sweep":
            buf = io.StringIO()
            cmd_sweep(cfg, buf)
            out.write(buf.getvalue())
            return 0
        if cfg.command == "verify":
            rec, code = cmd_verify(cfg)
            _emit(rec, fmt, out)
            return code
        handler = {"eval-green": cmd_eval_green, "eval-legendre": cmd_eval_legendre,
                   "planar-check": cmd_planar_check,
                   "build-contour": cmd_build_contour}[cfg.command]
        _emit(handler(cfg), fmt, out)
        return 0
    except UsageError as exc:
        _emit({"command": cfg.command, "error": {"code": "UsageError", "message": str(exc)}},
              fmt, out)
        return 2
    except (SphereWaveError, ValueError) as exc:
        _emit({"command": cfg.command, "error": _error_record(exc)}, fmt, out)
        return 1


if __name__ == "__main__":
    sys.exit(main())
