"""Command-line front end.

Exit status: 0 success, 1 domain or configuration error, 2 verification
failure (or a numerical routine that did not converge), 3 truncation
insufficient.  Errors are reported as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from .cross_product import AnnulusGeometry
from .errors import (
    AnnulusError,
    ConfigError,
    DomainError,
    IterationLimitError,
    PreconditionError,
    QuadratureError,
    TruncationError,
)
from .expansions import series_kernel_closed, series_kernel_partial_sums
from .green import Pole, ReducedPoint, TruncationSpec, extend_green, green_cylinder, green_cylinder_field
from .special_functions import Accuracy
from .suites import DESCRIPTIONS, SUITES, run_suites
from .zeros import format_float, rho_zeros

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY, EXIT_TRUNCATION = 0, 1, 2, 3
SUPPORTED_N = (3, 4, 5)


@dataclass
class RunConfig:
    b: float = 2.0
    N: int = 3
    rel_tol: float = 1e-12
    abs_floor: float = 1e-13
    n_max: int = 40
    m_max: int = 60
    tail_tol: float = 1e-6
    min_axial_gap: float = 1e-2
    b_prime: float | None = None
    format: str = "csv"
    path: str | None = None

    def validate(self):
        if not self.b > 1:
            raise ConfigError(f"b must exceed 1, got {self.b}")
        if self.N not in SUPPORTED_N:
            raise ConfigError(f"N must be one of {SUPPORTED_N}, got {self.N}")
        if self.n_max < 1 or self.m_max < 1:
            raise ConfigError("n_max and m_max must be >= 1")
        if not (self.tail_tol > 0 and self.min_axial_gap > 0):
            raise ConfigError("tail_tol and min_axial_gap must be positive")
        if self.b_prime is not None and not self.b_prime > self.b:
            raise ConfigError(f"b_prime must exceed b = {self.b}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        Accuracy(self.rel_tol, self.abs_floor)
        return self

    @property
    def geom(self):
        return AnnulusGeometry(self.b, self.N)

    @property
    def accuracy(self):
        return Accuracy(self.rel_tol, self.abs_floor)

    @property
    def trunc(self):
        return TruncationSpec(self.n_max, self.m_max, self.tail_tol, self.min_axial_gap)


_FIELD_TYPES = {f.name: f for f in fields(RunConfig)}


def _coerce(key, text):
    name = _FIELD_TYPES[key].type
    try:
        if "int" in name:
            return int(text)
        if "float" in name:
            return None if text.lower() == "none" else float(text)
        return None if text.lower() == "none" and "None" in name else text
    except ValueError:
        raise ConfigError(f"bad value for {key}: {text!r}") from None


def read_config(path):
    """Parse a flat key=value file; '#' starts a comment.  Unknown keys are rejected."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, val)
    return out


def build_config(args) -> RunConfig:
    values = read_config(args.config) if args.config else {}
    for key in _FIELD_TYPES:
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            values[key] = cli_val
    return RunConfig(**values).validate()


# --------------------------------------------------------------------------
# output


def _json_value(v):
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        # JSON has no literal for non-finite numbers
        return format_float(v) if math.isfinite(v) else json.dumps(format_float(v))
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialise {type(v).__name__}")


def dumps(obj) -> str:
    """JSON text with every float at 17 significant digits."""
    if isinstance(obj, dict) and any(isinstance(v, list) for v in obj.values()):
        inner = ",\n".join(
            f"  {json.dumps(k)}: "
            + (
                "[\n" + ",\n".join("    " + _json_value(x) for x in v) + "\n  ]"
                if isinstance(v, list)
                else _json_value(v)
            )
            for k, v in obj.items()
        )
        return "{\n" + inner + "\n}\n"
    return _json_value(obj) + "\n"


def _header(command):
    return f"# annulus-harmonics v{__version__} {command}\n"


def _csv(command, header, rows, comments=()):
    buf = io.StringIO()
    buf.write(_header(command))
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_float(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _emit(text, cfg):
    if cfg.path:
        with open(cfg.path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# argument helpers


def _floats(text, count=None, what="value"):
    try:
        vals = [float(s) for s in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad {what}: {text!r}") from None
    if count is not None and len(vals) != count:
        raise ConfigError(f"{what} needs {count} comma-separated numbers, got {text!r}")
    return vals


def _grid(text, what):
    """'a:b:n' for n evenly spaced values, otherwise a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"{what} range must be start:stop:count")
        lo, hi = _floats(f"{parts[0]},{parts[1]}", 2, what)
        try:
            n = int(parts[2])
        except ValueError:
            raise ConfigError(f"bad count in {what}: {parts[2]!r}") from None
        if n < 1:
            raise ConfigError(f"{what} count must be >= 1")
        return list(np.linspace(lo, hi, n))
    return _floats(text, what=what)


def _pole(text):
    ry, zy = _floats(text, 2, "pole")
    return Pole(ry, zy)


def _point(text):
    r, gamma, z = _floats(text, 3, "point")
    return ReducedPoint(r, gamma, z)


def _green_json(res, trunc, **extra):
    return dumps(
        {
            **extra,
            "value": res.value,
            "tail_estimate": res.tail_estimate,
            "tail_tol": trunc.tail_tol,
            "terms_used": res.terms_used,
            "tail_heuristic": res.tail_heuristic,
        }
    )


# --------------------------------------------------------------------------
# commands


def cmd_zeros(args, cfg):
    table = rho_zeros(args.nu, AnnulusGeometry(cfg.b), args.count, cfg.accuracy)
    return table.to_json() if cfg.format == "json" else table.to_csv("zeros")


def cmd_series(args, cfg):
    if args.terms < 2:
        raise ConfigError("--terms must be >= 2")
    geom = AnnulusGeometry(cfg.b)
    ts = np.linspace(1.0, cfg.b, args.points)
    ps = series_kernel_partial_sums(args.nu, args.s, ts, geom, [args.terms - 1, args.terms])
    closed = series_kernel_closed(args.nu, args.s, ts, geom)
    last = float(np.max(np.abs(ps[1] - ps[0])))
    rows = [(t, p, c, abs(p - c)) for t, p, c in zip(ts, ps[1], closed)]
    if cfg.format == "json":
        return dumps(
            {
                "nu": float(args.nu), "s": float(args.s), "b": cfg.b, "terms": args.terms,
                "last_term_magnitude": last,
                "rows": [dict(zip(("t", "partial_sum", "closed_form", "abs_err"), r)) for r in rows],
            }
        )
    return _csv("series", ("t", "partial_sum", "closed_form", "abs_err"), rows,
                [f"last_term_magnitude {format_float(last)}"])


def cmd_eval(args, cfg):
    res = green_cylinder(cfg.geom, _point(args.point), _pole(args.pole), cfg.trunc)
    return _green_json(res, cfg.trunc)


def cmd_extend(args, cfg):
    x = _point(args.point)
    b_prime = cfg.b_prime if cfg.b_prime is not None else 1.05 * cfg.b
    res = extend_green(cfg.geom, x, _pole(args.pole), cfg.trunc, b_prime)
    region = "inner" if x.r < 1 else ("outside" if x.r > cfg.b else "inside")
    return _green_json(res, cfg.trunc, region=region, b_prime=b_prime)


def cmd_field(args, cfg):
    pole = _pole(args.pole)
    rs, gs, zs = _grid(args.r, "r"), _grid(args.gamma, "gamma"), _grid(args.z, "z")
    if any(not 1 <= r <= cfg.b for r in rs):
        raise DomainError(f"field radii must lie in [1, {cfg.b}]; use 'extend' outside")
    if any(abs(g) > 1 for g in gs):
        raise DomainError("gamma values must lie in [-1, 1]")
    pts = np.array([(r, g, z) for r in rs for g in gs for z in zs])
    vals, tails = green_cylinder_field(cfg.geom, pts[:, 0], pts[:, 1], pts[:, 2], pole, cfg.trunc, with_tail=True)
    rows = [(*p, v, t) for p, v, t in zip(pts, vals, tails)]
    worst = float(np.max(tails))
    if cfg.format == "json":
        text = dumps({"rows": [dict(zip(("r", "gamma", "z", "value", "tail"), r)) for r in rows]})
    else:
        text = _csv("field", ("r", "gamma", "z", "value", "tail"), rows)
    if worst > cfg.tail_tol:
        # the grid is still written so the caller can inspect which points failed
        _emit(text, cfg)
        raise TruncationError(f"largest tail estimate {worst:.3e} exceeds tail_tol {cfg.tail_tol:.1e}", worst)
    return text


def cmd_verify(args, cfg):
    names = args.suite or ["all"]
    records, ok = run_suites(names)
    report = {
        "version": __version__,
        "suites": names,
        "passed": ok,
        "records": [r.as_dict() for r in records],
    }
    _emit(dumps(report), cfg)
    return None if ok else EXIT_VERIFY


COMMANDS = {
    "zeros": cmd_zeros,
    "series": cmd_series,
    "eval": cmd_eval,
    "field": cmd_field,
    "extend": cmd_extend,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _common(p):
    g = p.add_argument_group("configuration (overrides --config)")
    g.add_argument("--config", help="flat key=value file")
    g.add_argument("--b", type=float, help="outer radius (inner radius is 1)")
    g.add_argument("--N", type=int, help="space dimension, one of 3, 4, 5")
    g.add_argument("--rel-tol", dest="rel_tol", type=float)
    g.add_argument("--abs-floor", dest="abs_floor", type=float)
    g.add_argument("--n-max", dest="n_max", type=int, help="angular modes 0..n_max")
    g.add_argument("--m-max", dest="m_max", type=int, help="radial eigenvalues per mode")
    g.add_argument("--tail-tol", dest="tail_tol", type=float)
    g.add_argument("--min-axial-gap", dest="min_axial_gap", type=float)
    g.add_argument("--b-prime", dest="b_prime", type=float, help="extension parameter, default 1.05 b")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--output", dest="path", help="write to this file instead of stdout")


def build_parser():
    parser = _Parser(prog="annulus-harmonics", description="Bessel cross-product zeros, Dini series and annular-cylinder Green functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("zeros", help="certified eigenvalue table rho_{nu,1..count}")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    _common(p)

    p = sub.add_parser("series", help="Dini series of the tent kernel against its closed form")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--s", type=float, required=True, help="kink location in (1, b)")
    p.add_argument("--terms", type=int, default=500)
    p.add_argument("--points", type=int, default=50)
    _common(p)

    for name, helptext in (("eval", "Green function of the annular cylinder at one point"),
                           ("extend", "harmonic extension of the Green function into L")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--pole", required=True, help="ry,zy")
        p.add_argument("--point", required=True, help="r,gamma,z")
        _common(p)

    p = sub.add_parser("field", help="Green function on a grid (CSV r,gamma,z,value,tail)")
    p.add_argument("--pole", required=True, help="ry,zy")
    p.add_argument("--r", required=True, help="list or start:stop:count")
    p.add_argument("--gamma", default="1")
    p.add_argument("--z", required=True)
    _common(p)

    epilog = "suites:\n" + "\n".join(f"  {k:<15} {v}" for k, v in DESCRIPTIONS.items())
    p = sub.add_parser("verify", help="run verification suites (JSON report)", epilog=epilog,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--suite", action="append", choices=[*SUITES, "all"],
                   help="repeatable; default all. The oracle self-test always runs first.")
    _common(p)
    return parser


def _exit_code(exc):
    if isinstance(exc, TruncationError):
        return EXIT_TRUNCATION
    if isinstance(exc, (IterationLimitError, QuadratureError)):
        return EXIT_VERIFY
    if isinstance(exc, (DomainError, PreconditionError, OverflowError)):
        return EXIT_DOMAIN
    return EXIT_VERIFY


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = build_config(args)
        out = COMMANDS[args.command](args, cfg)
        if isinstance(out, int):
            return out
        if out is not None:
            _emit(out, cfg)
        return EXIT_OK
    except (AnnulusError, OverflowError) as exc:
        code = _exit_code(exc)
        err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
        if getattr(exc, "tail_estimate", None) is not None:
            err["tail_estimate"] = float(exc.tail_estimate)
        sys.stderr.write(dumps(err))
        return code


if __name__ == "__main__":
    sys.exit(main())
