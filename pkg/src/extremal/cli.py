"""Command-line front end.

Every command builds an :class:`ExperimentConfig` (defaults, then an optional
YAML file, then flags), runs one experiment and streams rows to CSV or JSON.
Output never depends on wall-clock time or randomness.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path

import yaml

from . import __version__
from .approximants import (GAMMA2, cubic_frac, cubic_integer_poly, default_ell, exponent, histogram,
                           theta_upper_bound, qk_row, quadratic_spectrum, theta_prediction)
from .errors import ExtremalError, PrecisionExhausted, SeedError
from .intervals import Interval
from .minimal import first_minimum_trend, independent_triples, minimal_points
from .polys import root_near_xi
from .sequence import (DEFAULT_REFINEMENT_CAP, ExtremalSequence, decimal_digits, fibonacci_seed,
                       growth_report, validate_seed, xi_enclosure)

OUTPUT_DIR_ENV = "EXTREMAL_OUTPUT_DIR"
EXIT_OK, EXIT_VALIDATION, EXIT_PRECISION, EXIT_IO = 0, 2, 3, 4
DIGITS = 12


@dataclass
class ExperimentConfig:
    a: int | None = 1
    b: int | None = 2
    A: list | None = None          # explicit seed matrices override (a, b)
    B: list | None = None
    k_min: int = 1
    k_max: int = 12
    x_max: int = 10 ** 5
    eps: float = 1e-30
    refinement_cap: int = DEFAULT_REFINEMENT_CAP
    h_max: int = 20
    top: int = 10
    s: float = 1.0
    format: str = "csv"
    output: str | None = None

    def validate(self) -> None:
        for name in ("k_max", "x_max", "refinement_cap", "h_max", "top"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.k_min < 1 or self.k_min > self.k_max:
            raise ValueError("need 1 <= k_min <= k_max")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}; use csv or json")
        if (self.A is None) != (self.B is None):
            raise ValueError("give both A and B, or neither")
        if self.A is None and (self.a is None or self.b is None):
            raise ValueError("a seed is required: --a/--b or matrices A/B")

    def sequence(self) -> ExtremalSequence:
        if self.A is not None:
            seed = validate_seed(self.A, self.B, label="matrices")
        else:
            seed = fibonacci_seed(self.a, self.b)
        return ExtremalSequence(seed)

    def header(self) -> dict:
        return {k: v for k, v in asdict(self).items() if k != "output"}


def load_config(path: str | None, overrides: dict) -> ExperimentConfig:
    data = {}
    if path:
        with open(path) as fh:
            data = yaml.safe_load(fh) or {}
        if not isinstance(data, dict):
            raise ValueError(f"{path}: expected a mapping")
        seed = data.pop("seed", None)
        if isinstance(seed, dict):
            data.update(seed)
        known = {f.name for f in fields(ExperimentConfig)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"{path}: unknown keys {sorted(unknown)}")
    data.update({k: v for k, v in overrides.items() if v is not None})
    if overrides.get("a") is not None or overrides.get("b") is not None:
        data.pop("A", None)
        data.pop("B", None)
    cfg = ExperimentConfig(**data)
    cfg.validate()
    return cfg


# -- rendering -------------------------------------------------------------------

def render_int(n: int) -> str:
    """Exact below 30 digits, otherwise ``d.ddddddddde+N`` (truncated mantissa)."""
    digits = decimal_digits(n)
    if digits < 30:
        return str(n)
    head = str(abs(n) // 10 ** (digits - 10))
    return f"{'-' if n < 0 else ''}{head[0]}.{head[1:]}e+{digits - 1}"


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "nan" if math.isnan(x) else f"{x:.{DIGITS}g}"
    return str(x)


def ends(iv: Interval | None):
    """Float endpoints rounded outward, or blanks."""
    if iv is None:
        return None, None
    return iv.lower, iv.upper


def json_value(x):
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return None
    return x


class RowWriter:
    """Streams rows in order; CSV gets a commented header block."""

    def __init__(self, stream, fmt_name: str, command: str, cfg: ExperimentConfig, columns):
        self.stream, self.format, self.columns = stream, fmt_name, columns
        self.count = 0
        if fmt_name == "csv":
            stream.write(f"# extremal {__version__}\n")
            stream.write(f"# command: {command}\n")
            stream.write(f"# config: {json.dumps(cfg.header(), sort_keys=True)}\n")
            stream.write(f"# precision: {DIGITS} significant digits\n")
            stream.write(",".join(columns) + "\n")
        else:
            stream.write("[")

    def write(self, row: dict) -> None:
        if self.format == "csv":
            self.stream.write(",".join(fmt(row.get(c)) for c in self.columns) + "\n")
        else:
            sep = "," if self.count else ""
            obj = {c: json_value(row.get(c)) for c in self.columns}
            self.stream.write(sep + "\n  " + json.dumps(obj))
        self.count += 1
        self.stream.flush()

    def close(self) -> None:
        if self.format == "json":
            self.stream.write("\n]\n" if self.count else "]\n")
        self.stream.flush()


def open_output(cfg: ExperimentConfig, command: str):
    if cfg.output == "-":
        return sys.stdout, False
    if cfg.output:
        path = Path(cfg.output)
    elif os.environ.get(OUTPUT_DIR_ENV):
        path = Path(os.environ[OUTPUT_DIR_ENV]) / f"{command}.{cfg.format}"
    else:
        return sys.stdout, False
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline=""), True


# -- commands --------------------------------------------------------------------

def start_enclosure(cfg: ExperimentConfig, seq: ExtremalSequence):
    """Coarsest enclosure of width at most ``eps``; commands refine further on demand."""
    return xi_enclosure(seq, Fraction(cfg.eps), cfg.refinement_cap)


GENERATE_COLS = ["k", "Y", "Y_digits", "y0", "y1", "y2", "det", "d",
                 "q_lower", "q_upper", "LY_lower", "LY_upper"]


def cmd_generate(cfg: ExperimentConfig, out: RowWriter) -> None:
    seq = cfg.sequence()
    report = growth_report(seq, max(cfg.k_max, 4), cfg.refinement_cap)
    for r in report.rows:
        if not cfg.k_min <= r.k <= cfg.k_max:
            continue
        y = seq[r.k]
        q_lo, q_hi = ends(r.q)
        l_lo, l_hi = ends(r.l_times_norm)
        out.write({"k": r.k, "Y": render_int(seq.norm(r.k)), "Y_digits": r.digits,
                   "y0": render_int(y.x0), "y1": render_int(y.x1), "y2": render_int(y.x2),
                   "det": r.det, "d": r.d, "q_lower": q_lo, "q_upper": q_hi,
                   "LY_lower": l_lo, "LY_upper": l_hi})


MINIMAL_COLS = ["x0", "x1", "x2", "L_lower", "L_upper", "independent_flag"]


def cmd_minimal(cfg: ExperimentConfig, out: RowWriter) -> None:
    seq = cfg.sequence()
    recs = minimal_points(start_enclosure(cfg, seq), cfg.x_max)
    flags = set(independent_triples(recs).indices)
    for i, r in enumerate(recs):
        lo, hi = ends(r.l_interval)
        out.write({"x0": r.point.x0, "x1": r.point.x1, "x2": r.point.x2,
                   "L_lower": lo, "L_upper": hi, "independent_flag": int(i in flags)})


QUADRATIC_COLS = ["k", "degree", "H_Q", "Y_digits", "H_alpha", "alpha_degree",
                  "value_ratio_lower", "value_ratio_upper", "root_lo", "root_hi",
                  "exponent_lower", "exponent_upper", "target"]


def cmd_quadratic(cfg: ExperimentConfig, out: RowWriter) -> None:
    seq = cfg.sequence()
    for k in range(max(cfg.k_min, 1), cfg.k_max + 1):
        row = qk_row(seq, k)
        xi = seq.enclosure(4, max(cfg.refinement_cap, k + 8))
        alpha = root_near_xi(row.poly, xi)
        e = exponent(alpha, xi) if alpha.height >= 2 else None
        v_lo, v_hi = ends(row.value_ratio)
        r_lo, r_hi = ends(alpha.interval)
        e_lo, e_hi = ends(e)
        out.write({"k": k, "degree": row.degree, "H_Q": render_int(row.poly.height),
                   "Y_digits": decimal_digits(seq.norm(k)), "H_alpha": render_int(alpha.height),
                   "alpha_degree": alpha.degree, "value_ratio_lower": v_lo, "value_ratio_upper": v_hi,
                   "root_lo": r_lo, "root_hi": r_hi, "exponent_lower": e_lo, "exponent_upper": e_hi,
                   "target": 2 * GAMMA2})


CUBIC_COLS = ["k", "Y_k_digits", "frac_lo", "frac_hi", "bin", "delta_k", "theta_k", "H_P",
              "root_lo", "root_hi", "precision"]


def cmd_cubic(cfg: ExperimentConfig, out: RowWriter) -> None:
    seq = cfg.sequence()
    for k in range(max(cfg.k_min, 2), cfg.k_max + 1):
        c = cubic_integer_poly(seq, k)
        rec = c.record
        f_lo, f_hi = ends(rec.frac)
        r_lo, r_hi = ends(c.alpha.interval)
        out.write({"k": k, "Y_k_digits": rec.digits, "frac_lo": f_lo, "frac_hi": f_hi,
                   "bin": min(4, int(rec.frac.mid * 10)), "delta_k": rec.delta.mid,
                   "theta_k": c.theta.mid if c.theta is not None else None,
                   "H_P": render_int(c.poly.height), "root_lo": r_lo, "root_hi": r_hi,
                   "precision": DIGITS})


EXPONENT_COLS = ["k", "Y_k_digits", "frac_mid", "delta_k", "theta_k", "theta_predicted",
                 "theta_upper_bound", "theta_floor"]


def cmd_exponents(cfg: ExperimentConfig, out: RowWriter) -> None:
    seq = cfg.sequence()
    for k in range(max(cfg.k_min, 2), cfg.k_max + 1):
        c = cubic_integer_poly(seq, k)
        d = c.record.delta.mid
        out.write({"k": k, "Y_k_digits": c.record.digits, "frac_mid": c.record.frac.mid,
                   "delta_k": d, "theta_k": c.theta.mid if c.theta is not None else None,
                   "theta_predicted": theta_prediction(d), "theta_upper_bound": theta_upper_bound(d),
                   "theta_floor": GAMMA2 + 1})


SPECTRUM_COLS = ["kind", "poly", "H", "root_lo", "root_hi", "dist_lo", "dist_hi",
                 "exponent", "alpha_k"]


def cmd_spectrum(cfg: ExperimentConfig, out: RowWriter) -> None:
    seq = cfg.sequence()
    rep = quadratic_spectrum(start_enclosure(cfg, seq), cfg.h_max, cfg.top)

    def emit(kind, e, dist=None):
        r_lo, r_hi = ends(e.root)
        d_lo, d_hi = ends(dist or e.distance)
        out.write({"kind": kind, "poly": e.poly.render(), "H": e.height, "root_lo": r_lo,
                   "root_hi": r_hi, "dist_lo": d_lo, "dist_hi": d_hi,
                   "exponent": e.exponent.mid if e.exponent is not None else None,
                   "alpha_k": int(e.is_alpha_k)})

    for e in rep.entries:
        emit("near", e)
    emit("floor", rep.floor_entry, rep.floor)


FIRSTMIN_COLS = ["k", "X_digits", "lambda_lower", "lambda_upper", "lambda_log_s"]


def cmd_firstmin(cfg: ExperimentConfig, out: RowWriter) -> None:
    seq = cfg.sequence()
    rows = first_minimum_trend(seq, range(max(cfg.k_min, 1), cfg.k_max + 1), cfg.s, cap=cfg.x_max)
    for k, X, lam, scaled in rows:
        lo, hi = ends(lam)
        out.write({"k": k, "X_digits": decimal_digits(X), "lambda_lower": lo,
                   "lambda_upper": hi, "lambda_log_s": scaled})


HISTOGRAM_COLS = ["bin_lo", "bin_hi", "count"]


def cmd_histogram(cfg: ExperimentConfig, out: RowWriter) -> None:
    seq = cfg.sequence()
    vals = [cubic_frac(seq, k, default_ell(seq)).frac.mid for k in range(max(cfg.k_min, 2), cfg.k_max + 1)]
    for i, count in enumerate(histogram(vals)):
        out.write({"bin_lo": i / 10, "bin_hi": (i + 1) / 10, "count": count})


def cmd_fixtures(cfg: ExperimentConfig, stream) -> None:
    from .fixtures import measure_constants
    a, b = cfg.a, cfg.b
    data = measure_constants(a, b, k_max=cfg.k_max, x_max=cfg.x_max, h_max=cfg.h_max)
    stream.write(json.dumps(data, indent=2, sort_keys=True) + "\n")


COMMANDS = {
    "generate": (cmd_generate, GENERATE_COLS, "sequence table with growth diagnostics"),
    "minimal": (cmd_minimal, MINIMAL_COLS, "brute-force minimal points"),
    "quadratic": (cmd_quadratic, QUADRATIC_COLS, "quadratic approximants Q_k and their exponents"),
    "cubic": (cmd_cubic, CUBIC_COLS, "monic cubic construction and fractional parts"),
    "exponents": (cmd_exponents, EXPONENT_COLS, "measured versus predicted cubic exponents"),
    "spectrum": (cmd_spectrum, SPECTRUM_COLS, "exhaustive degree <= 2 spectrum near xi"),
    "firstmin": (cmd_firstmin, FIRSTMIN_COLS, "first minimum lambda(Y_k) and its (log X)^s trend"),
    "histogram": (cmd_histogram, HISTOGRAM_COLS, "binned fractional parts <y_k0 xi^3 / l>"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extremal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, _, help_text) in list(COMMANDS.items()) + [("fixtures", (None, None, "regenerate constants.json"))]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="YAML file with ExperimentConfig fields")
        p.add_argument("--a", type=int)
        p.add_argument("--b", type=int)
        p.add_argument("--k-min", dest="k_min", type=int)
        p.add_argument("--k-max", dest="k_max", type=int)
        p.add_argument("--x-max", dest="x_max", type=int)
        p.add_argument("--eps", type=float)
        p.add_argument("--refinement-cap", dest="refinement_cap", type=int)
        p.add_argument("--h-max", dest="h_max", type=int)
        p.add_argument("--top", type=int)
        p.add_argument("--s", type=float)
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--output", "-o", help="file path, or - for stdout")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = load_config(args.config, overrides)
        cfg.sequence()  # seed validation before any output is opened
        stream, owned = open_output(cfg, args.command)
        try:
            if args.command == "fixtures":
                cmd_fixtures(cfg, stream)
            else:
                func, cols, _ = COMMANDS[args.command]
                writer = RowWriter(stream, cfg.format, args.command, cfg, cols)
                func(cfg, writer)
                writer.close()
        finally:
            if owned:
                stream.close()
    except SeedError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except PrecisionExhausted as exc:
        print(f"error: PrecisionExhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, TypeError, yaml.YAMLError, ExtremalError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def main() -> None:
    sys.exit(run())
