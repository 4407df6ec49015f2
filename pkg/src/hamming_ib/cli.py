"""Command-line interface: ``hamming-ib {curve,critical,repr,verify,sweep}``.

Exit codes: 0 success, 1 verification failed, 2 bad arguments,
3 inapplicable regime, 4 rate outside the tightness regime,
5 internal numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from .errors import NumericalError, RegimeError, ValidationError
from .hamming import HammingParams
from .oracle import GAP_THRESHOLD, SearchConfig, tightness_check
from .phi_curve import critical_rate, ib_value, phi, sample_curve
from .representations import optimal_representation, validate_representation

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_REGIME = 3
EXIT_OUTSIDE = 4
EXIT_NUMERICAL = 5

SIG_DIGITS = 12
CURVE_COLUMNS = ("R", "beta", "gamma", "phi", "phi_bar", "slope")
SWEEP_COLUMNS = ("n", "alpha", "Rc_over_logn", "max_rel_diff")
SWEEP_GRID_POINTS = 2000
ACHIEVE_TOL = 1e-9


class CliExit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), f".{SIG_DIGITS}g")


def _round(obj):
    """Round every float in a JSON-able structure to SIG_DIGITS significant digits."""
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _round(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(fmt(x)) if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _emit_json(obj, out) -> None:
    json.dump(_round(obj), out, indent=2, ensure_ascii=False)
    out.write("\n")


def _emit_csv(header, rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def _unit_scale(unit: str) -> float:
    return math.log(2) if unit == "bits" else 1.0


def _params(args) -> HammingParams:
    return HammingParams(args.n, args.alpha)


# ---------------------------------------------------------------------------
# subcommands


def cmd_curve(args, out, err) -> int:
    p = _params(args)
    if args.points < 2:
        raise ValidationError("--points must be at least 2")
    grid = np.linspace(0.0, p.log_n, args.points)
    pts = sample_curve(p, grid)
    s = _unit_scale(args.unit)
    rows = [
        (c.R / s, c.beta, c.gamma, c.phi / s, c.phi_bar / s, c.slope) for c in pts
    ]
    if args.format == "csv":
        _emit_csv(CURVE_COLUMNS, rows, out)
    else:
        _emit_json([dict(zip(CURVE_COLUMNS, r)) for r in rows], out)
    return EXIT_OK


def cmd_critical(args, out, err) -> int:
    p = _params(args)
    cp = critical_rate(p)
    s = _unit_scale(args.unit)
    rec = {
        "R_s": cp.R_s / s,
        "beta_s": cp.beta_s,
        "R_c": cp.R_c / s,
        "beta_c": cp.beta_c,
        "envelope_slope": cp.envelope_slope,
        "residuals": {"tangency": cp.tangency_residual},
    }
    if args.format == "csv":
        _emit_csv(
            ("R_s", "beta_s", "R_c", "beta_c", "envelope_slope", "tangency_residual"),
            [(rec["R_s"], cp.beta_s, rec["R_c"], cp.beta_c, cp.envelope_slope, cp.tangency_residual)],
            out,
        )
    else:
        _emit_json(rec, out)
    return EXIT_OK


def cmd_repr(args, out, err) -> int:
    p = _params(args)
    rep = optimal_representation(p, args.rate)
    report = validate_representation(p, rep)
    rec = rep.to_dict()
    rec["validation"] = report.to_dict()
    _emit_json(rec, out)
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_verify(args, out, err) -> int:
    p = _params(args)
    cp = critical_rate(p)
    rate = cp.R_c / 2 if args.rate is None else args.rate
    if not 0.0 < rate < cp.R_c:
        raise CliExit(
            EXIT_OUTSIDE,
            f"outside tightness regime: rate {rate:.12g} not in (0, R_c = {cp.R_c:.12g})",
        )
    cfg = SearchConfig.for_n(
        p.n,
        seed=args.seed,
        restarts=args.restarts,
        **({} if args.grid_resolution is None else {"grid_resolution": args.grid_resolution}),
    )
    report = tightness_check(p, rate, cfg)
    rec = report.to_dict()
    achieved = abs(report.best_at_card_n1 - report.envelope_value) <= ACHIEVE_TOL
    rec["gap_threshold"] = GAP_THRESHOLD
    rec["verified"] = bool(report.gap > GAP_THRESHOLD and achieved)
    _emit_json(rec, out)
    return EXIT_OK if rec["verified"] else EXIT_FAILED


def default_alpha_grid(n: int, count: int = 20) -> list[float]:
    """``count`` regular alphas, half on each side of 1/n."""
    left = count // 2
    right = count - left
    lo = np.linspace(0.0, 1.0 / n, left + 2)[1:-1]
    hi = np.linspace(1.0 / n, 1.0 / (n - 1), right + 2)[1:-1]
    return [float(a) for a in np.concatenate([lo, hi])]


def sweep_cell(n: int, alpha: float) -> tuple[float, float]:
    """(R_c / log n, max over (0, R_c) of (phi_bar - phi) / phi_bar)."""
    p = HammingParams(n, alpha)
    cp = critical_rate(p)
    r = np.linspace(0.0, cp.R_c, SWEEP_GRID_POINTS + 2)[1:-1]
    bar = np.asarray(ib_value(p, r))
    rel = (bar - np.asarray(phi(p, r))) / bar
    return cp.R_c / p.log_n, float(rel.max())


def cmd_sweep(args, out, err) -> int:
    rows = []
    for n in args.n:
        if n < 3:
            raise ValidationError("sweep needs n >= 3")
        alphas = args.alpha if args.alpha else default_alpha_grid(n, args.alpha_points)
        for a in alphas:
            try:
                rows.append((n, a, *sweep_cell(n, a)))
            except (RegimeError, NumericalError, ValidationError) as exc:
                print(f"warning: skipping n={n} alpha={a:.12g}: {exc}", file=err)
                rows.append((n, a, None, None))
    if args.format == "csv":
        _emit_csv(SWEEP_COLUMNS, rows, out)
    else:
        _emit_json([dict(zip(SWEEP_COLUMNS, r)) for r in rows], out)
    return EXIT_OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliExit(EXIT_USAGE, f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="hamming-ib",
        description="Information bottleneck curves and optimal representations for Hamming channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def params(sp, multi_n=False):
        if multi_n:
            sp.add_argument("--n", type=int, nargs="+", default=[3, 4, 5, 6, 7, 8])
        else:
            sp.add_argument("--n", type=int, required=True, help="alphabet size")
            sp.add_argument("--alpha", type=float, required=True, help="crossover probability")

    def fmt_flags(sp, unit=True):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        if unit:
            sp.add_argument("--unit", choices=("nats", "bits"), default="nats")

    sp = sub.add_parser("curve", help="sample phi and its concave envelope")
    params(sp)
    sp.add_argument("--points", type=int, default=1001)
    fmt_flags(sp)
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("critical", help="inflection and critical rates")
    params(sp)
    fmt_flags(sp)
    sp.set_defaults(func=cmd_critical, format="json")

    sp = sub.add_parser("repr", help="optimal representation at a rate (JSON)")
    params(sp)
    sp.add_argument("--rate", type=float, required=True)
    sp.set_defaults(func=cmd_repr)

    sp = sub.add_parser("verify", help="cardinality tightness check (JSON)")
    params(sp)
    sp.add_argument("--rate", type=float, default=None, help="defaults to R_c / 2")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--restarts", type=int, default=64)
    sp.add_argument("--grid-resolution", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="R_c position and max relative envelope gap over (n, alpha)")
    params(sp, multi_n=True)
    sp.add_argument("--alpha", type=float, nargs="*", default=None,
                    help="explicit alphas (default: a regular grid per n)")
    sp.add_argument("--alpha-points", type=int, default=20)
    fmt_flags(sp, unit=False)
    sp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out, err)
    except CliExit as exc:
        print(str(exc), file=err)
        return exc.code
    except ValidationError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except RegimeError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_REGIME
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=err)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
