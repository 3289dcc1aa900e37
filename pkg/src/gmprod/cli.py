"""Command-line front end with reproducible seeds and machine-readable output.

Subcommands: ``moments`` (formula evaluation), ``distinguish`` (threshold
test power), ``sweep`` (phase data over a geometric grid of inner
dimensions), ``oracle`` (exact enumeration vs. closed forms). Output is
canonical JSON (sorted keys) or CSV (fixed header, LF endings, reals with
17 significant digits); a re-run with the same configuration and seed is
byte-identical. Exit status: 0 success, 2 invalid arguments, 3 exact
oracle over budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import numpy as np

from .core import ChainSpec
from .distinguisher import (
    build_test,
    chebyshev_error,
    draw_h_samples,
    empirical_power,
    tv_lower_bound_empirical,
    tv_upper_bound,
)
from .moments import (
    closed_form_moments,
    mean_h_asymptotic,
    mean_h_product,
    mean_h_product_exact,
    mean_h_single,
    variance_single_exact,
)
from .oracle import OracleBudgetError, WickBudget, wick_exact_mean_h, wick_exact_var_h_single
from .sampling import SeedSpec

CONSTANT_NAMES = ("c", "c1", "c2", "c3", "c4", "kappa_p", "kappa_q")

MOMENTS_CSV_HEADER = [
    "p", "q", "inner", "mean_product", "mean_asymptotic", "mean_single",
    "var_single", "var_product_bound", "s1", "s2", "s3", "s4", "s5", "s6",
]
DISTINGUISH_CSV_HEADER = [
    "p", "q", "inner", "trials", "seed", "threshold", "mu_single", "mu_product",
    "accuracy", "false_positive_rate", "false_negative_rate", "chebyshev_error_bound",
]
SWEEP_CSV_HEADER = ["d", "accuracy", "tv_lower_empirical", "tv_upper_c1", "chebyshev_error", "mean_gap"]


def _parse_inner(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        dims = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"malformed inner dimension list: {text!r}") from None
    if any(d < 1 for d in dims):
        raise ValueError(f"inner dimensions must be positive, got {dims}")
    return dims


def _parse_constants(text: str) -> dict[str, float]:
    constants = {name: 1.0 for name in CONSTANT_NAMES}
    if not text.strip():
        return constants
    for item in text.split(","):
        name, sep, raw = item.partition("=")
        name = name.strip()
        if not sep or name not in CONSTANT_NAMES:
            raise ValueError(
                f"bad constant {item!r}; expected name=value with name in {CONSTANT_NAMES}"
            )
        value = float(raw)
        if not value > 0:
            raise ValueError(f"constant {name} must be positive, got {value}")
        constants[name] = value
    return constants


def _default_seed() -> int:
    raw = os.environ.get("GMPROD_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"GMPROD_SEED must be an integer, got {raw!r}") from None


def _fmt_real(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_real(v) for v in row])
    return buf.getvalue()


def canonical_json(obj) -> str:
    """Stable serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _spec_from(args) -> ChainSpec:
    spec = ChainSpec(args.p, args.q, _parse_inner(args.inner))
    spec.validate(strict=args.strict_dims)
    return spec


def _bound_kwargs(constants: dict[str, float]) -> dict[str, float]:
    return {k: v for k, v in constants.items() if k != "c"}


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def cmd_moments(args) -> str:
    spec = _spec_from(args)
    if spec.r < 2:
        raise ValueError("moments requires at least one inner dimension")
    constants = _parse_constants(args.constants)
    plan = build_test(spec, **_bound_kwargs(constants))
    s = closed_form_moments(spec.inner)
    report = {
        "p": spec.p,
        "q": spec.q,
        "inner": list(spec.inner),
        "mean_product": mean_h_product(spec),
        "mean_asymptotic": mean_h_asymptotic(spec),
        "mean_single": mean_h_single(spec.p, spec.q, spec.d1),
        "var_single": variance_single_exact(spec.p, spec.q) / spec.d1**4,
        "var_product_bound": plan.var_product_bound,
        "s1": s.s1, "s2": s.s2, "s3": s.s3, "s4": s.s4, "s5": s.s5, "s6": s.s6,
        "constants": constants,
    }
    if args.format == "csv":
        row = [report[k] if k != "inner" else ";".join(map(str, spec.inner))
               for k in MOMENTS_CSV_HEADER]
        return _csv_text(MOMENTS_CSV_HEADER, [row])
    return canonical_json(report)


def cmd_distinguish(args) -> str:
    spec = _spec_from(args)
    if spec.r < 2:
        raise ValueError("distinguish requires at least one inner dimension")
    if args.trials < 10:
        raise ValueError("distinguish requires at least 10 trials per ensemble")
    constants = _parse_constants(args.constants)
    plan = build_test(spec, **_bound_kwargs(constants))
    report_values = empirical_power(spec, args.trials, SeedSpec(args.seed), plan)
    report = {
        "p": spec.p,
        "q": spec.q,
        "inner": list(spec.inner),
        "trials": args.trials,
        "seed": args.seed,
        "threshold": plan.threshold,
        "mu_single": plan.mu_single,
        "mu_product": plan.mu_product,
        "accuracy": report_values.accuracy,
        "false_positive_rate": report_values.false_positive_rate,
        "false_negative_rate": report_values.false_negative_rate,
        "chebyshev_error_bound": report_values.chebyshev_error_bound,
        "constants": constants,
    }
    if args.format == "csv":
        row = [report[k] if k != "inner" else ";".join(map(str, spec.inner))
               for k in DISTINGUISH_CSV_HEADER]
        return _csv_text(DISTINGUISH_CSV_HEADER, [row])
    return canonical_json(report)


def cmd_sweep(args) -> str:
    if args.r < 2:
        raise ValueError("sweep requires at least two factors (--r >= 2)")
    if args.d_min > args.d_max:
        raise ValueError(f"d-min {args.d_min} exceeds d-max {args.d_max}")
    if args.steps < 2:
        raise ValueError("sweep needs at least 2 steps")
    if args.trials < 10:
        raise ValueError("sweep requires at least 10 trials per ensemble")
    constants = _parse_constants(args.constants)
    bound_kwargs = _bound_kwargs(constants)
    grid = [int(round(d)) for d in np.geomspace(args.d_min, args.d_max, args.steps)]
    rows = []
    for k, d in enumerate(grid):
        spec = ChainSpec(args.p, args.q, (d,) * (args.r - 1))
        spec.validate(strict=args.strict_dims)
        plan = build_test(spec, **bound_kwargs)
        row_seed = SeedSpec(args.seed, k * 2 * args.trials)
        h_product, h_single = draw_h_samples(spec, args.trials, row_seed)
        fnr = float((h_product <= plan.threshold).mean())
        fpr = float((h_single > plan.threshold).mean())
        rows.append([
            d,
            1.0 - (fpr + fnr) / 2.0,
            tv_lower_bound_empirical(h_product, h_single),
            tv_upper_bound(spec, constants["c"]),
            chebyshev_error(plan),
            plan.mu_product - plan.mu_single,
        ])
    if args.format == "json":
        report = {
            "p": args.p, "q": args.q, "r": args.r, "trials": args.trials, "seed": args.seed,
            "constants": constants,
            "rows": [dict(zip(SWEEP_CSV_HEADER, row)) for row in rows],
        }
        return canonical_json(report)
    return _csv_text(SWEEP_CSV_HEADER, rows)


def cmd_oracle(args) -> str:
    spec = ChainSpec(args.p, args.q, _parse_inner(args.inner))
    spec.validate(strict=args.strict_dims)
    budget = WickBudget(max_monomials=args.max_monomials)
    wick_mean = wick_exact_mean_h(spec.p, spec.q, spec.inner, budget)
    closed_mean = mean_h_product_exact(spec)
    report = {
        "p": spec.p,
        "q": spec.q,
        "inner": list(spec.inner),
        "max_monomials": budget.max_monomials,
        "wick_mean": _frac_str(wick_mean),
        "closed_form_mean": _frac_str(closed_mean),
        "equal_mean": wick_mean == closed_mean,
    }
    if spec.r == 1:
        wick_var = wick_exact_var_h_single(spec.p, spec.q, budget)
        closed_var = Fraction(variance_single_exact(spec.p, spec.q))
        report.update({
            "wick_variance": _frac_str(wick_var),
            "closed_form_variance": _frac_str(closed_var),
            "equal_variance": wick_var == closed_var,
        })
    return canonical_json(report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmprod",
        description="Gaussian matrix product ensembles: moments, distinguishing tests, oracles.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p: argparse.ArgumentParser, inner: bool = True):
        p.add_argument("--p", type=int, required=True, help="output row count")
        p.add_argument("--q", type=int, required=True, help="output column count")
        if inner:
            p.add_argument("--inner", default="", help="comma-separated inner dimensions, e.g. 64 or 8,8")
        p.add_argument("--seed", type=int, default=None,
                       help="master seed (default: GMPROD_SEED env var, else 0)")
        p.add_argument("--constants", default="",
                       help="comma-separated name=value overrides for c,c1..c4,kappa_p,kappa_q (default all 1)")
        p.add_argument("--format", choices=("json", "csv"), default=None, help="output format")
        p.add_argument("--out", default=None, help="write output to this path instead of stdout")
        p.add_argument("--strict-dims", action="store_true",
                       help="require every inner dimension >= max(p, q)")

    p_moments = sub.add_parser("moments", help="analytic means, variances, and the moment vector")
    add_common(p_moments)
    p_moments.set_defaults(func=cmd_moments, default_format="json")

    p_dist = sub.add_parser("distinguish", help="empirical power of the threshold test")
    add_common(p_dist)
    p_dist.add_argument("--trials", type=int, default=400, help="trials per ensemble")
    p_dist.set_defaults(func=cmd_distinguish, default_format="json")

    p_sweep = sub.add_parser("sweep", help="phase data over a geometric grid of inner dimensions")
    add_common(p_sweep, inner=False)
    p_sweep.add_argument("--r", type=int, default=2, help="number of factors in the chain")
    p_sweep.add_argument("--d-min", type=int, required=True, help="smallest inner dimension")
    p_sweep.add_argument("--d-max", type=int, required=True, help="largest inner dimension")
    p_sweep.add_argument("--steps", type=int, required=True, help="number of grid points")
    p_sweep.add_argument("--trials", type=int, default=400, help="trials per ensemble per grid point")
    p_sweep.set_defaults(func=cmd_sweep, default_format="csv")

    p_oracle = sub.add_parser("oracle", help="exact enumeration vs. closed forms at tiny sizes")
    add_common(p_oracle)
    p_oracle.add_argument("--max-monomials", type=int, default=WickBudget().max_monomials,
                          help="enumeration budget")
    p_oracle.set_defaults(func=cmd_oracle, default_format="json")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        if args.seed is None:
            args.seed = _default_seed()
        text = args.func(args)
    except OracleBudgetError as exc:
        print(f"gmprod: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"gmprod: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
