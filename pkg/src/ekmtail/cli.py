"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 input/output error, 4 numerical or
data error.
"""

import argparse
import contextlib
import dataclasses
import json
import logging
import sys

import numpy as np

from . import io as ekio
from .distributions import DistributionSpec, generate_censored
from .estimators import censored_hill, ekm_product, ena
from .gof import gof_curve, k_range
from .io import IngestError
from .limit_process import default_grid, gof_limit_sample
from .montecarlo import ExperimentSpec, finite_sample_study, mse_study
from .selection import SelectionConfig, select
from .tail_empirical import sort_with_concomitants, top_k_view
from .windows import WindowSpec, run_window

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

logger = logging.getLogger("ekmtail")


class UsageError(Exception):
    pass


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _load_sample(args):
    records = ekio.ingest_csv(args.input, args.z_col, args.delta_col)
    return ekio.records_to_sample(records)


def cmd_estimate(args):
    sample = _load_sample(args)
    view = top_k_view(sort_with_concomitants(sample), args.k)
    est = ekm_product(view)
    gamma = censored_hill(view)
    hazard = ena(view) if args.ena else None
    with _output(args.output) as fh:
        if args.format == "json":
            payload = {
                "k": view.k,
                "threshold": view.threshold,
                "gamma_hat": gamma,
                "defect": est.defect,
                "ekm": {"x": est.f.xs, "F": est.f.ys},
            }
            if hazard is not None:
                payload["ena"] = {"x": hazard.xs, "Lambda": hazard.ys}
            ekio.dump_json(fh, payload)
        else:
            fh.write(f"# k={view.k} threshold={ekio.fmt(view.threshold)} gamma_hat={ekio.fmt(gamma)} "
                     f"defect={ekio.fmt(est.defect)}\n")
            cols = ["x", "F"] + (["Lambda"] if hazard is not None else [])
            rows = []
            for x, f in zip(est.f.xs, est.f.ys):
                row = {"x": x, "F": f}
                if hazard is not None:
                    row["Lambda"] = hazard(x)
                rows.append(row)
            ekio.write_rows_csv(fh, rows, cols)


def _k_max_default(args, n):
    return args.k_max if args.k_max is not None else n // 2


def cmd_gof_curve(args):
    sample = _load_sample(args)
    grid = k_range(args.k_min, _k_max_default(args, sample.n), args.k_step)
    curve = gof_curve(sample, grid)
    with _output(args.output) as fh:
        ekio.write_rows_csv(
            fh,
            ({"k": r.k, "ks": r.ks, "cvm": r.cvm, "gamma_hat": r.gamma_hat} for r in curve),
            ["k", "ks", "cvm", "gamma_hat"],
        )


def cmd_select(args):
    sample = _load_sample(args)
    if args.rule != "rot" and args.L is None:
        raise UsageError(f"--L is required for rule {args.rule!r}")
    cfg = SelectionConfig(args.rule, args.L, args.k_min, args.k_max, args.k_step, args.fallback_fraction)
    res = select(sample, cfg, full_trace=args.trace, n_jobs=args.threads)
    with _output(args.output) as fh:
        payload = {"n": sample.n, "censoring_rate": sample.censoring_rate}
        payload.update(res.to_dict(with_trace=args.trace))
        ekio.dump_json(fh, payload)


def cmd_simulate_limit(args):
    grid = default_grid(args.grid, args.grid_lower)
    ks, cvm = gof_limit_sample(args.p, grid, args.paths, args.seed, n_jobs=args.threads)
    levels = [float(q) for q in args.quantiles.split(",")]
    with _output(args.output) as fh:
        rows = [{"quantile": q, "ks_limit": np.quantile(ks, q), "cvm_limit": np.quantile(cvm, q)} for q in levels]
        ekio.write_rows_csv(fh, rows, ["quantile", "ks_limit", "cvm_limit"])
    if args.samples:
        with open(args.samples, "w", newline="") as fh:
            ekio.write_rows_csv(fh, ({"ks_limit": a, "cvm_limit": b} for a, b in zip(ks, cvm)),
                                ["ks_limit", "cvm_limit"])


def _load_config(args):
    with open(args.config) as fh:
        try:
            spec = ExperimentSpec.from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise IngestError(f"invalid JSON config: {exc}") from None
        except (KeyError, TypeError, AttributeError) as exc:
            raise IngestError(f"invalid experiment config: {exc!r}") from None
    overrides = {k: v for k, v in (("master_seed", args.seed), ("reps", args.reps)) if v is not None}
    return dataclasses.replace(spec, **overrides) if overrides else spec


def cmd_mc_table(args):
    spec = _load_config(args)
    if not spec.rules:
        raise UsageError("the config must list at least one rule under 'rules'")
    table = mse_study(spec, n_jobs=args.threads)
    cols = ["n", "rule", "L", "mse100", "reps", "mean_k", "fallback_rate"]
    with _output(args.output) as fh:
        if args.format == "json":
            ekio.dump_json(fh, {"gamma_x": table.gamma_x, "rows": [{c: getattr(r, c) for c in cols} for r in table.rows]})
        else:
            ekio.write_rows_csv(fh, ({c: getattr(r, c) for c in cols} for r in table.rows), cols)


def cmd_mc_curves(args):
    spec = _load_config(args)
    cols = ["n", "k", "s", "ena_mean", "ena_var", "ena_var_limit", "ekm_mean", "ekm_var", "ekm_var_limit", "reps"]
    with _output(args.output) as fh:
        rows = []
        for n in spec.sizes:
            rows.extend(finite_sample_study(spec, n=n, n_jobs=args.threads).rows())
        ekio.write_rows_csv(fh, rows, cols)


def cmd_window(args):
    records = ekio.ingest_csv(args.input, args.z_col, args.delta_col, args.year_col)
    window = WindowSpec(args.mode, args.years, args.start, args.end)
    rules = [
        SelectionConfig("rot"),
        SelectionConfig("ks", args.L_ks, args.k_min, args.k_max),
        SelectionConfig("cvm", args.L_cvm, args.k_min, args.k_max),
    ]
    results = run_window(records, window, rules)
    cols = ["first_year", "last_year", "rule", "L", "n", "censoring_rate", "k", "gamma_hat", "used_fallback"]
    with _output(args.output) as fh:
        ekio.write_rows_csv(fh, (r.as_row() for r in results), cols)


def cmd_generate(args):
    spec_x = DistributionSpec(args.x_family, args.x_gamma)
    spec_y = DistributionSpec(args.y_family, args.y_gamma)
    sample = generate_censored(spec_x, spec_y, args.n, args.seed)
    years = None
    if args.years:
        first, last = (int(v) for v in args.years.split("-"))
        from ._random import make_rng

        years = make_rng(args.seed, 1).integers(first, last + 1, size=sample.n)
    with _output(args.output) as fh:
        ekio.write_sample_csv(fh, sample, years)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_input(p, years=False):
    p.add_argument("--input", required=True, help="CSV file with a header row")
    p.add_argument("--z-col", default="z")
    p.add_argument("--delta-col", default="delta")
    if years:
        p.add_argument("--year-col", default="year")


def _add_mc_overrides(p):
    p.add_argument("--seed", type=int, default=None, help="override master_seed of the config")
    p.add_argument("--reps", type=int, default=None, help="override reps of the config")


def build_parser():
    parser = _Parser(prog="ekmtail", description="Tail inference for right-censored heavy-tailed data.")
    parser.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
    common.add_argument("--threads", type=int, default=1, help="worker processes; results do not depend on it")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("estimate", parents=[common], help="EKM/ENA estimate and censored Hill at fixed k")
    _add_input(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ena", action="store_true", help="include the Nelson-Aalen cumulative hazard")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("gof-curve", parents=[common], help="KS/CvM statistics and censored Hill versus k")
    _add_input(p)
    p.add_argument("--k-min", type=int, default=20)
    p.add_argument("--k-max", type=int, default=None, help="default: n/2")
    p.add_argument("--k-step", type=int, default=1)
    p.set_defaults(func=cmd_gof_curve)

    p = sub.add_parser("select", parents=[common], help="choose k with a selection rule")
    _add_input(p)
    p.add_argument("--rule", choices=("rot", "ks", "cvm"), required=True)
    p.add_argument("--L", type=float, default=None)
    p.add_argument("--k-min", type=int, default=20)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--k-step", type=int, default=1)
    p.add_argument("--fallback-fraction", type=float, default=0.2)
    p.add_argument("--trace", action="store_true", help="evaluate and emit the full statistic trace")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("simulate-limit", parents=[common], help="limit laws of the extreme GoF statistics")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--paths", type=int, default=10_000)
    p.add_argument("--grid", type=int, default=2000, help="number of log-spaced grid points")
    p.add_argument("--grid-lower", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quantiles", default="0.5,0.9,0.95,0.99")
    p.add_argument("--samples", default=None, help="also write the raw samples to this CSV file")
    p.set_defaults(func=cmd_simulate_limit)

    p = sub.add_parser("mc-table", parents=[common], help="100 x MSE table of selection rules")
    p.add_argument("--config", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_mc_overrides(p)
    p.set_defaults(func=cmd_mc_table)

    p = sub.add_parser("mc-curves", parents=[common], help="finite-sample mean/variance curves")
    p.add_argument("--config", required=True)
    _add_mc_overrides(p)
    p.set_defaults(func=cmd_mc_curves)

    p = sub.add_parser("window", parents=[common], help="rolling or growing window estimates")
    _add_input(p, years=True)
    p.add_argument("--mode", choices=("rolling", "growing"), required=True)
    p.add_argument("--years", type=int, default=4)
    p.add_argument("--start", type=int, default=None)
    p.add_argument("--end", type=int, default=None)
    p.add_argument("--L-ks", type=float, default=1.75)
    p.add_argument("--L-cvm", type=float, default=0.5)
    p.add_argument("--k-min", type=int, default=20)
    p.add_argument("--k-max", type=int, default=None)
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("generate", parents=[common], help="simulate a censored sample as CSV")
    p.add_argument("--x-family", default="pareto")
    p.add_argument("--x-gamma", type=float, default=0.5)
    p.add_argument("--y-family", default="pareto")
    p.add_argument("--y-gamma", type=float, default=1.5)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--years", default=None, help="attach uniform years FIRST-LAST")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"ekmtail: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, IngestError) as exc:
        print(f"ekmtail: input/output error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, TypeError, ArithmeticError) as exc:
        print(f"ekmtail: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
