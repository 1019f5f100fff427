"""Command-line front end: ``samplan design | oc | simulate | reproduce``.

Exit codes are a stable contract: 0 success, 1 usage error, 2 infeasible
design, 3 table reproduction mismatch.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import __version__
from .designer import DesignRequest, InfeasibleDesignError, Kind, SearchBounds, design
from .lifetest import DistSpec, fraction_nonconforming
from .oc import DomainError, PlanParams, oc_mchgsp, oc_single
from .simulator import SimConfig, compare_to_analytic
from .tables import DEFAULT_TOLERANCE, reproduce_table1, reproduce_table2

SCHEMA_VERSION = "1.0"
FORMATS = ("json", "csv", "text")
FORMAT_ENV = "SAMPLAN_DEFAULT_FORMAT"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_MISMATCH = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def probability(text: str) -> float:
    s = text.strip()
    if s.endswith("%"):
        raise argparse.ArgumentTypeError(f"percent values are not accepted, write a decimal in [0, 1]: {text!r}")
    try:
        value = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text!r}")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def nonneg_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value >= 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be a finite number >= 0, got {text!r}")
    return value


def dist_spec(text: str) -> DistSpec:
    try:
        return DistSpec.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def seed_int(text: str) -> int:
    value = nonneg_int(text)
    if value >= 2**64:
        raise argparse.ArgumentTypeError("must fit in 64 unsigned bits")
    return value


# ---------------------------------------------------------------- emission

def _envelope(command, inputs, result, warnings):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "result": result,
        "warnings": list(warnings),
    }


def _csv(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _write(text: str, out) -> None:
    out.write(text)
    if not text.endswith("\n"):
        out.write("\n")


# ---------------------------------------------------------------- commands

def cmd_design(args, out) -> int:
    inputs = {
        "kind": args.kind, "r": args.r, "aql": args.aql, "lql": args.lql,
        "alpha": args.alpha, "beta": args.beta,
        "g_max": args.g_max, "c_max": args.c_max, "i_max": args.i_max,
        "tie_break": args.tie_break,
    }
    warnings = []
    kind = Kind(args.kind)
    r = args.r
    if kind is Kind.SASIP:
        if r not in (None, 1):
            warnings.append("sasip ignores --r; single sampling uses r = 1")
        r = 1
    elif r is None:
        raise UsageError("--r: required for mchgsp and gasip designs")
    if args.lql <= args.aql:
        raise UsageError("--lql: lql must exceed aql")
    try:
        bounds = SearchBounds(g_max=args.g_max, c_max=args.c_max, i_max=args.i_max)
        req = DesignRequest(r=r, p0=args.aql, p1=args.lql, alpha=args.alpha, beta=args.beta, bounds=bounds)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    try:
        plan = design(req, kind, tie_break=args.tie_break)
    except InfeasibleDesignError as exc:
        payload = exc.to_dict()
        if args.format == "json":
            _write(json.dumps(_envelope("design", inputs, payload, warnings), indent=2), out)
        elif args.format == "csv":
            row = {"status": "infeasible", "kind": kind.value, **payload["bounds"]}
            _write(_csv([row], ["status", "kind", "g_max", "c_max", "i_max"]), out)
        else:
            _write(str(exc), out)
        return EXIT_INFEASIBLE
    result = {"status": "ok", "design": plan.to_dict()}
    if args.format == "json":
        _write(json.dumps(_envelope("design", inputs, result, warnings), indent=2), out)
    elif args.format == "csv":
        row = {"kind": kind.value, **plan.params.to_dict(), "n": plan.n,
               "oc_at_aql": plan.oc_at_aql, "oc_at_lql": plan.oc_at_lql}
        _write(_csv([row], ["kind", "r", "g", "c", "i", "n", "oc_at_aql", "oc_at_lql"]), out)
    else:
        p = plan.params
        lines = [
            f"{kind.value} plan: r={p.r} g={p.g} c={p.c} i={p.i} (n = {plan.n})",
            f"  OC at AQL {args.aql}: {plan.oc_at_aql:.7f} (needs >= {1 - args.alpha:.4f})",
            f"  OC at LQL {args.lql}: {plan.oc_at_lql:.7f} (needs <= {args.beta:.4f})",
        ]
        lines += [f"warning: {w}" for w in warnings]
        _write("\n".join(lines), out)
    return EXIT_OK


def _grid(start: float, stop: float, step: float) -> list[float]:
    if not step > 0:
        raise UsageError("--grid: step must be > 0")
    if start > stop:
        raise UsageError("--grid: start must not exceed stop")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [min(start + k * step, stop) for k in range(count)]


def _plan_from_args(args) -> PlanParams:
    try:
        return PlanParams(r=args.r, g=args.g, c=args.c, i=args.i)
    except DomainError as exc:
        raise UsageError(f"plan: {exc}") from None


def cmd_oc(args, out) -> int:
    plan = _plan_from_args(args)
    sources = sum(x is not None for x in (args.p, args.grid, args.dist))
    if sources != 1:
        raise UsageError("give exactly one of --p, --grid or --dist/--time")
    times = None
    if args.dist is not None:
        if not args.time:
            raise UsageError("--time: required with --dist")
        times = list(args.time)
        ps = [fraction_nonconforming(args.dist, t) for t in times]
    elif args.time:
        raise UsageError("--time: only valid together with --dist")
    elif args.grid is not None:
        start, stop, step = args.grid
        for name, v in (("start", start), ("stop", stop)):
            if not 0.0 <= v <= 1.0:
                raise UsageError(f"--grid: {name} must lie in [0, 1], got {v}")
        ps = _grid(start, stop, step)
    else:
        ps = list(args.p)
    rows = []
    for k, p in enumerate(ps):
        row = {"p": p, "oc_mchgsp": oc_mchgsp(plan, p), "oc_gasip": oc_single(plan.n, plan.c, p)}
        if times is not None:
            row = {"t": times[k], **row}
        rows.append(row)
    inputs = {
        "plan": plan.to_dict(),
        "p": args.p, "grid": args.grid,
        "dist": args.dist.to_dict() if args.dist else None,
        "time": times,
    }
    columns = (["t"] if times is not None else []) + ["p", "oc_mchgsp", "oc_gasip"]
    if args.format == "json":
        result = {"plan": plan.to_dict(), "n": plan.n, "rows": rows}
        _write(json.dumps(_envelope("oc", inputs, result, []), indent=2), out)
    elif args.format == "csv":
        _write(_csv(rows, columns), out)
    else:
        lines = [f"plan r={plan.r} g={plan.g} c={plan.c} i={plan.i} (n = {plan.n})",
                 "  ".join(f"{c:>12}" for c in columns)]
        lines += ["  ".join(f"{row[c]:>12.7f}" for c in columns) for row in rows]
        _write("\n".join(lines), out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    plan = _plan_from_args(args)
    try:
        cfg = SimConfig(plan=plan, p=args.p, lots=args.lots, seed=args.seed, burn_in=args.burn_in)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    cmp = compare_to_analytic(cfg)
    warnings = []
    if cmp.flagged:
        warnings.append("empirical rate disagrees with the analytic OC (|z| > 4 or exact disagreement)")
    if args.format == "json":
        _write(json.dumps(_envelope("simulate", cfg.to_dict(), cmp.to_dict(), warnings), indent=2), out)
    elif args.format == "csv":
        row = {**cmp.result.to_dict(), "analytic": cmp.analytic, "z": "" if cmp.z is None else cmp.z,
               "flagged": cmp.flagged}
        _write(_csv([row], ["seed", "lots_counted", "accepted", "rate", "std_err", "analytic", "z", "flagged"]), out)
    else:
        res = cmp.result
        z = "n/a" if cmp.z is None else f"{cmp.z:+.3f}"
        lines = [
            f"lots counted {res.lots_counted}, accepted {res.accepted}",
            f"empirical {res.rate:.7f} +/- {res.std_err:.2e}, analytic {cmp.analytic:.7f}, z = {z}",
        ]
        lines += [f"warning: {w}" for w in warnings]
        _write("\n".join(lines), out)
    return EXIT_OK


def cmd_reproduce(args, out) -> int:
    if args.table not in (1, 2):
        raise UsageError("--table: table must be 1 or 2")
    if not args.tolerance > 0:
        raise UsageError("--tolerance: must be > 0")
    try:
        bounds = SearchBounds(g_max=args.g_max, c_max=args.c_max, i_max=args.i_max)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if args.table == 1:
        report = reproduce_table1(args.tolerance, bounds=bounds)
    else:
        report = reproduce_table2(bounds=bounds)
    warnings = [
        f"row ({row.p0}, {row.p1}): {row.match}"
        for row in report.rows if row.match != "exact"
    ]
    inputs = {"table": args.table, "tolerance": args.tolerance, "output": args.output,
              "g_max": bounds.g_max, "c_max": bounds.c_max, "i_max": bounds.i_max}
    if args.format == "json":
        text = json.dumps(_envelope("reproduce", inputs, report.to_dict(), warnings), indent=2) + "\n"
    elif args.format == "csv":
        text = report.to_csv()
    else:
        text = report.to_text()
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"--output: cannot write {args.output!r}: {exc.strerror}") from None
    else:
        out.write(text)
    return EXIT_OK if report.all_exact else EXIT_MISMATCH


# ---------------------------------------------------------------- parser

def _add_plan(p):
    p.add_argument("--r", type=positive_int, required=True, help="items per group")
    p.add_argument("--g", type=positive_int, required=True, help="number of groups")
    p.add_argument("--c", type=nonneg_int, required=True, help="acceptance number")
    p.add_argument("--i", type=positive_int, default=1, help="chain length (preceding lots consulted)")


def _add_bounds(p):
    p.add_argument("--g-max", type=positive_int, default=1000)
    p.add_argument("--c-max", type=nonneg_int, default=10)
    p.add_argument("--i-max", type=positive_int, default=10)


def build_parser(default_format: str = "json") -> argparse.ArgumentParser:
    parser = _Parser(prog="samplan", description="Chain group acceptance sampling plans.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=FORMATS, default=default_format)

    p = sub.add_parser("design", parents=[fmt], help="two-point minimum sample size design")
    p.add_argument("--kind", choices=[k.value for k in Kind], default="mchgsp")
    p.add_argument("--r", type=positive_int, help="items per group (ignored for sasip)")
    p.add_argument("--aql", type=probability, required=True)
    p.add_argument("--lql", type=probability, required=True)
    p.add_argument("--alpha", type=probability, default=0.05, help="producer's risk")
    p.add_argument("--beta", type=probability, default=0.10, help="consumer's risk")
    p.add_argument("--tie-break", choices=("ci", "ic"), default="ci")
    _add_bounds(p)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("oc", parents=[fmt], help="evaluate the OC function")
    _add_plan(p)
    p.add_argument("--p", type=probability, action="append", help="lot quality (repeatable)")
    p.add_argument("--grid", type=float, nargs=3, metavar=("START", "STOP", "STEP"))
    p.add_argument("--dist", type=dist_spec, help="e.g. exponential:scale=10 or weibull:shape=2,scale=10")
    p.add_argument("--time", type=nonneg_float, action="append", help="truncation time (repeatable)")
    p.set_defaults(func=cmd_oc)

    p = sub.add_parser("simulate", parents=[fmt], help="Monte Carlo check of the chained rule")
    _add_plan(p)
    p.add_argument("--p", type=probability, required=True)
    p.add_argument("--lots", type=positive_int, default=100_000)
    p.add_argument("--seed", type=seed_int, default=0)
    p.add_argument("--burn-in", type=nonneg_int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reproduce", parents=[fmt], help="regenerate the published tables")
    p.add_argument("--table", type=int, required=True)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--output", default=None, help="write the report here instead of stdout")
    _add_bounds(p)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    default_format = os.environ.get(FORMAT_ENV, "json").strip().lower() or "json"
    if default_format not in FORMATS:
        print(f"samplan: error: {FORMAT_ENV} must be one of {', '.join(FORMATS)}", file=sys.stderr)
        return EXIT_USAGE
    parser = build_parser(default_format)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"samplan {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
