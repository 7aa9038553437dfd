"""Command-line front end.

Subcommands::

    smoothq estimate FILE --z Z --h H
    smoothq table DIST [--tau 0.25,0.5,0.75]
    smoothq sweep DIST [START END STEP]
    smoothq simulate DIST (--tau T | --z Z) --h H --n N --reps R --seed S
    smoothq population DIST --z Z --h H
    smoothq variance DIST --tau T --h H

``DIST`` (positional or ``--dist``) is ``normal:MU,SIGMA``,
``laplace:MU,B`` or ``alaplace:MU,B,KAPPA``.  Output is CSV (header row,
6 significant digits) or JSON (array of objects, full precision), written to
stdout or ``--out``.  Exit status: 0 success, 1 I/O failure, 2 invalid usage.
"""

import argparse
import csv
import io
import json
import math
import sys

from . import asymptotics, simulation
from .distributions import AsymmetricLaplace, Laplace, Normal
from .errors import DomainError
from .estimator import Sample, SmoothingParams, estimate

EXIT_OK, EXIT_IO, EXIT_USAGE = 0, 1, 2

_FAMILIES = {"normal": (Normal, 2), "laplace": (Laplace, 2), "alaplace": (AsymmetricLaplace, 3)}

TABLE_FIELDS = ["distribution", "tau", "q_tau", "h_star", "v0", "v_opt", "ratio", "case", "limit"]
SWEEP_FIELDS = ["distribution", "tau", "ratio", "case", "limit"]
ESTIMATE_FIELDS = ["q_hat", "z", "h", "n"]


class UsageError(Exception):
    pass


def parse_distribution(text):
    """Parse ``name:p1,p2[,p3]`` into a distribution model."""
    name, _, params = text.partition(":")
    family = _FAMILIES.get(name.strip().lower())
    if family is None:
        raise UsageError(f"unknown distribution {name!r}; expected one of {', '.join(_FAMILIES)}")
    cls, arity = family
    try:
        values = [float(v) for v in params.split(",")] if params else []
    except ValueError:
        raise UsageError(f"bad parameters in distribution spec {text!r}") from None
    if len(values) != arity or not all(math.isfinite(v) for v in values):
        raise UsageError(f"{name} needs {arity} finite parameters, got {params!r}")
    try:
        return cls(*values)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def read_sample(path):
    """Read one decimal number per line; blank lines are skipped."""
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            try:
                x = float(text)
            except ValueError:
                raise UsageError(f"{path}: line {lineno}: not a number: {text!r}") from None
            if not math.isfinite(x):
                raise UsageError(f"{path}: line {lineno}: value must be finite: {text!r}")
            values.append(x)
    if not values:
        raise UsageError(f"{path}: no observations")
    return Sample(values)


def _tau_list(text):
    try:
        taus = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad tau list {text!r}") from None
    if not taus or not all(0.0 < t < 1.0 for t in taus):
        raise UsageError(f"tau values must lie in (0, 1), got {text!r}")
    return taus


def _h_star_value(h, fmt):
    if h == asymptotics.INFINITE:
        return "inf"
    if h == asymptotics.ZERO:
        return "0" if fmt == "csv" else 0.0
    return h


def table_rows(d, taus, fmt="json"):
    rows = []
    for tau in taus:
        rep = asymptotics.efficiency_report(d, tau)
        rows.append({
            "distribution": d.spec,
            "tau": tau,
            "q_tau": rep.q_tau,
            "h_star": _h_star_value(rep.h_star, fmt),
            "v0": rep.v_at_zero,
            "v_opt": rep.v_at_opt,
            "ratio": rep.ratio,
            "case": str(rep.case),
            "limit": rep.limit,
        })
    return rows


def tau_grid(start, end, step):
    if not (0.0 < start <= end < 1.0) or not step > 0:
        raise UsageError("tau range needs 0 < start <= end < 1 and step > 0")
    count = int(math.floor((end - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(count)]


def sweep_rows(d, taus):
    rows = []
    for tau in taus:
        rep = asymptotics.efficiency_report(d, tau)
        rows.append({"distribution": d.spec, "tau": tau, "ratio": rep.ratio,
                     "case": str(rep.case), "limit": rep.limit})
    return rows


def _csv_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def render(rows, fmt, fields=None):
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    fields = fields or list(rows[0])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_csv_cell(row.get(f)) for f in fields])
    return buf.getvalue()


def read_csv(text):
    """Parse CSV emitted by :func:`render` back into typed records."""
    def convert(cell):
        if cell in ("true", "false"):
            return cell == "true"
        if cell == "":
            return None
        try:
            return int(cell)
        except ValueError:
            pass
        try:
            return float(cell) if cell != "inf" else cell
        except ValueError:
            return cell
    reader = csv.DictReader(io.StringIO(text))
    return [{k: convert(v) for k, v in row.items()} for row in reader]


def _dist(args):
    text = args.dist_pos or args.dist
    if not text:
        raise UsageError("a distribution is required (positional or --dist)")
    return parse_distribution(text)


def cmd_estimate(args):
    try:
        p = SmoothingParams(args.z, args.h)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    s = read_sample(args.input)
    return [{"q_hat": estimate(s, p), "z": p.z, "h": p.h, "n": len(s)}], ESTIMATE_FIELDS


def cmd_table(args):
    d = _dist(args)
    return table_rows(d, _tau_list(args.tau), args.format), TABLE_FIELDS


def cmd_sweep(args):
    if args.dist and args.dist_pos is not None:
        # with --dist the first number lands in the DIST slot
        try:
            args.start, args.end, args.step = float(args.dist_pos), args.start, args.end
        except ValueError:
            raise UsageError("give the distribution once, positional or --dist") from None
        args.dist_pos = None
    d = _dist(args)
    return sweep_rows(d, tau_grid(args.start, args.end, args.step)), SWEEP_FIELDS


def cmd_simulate(args):
    d = _dist(args)
    if (args.tau is None) == (args.z is None):
        raise UsageError("give exactly one of --tau or --z")
    try:
        cfg = simulation.SimulationConfig(d, n=args.n, replications=args.reps, seed=args.seed,
                                          tau=args.tau, z=args.z, h=args.h)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    return [simulation.run(cfg).as_dict()], None


def cmd_population(args):
    d = _dist(args)
    try:
        p = SmoothingParams(args.z, args.h)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    q = asymptotics.population_minimizer(d, p)
    row = {"distribution": d.spec, "z": p.z, "h": p.h, "q": q,
           "level": d.cdf(q), "sigma2": asymptotics.sigma2(d, p)}
    return [row], None


def cmd_variance(args):
    d = _dist(args)
    if not 0.0 < args.tau < 1.0 or args.h < 0:
        raise UsageError("--tau must lie in (0, 1) and --h must be >= 0")
    coeffs = asymptotics.coefficients(d, args.tau)
    row = {"distribution": d.spec, "tau": args.tau, "h": args.h,
           "z": asymptotics.z_of_tau(d, args.tau, args.h),
           "v": coeffs.v(args.h), "dv_dh": coeffs.dv_dh(args.h),
           "case": str(asymptotics.classify(coeffs))}
    return [row], None


def build_parser():
    parser = argparse.ArgumentParser(prog="smoothq", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, dist=True):
        if dist:
            p.add_argument("dist_pos", nargs="?", metavar="DIST")
            p.add_argument("--dist")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("estimate", help="smoothed quantile of a data file")
    p.add_argument("input")
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--h", type=float, default=0.0)
    common(p, dist=False)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("table", help="optimal smoothing summary per tau")
    common(p)
    p.add_argument("--tau", default="0.25,0.5,0.75", help="comma-separated levels")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sweep", help="efficiency ratio over a tau grid")
    common(p)
    p.add_argument("start", nargs="?", type=float, default=0.05)
    p.add_argument("end", nargs="?", type=float, default=0.95)
    p.add_argument("step", nargs="?", type=float, default=0.05)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo check of the CLT variance")
    common(p)
    p.add_argument("--tau", type=float)
    p.add_argument("--z", type=float)
    p.add_argument("--h", type=float, default=0.0)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--reps", type=int, default=2000)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("population", help="population minimiser and its variance")
    common(p)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--h", type=float, default=0.0)
    p.set_defaults(func=cmd_population)

    p = sub.add_parser("variance", help="v(tau, h) and its slope")
    common(p)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--h", type=float, default=0.0)
    p.set_defaults(func=cmd_variance)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rows, fields = args.func(args)
    except UsageError as exc:
        print(f"smoothq {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"smoothq {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_IO
    text = render(rows, args.format, fields)
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"smoothq {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
