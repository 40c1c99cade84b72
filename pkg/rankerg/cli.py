# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
The ``rankerg`` command line.

Every subcommand writes one table (CSV with a leading ``#`` comment line, or
JSON with ``--format json``) to standard output or ``--out``. Exit codes:
0 on success, 1 for rejected input (including usage errors), 2 for
numerical failures and failed ``verify`` checks.
"""

# stdlib
import argparse
import logging
import math
import os
import sys

# external
import numpy as np

# internal
from rankerg import balls
from rankerg import config
from rankerg import errors
from rankerg import grid
from rankerg import groups
from rankerg import hyperbolic
from rankerg import montecarlo
from rankerg import report
from rankerg import special
from rankerg import spectrum
from rankerg import utils
from rankerg import verify
from rankerg.version import __version__

# Module-level logger
LOG = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2

COMMANDS = ("sphfn", "psi", "volume", "simulate", "mc", "mc-scan", "grid", "verify")


class RunConfig(object):
    """The user-settable parts of one invocation.

    Args:
        command: Subcommand name.
        group: Group spec string, or None.
        spec_path: Spectrum configuration file, or None.
        out: Output path, or None for standard output.
        seed: Master seed for Monte Carlo commands.
        fmt: Output format, "csv" or "json".
        threads: Worker count; None reads RANKERG_THREADS.
        rho_prime: Optional rho' for non-SO groups.
        invocation: The command line, recorded in the output comment.

    Raises:
        errors.ConfigError: If the output path is not writable or the format
            is unknown.
    """

    def __init__(self, command, group=None, spec_path=None, out=None, seed=42,
                 fmt=report.CSV, threads=None, rho_prime=None, invocation=""):
        if fmt not in report.FORMATS:
            msg = "Unknown output format '{0}'. Expected one of {1}".format(fmt, report.FORMATS)
            raise errors.ConfigError(msg, path=None, key="format")

        if out:
            folder = os.path.dirname(os.path.abspath(out))
            if not os.access(folder, os.W_OK):
                raise errors.ConfigError("Output path is not writable", path=out, key="out")

        if threads is None:
            threads = utils.default_threads()
        else:
            utils.check_at_least("threads", threads, 1)

        self.command = command
        self.group = group
        self.spec_path = spec_path
        self.out = out
        self.seed = seed
        self.fmt = fmt
        self.threads = int(threads)
        self.rho_prime = rho_prime
        self.invocation = invocation

    @classmethod
    def from_args(cls, args, invocation):
        return cls(
            args.command,
            group=getattr(args, "group", None),
            spec_path=getattr(args, "spec", None),
            out=args.out,
            seed=getattr(args, "seed", 42),
            fmt=args.format,
            threads=args.threads,
            rho_prime=args.rho_prime,
            invocation=invocation,
        )

    @property
    def comment(self):
        return report.comment_line(self.invocation)

    def get_group(self):
        return groups.parse_group(self.group, rho_prime=self.rho_prime)


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that exits with EXIT_INVALID on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, "{0}: error: {1}\n".format(self.prog, message))


def init_logging(level=logging.WARNING):
    """Initialize Python logging.

    Args:
        level: A logging level or level name.
    """
    fmt = "[%(asctime)s] [%(levelname)s] %(message)s"
    logging.basicConfig(level=level, format=fmt)
    logging.getLogger("rankerg").setLevel(level)


def _time_grid(text):
    """Parse ``start:stop:step`` (stop inclusive) into an array."""
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("Expected start:stop:step. Found '{0}'".format(text))

    if not step > 0 or stop < start:
        raise argparse.ArgumentTypeError("Empty time grid '{0}'".format(text))

    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def _base_point(text):
    try:
        x, y = (float(v) for v in text.split(","))
        return hyperbolic.HPoint(x, y)
    except (ValueError, errors.PreconditionError):
        raise argparse.ArgumentTypeError("Expected x,y with y > 0. Found '{0}'".format(text))


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        value = 0

    if value < 1:
        raise argparse.ArgumentTypeError("Expected a positive integer. Found '{0}'".format(text))

    return value


def _add_common(parser):
    parser.add_argument(
        "--format",
        default=report.CSV,
        choices=report.FORMATS,
        help="Output format."
    )

    parser.add_argument(
        "--out",
        default=None,
        help="Output file (default: standard output)."
    )

    parser.add_argument(
        "--threads",
        type=_positive_int,
        default=None,
        help="Worker threads (default: ${0} or 1). Results do not depend "
             "on it.".format(utils.ENV_THREADS)
    )

    parser.add_argument(
        "--rho-prime",
        type=float,
        default=None,
        help="rho' for groups where it is not known (default: rho)."
    )

    parser.add_argument(
        "--log-level",
        default="WARN",
        help="The logging output level.",
        choices=["DEBUG", "INFO", "WARN", "ERROR"]
    )


def _add_profile(parser, t_min):
    parser.add_argument("--group", required=True, help="so:n | su:n | sp:n | f4 | custom:n1,n2")
    parser.add_argument("--param", required=True, help="trivial | c:<s> | p:<lambda>")
    parser.add_argument("--t-min", type=float, default=t_min)
    parser.add_argument("--t-max", type=float, default=10.0)
    parser.add_argument("--steps", type=_positive_int, default=101)


def _add_mc(parser):
    parser.add_argument("--samples", type=_positive_int, default=10 ** 5)
    parser.add_argument("--obs", default="cusp:2.0", help="cusp:Y | disk:x,y,r | const[:c]")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--base", type=_base_point, default=montecarlo.DEFAULT_BASE,
                        help="Base point x,y in the upper half-plane.")


def _get_argparser():
    """Create and return an ArgumentParser for this application."""
    desc = "rankerg v{0}: harmonic analysis on rank-one groups".format(__version__)
    parser = _ArgumentParser(prog="rankerg", description=desc)
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    sub = commands.add_parser("sphfn", help="Spherical function profile.")
    _add_profile(sub, t_min=0.0)
    _add_common(sub)

    sub = commands.add_parser("psi", help="Ball-averaged spherical function profile.")
    _add_profile(sub, t_min=0.1)
    sub.add_argument("--check-lipschitz", action="store_true",
                     help="Add the shell-fraction Lipschitz comparison for t >= 1.")
    sub.add_argument("--eps", type=float, default=0.1,
                     help="Radius step of the Lipschitz comparison.")
    sub.add_argument("--check-bound", type=float, default=None, metavar="R",
                     help="Normalise by the gap envelope t e^{-(rho-R)t}.")
    _add_common(sub)

    sub = commands.add_parser("volume", help="Haar volume of balls.")
    sub.add_argument("--group", required=True)
    sub.add_argument("--t", type=float, required=True, nargs="+")
    _add_common(sub)

    sub = commands.add_parser("simulate", help="Spectral model decay report.")
    sub.add_argument("--spec", required=True, help="Spectrum configuration (JSON).")
    sub.add_argument("--t-min", type=float, default=1.0)
    sub.add_argument("--t-max", type=float, default=40.0)
    sub.add_argument("--steps", type=_positive_int, default=157)
    sub.add_argument("--p", type=float, default=None,
                     help="Report the pointwise exponent and informative atoms for L^p.")
    _add_common(sub)

    sub = commands.add_parser("mc", help="One Monte Carlo ball average on the modular surface.")
    sub.add_argument("--t", type=float, required=True)
    _add_mc(sub)
    sub.add_argument("--forward", action="store_true",
                     help="Apply g instead of g^-1 to the base point.")
    sub.add_argument("--append", default=None, help="Append the run to this CSV file.")
    _add_common(sub)

    sub = commands.add_parser("mc-scan", help="Monte Carlo decay scan.")
    sub.add_argument("--t-grid", type=_time_grid, default=_time_grid("1:10:0.5"),
                     help="start:stop:step, stop inclusive.")
    _add_mc(sub)
    _add_common(sub)

    sub = commands.add_parser("grid", help="Grid summability check.")
    sub.add_argument("--delta", type=float, default=0.5)
    sub.add_argument("--m-max", type=_positive_int, default=200)
    _add_common(sub)

    sub = commands.add_parser("verify", help="Run the acceptance checks.")
    sub.add_argument("--group", default="so:3")
    sub.add_argument("--with-mc", action="store_true", help="Include the Monte Carlo checks.")
    _add_common(sub)

    return parser


def _profile_grid(args):
    if args.t_max < args.t_min:
        raise errors.PreconditionError("--t-max must not be below --t-min",
                                       name="t_max", value=args.t_max)

    return np.linspace(args.t_min, args.t_max, args.steps)


def _leading_term(group, param, ts):
    """Size of the leading asymptotic term of phi_s at each t."""
    if param.is_trivial:
        return np.ones_like(ts)

    c = special.hc_c_function(group, param)

    if param.is_principal:
        # phi ~ 2 Re(c e^{i lambda t}) e^{-rho t}
        return 2.0 * abs(c) * np.exp(-group.rho * ts)

    return c.real * np.exp((param.value - group.rho) * ts)


def run_sphfn(cfg, args):
    group = cfg.get_group()
    param = groups.parse_param(args.param)
    groups.check_param(group, param)
    ts = _profile_grid(args)

    phi = special.spherical_values(group, param, ts)
    envelope = special.envelope_01(group, param, ts)
    ratio = phi / _leading_term(group, param, ts)

    table = report.Table(("t", "phi", "envelope_01", "ratio_02"),
                         zip(ts.tolist(), phi.tolist(), envelope.tolist(), ratio.tolist()))
    certificate = special.certify_bound_01(group, [param], ts)[0]
    table.summary.update(group=group.name, param=param.label, bound_01=certificate.constant)
    return table, EXIT_OK


def run_psi(cfg, args):
    group = cfg.get_group()
    param = groups.parse_param(args.param)
    groups.check_param(group, param)
    ts = _profile_grid(args)

    values = balls.psi_values(group, param, ts)
    scaled = values * np.exp((group.rho - param.re_s(group)) * ts)
    r = args.check_bound if args.check_bound is not None else param.re_s(group)
    ratio = np.abs(values) * np.exp((group.rho - r) * ts) / np.maximum(ts, 1.0)

    table = report.Table(("t", "psi", "psi_times_envelope", "bound_ratio"),
                         zip(ts.tolist(), values.tolist(), scaled.tolist(), ratio.tolist()))
    table.summary.update(group=group.name, param=param.label, r=r)
    code = EXIT_OK

    if args.check_bound is not None:
        usable = ts[ts >= 1]
        if not param.is_trivial and len(usable):
            table.summary["bound_constant"] = balls.psi_bound_check(group, [param], usable, r)

    if args.check_lipschitz:
        differences, bounds, holds = [], [], []

        for t in ts:
            if t < 1:
                differences.append(float("nan"))
                bounds.append(float("nan"))
                holds.append(True)
                continue

            check = balls.psi_lipschitz_check(group, param, float(t), args.eps)
            differences.append(check.difference)
            bounds.append(check.bound)
            holds.append(bool(check.holds))

        table.add_column("lipschitz_difference", differences)
        table.add_column("lipschitz_bound", bounds)
        table.add_column("lipschitz_holds", holds)

        if not all(holds):
            LOG.error("The psi Lipschitz bound fails on the grid")
            code = EXIT_NUMERICAL

    return table, code


def run_volume(cfg, args):
    group = cfg.get_group()
    ts = np.array(args.t, dtype=float)

    if np.any(ts < 0):
        raise errors.PreconditionError("Radii must be >= 0", name="t", value=ts)

    volumes = [balls.ball_volume(group, float(t)) for t in ts]
    scaled = balls.scaled_volumes(group, ts).tolist()
    table = report.Table(("t", "volume", "scaled_volume"), zip(ts.tolist(), volumes, scaled))
    table.summary.update(group=group.name, rho=group.rho)
    return table, EXIT_OK


def run_simulate(cfg, args):
    spec, f = config.load_spectrum(cfg.spec_path)
    ts = _profile_grid(args)

    decay = spectrum.theorem_mean_report(spec, f, ts, threads=cfg.threads)

    if len(spec.atoms) > 1 and f.atom_norms[1] > 0:
        distance = spectrum.direction_convergence(spec, f, ts, threads=cfg.threads).tolist()
    else:
        LOG.warning("No weighted atom s_1; direction_distance is not defined")
        distance = [float("nan")] * len(ts)

    decay.add_column("direction_distance", distance)
    decay.summary["fixedbound_envelope"] = spectrum.fixedbound_envelope(
        spec, f, ts, threads=cfg.threads)

    if args.p is not None:
        decay.summary["pointwise_exponent"] = spectrum.pointwise_exponent(spec, args.p)
        decay.summary["informative_atoms"] = spectrum.informative_atoms(spec, args.p)

    return decay, EXIT_OK


def _append_run(path, run):
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    table = report.Table(montecarlo.RUN_COLUMNS, [run.as_row()])

    with open(path, "a") as f:
        if fresh:
            report.write_csv(table, f)
        else:
            text = report.to_string(table)
            f.write(text.split("\n", 1)[1])


def run_mc(cfg, args):
    obs = montecarlo.parse_observable(args.obs)
    run = montecarlo.mc_average(args.t, args.samples, obs, args.seed, base=args.base,
                                threads=cfg.threads, inverse=not args.forward)

    if args.append:
        _append_run(args.append, run)

    table = report.Table(montecarlo.RUN_COLUMNS, [run.as_row()])
    return table, EXIT_OK


def run_mc_scan(cfg, args):
    obs = montecarlo.parse_observable(args.obs)
    decay = montecarlo.decay_scan(args.t_grid, args.samples, obs, args.seed,
                                  base=args.base, threads=cfg.threads)
    return decay, EXIT_OK


def run_grid(cfg, args):
    result = grid.finite_sum_check(args.delta, args.m_max)
    gaps = dict(result.cauchy_gaps)
    table = report.Table(("m", "cells", "partial_sum", "dominating_sum", "cauchy_gap"))

    for m in range(1, args.m_max + 1):
        table.append((m, result.counts[m - 1], float(result.partial_sums[m - 1]),
                      float(result.dominating_sums[m - 1]), gaps.get(m, float("nan"))))

    table.summary.update(delta=result.delta, dominated=result.dominated,
                         threshold=result.threshold, total=result.total)
    return table, EXIT_OK if result.dominated else EXIT_NUMERICAL


def run_verify(cfg, args):
    group = cfg.get_group()
    checks = verify.run_checks(group, with_mc=args.with_mc, threads=cfg.threads)
    table = verify.as_table(checks)
    passed = all(check.passed for check in checks)
    table.summary.update(group=group.name, passed=passed)
    return table, EXIT_OK if passed else EXIT_NUMERICAL


_RUNNERS = {
    "sphfn": run_sphfn,
    "psi": run_psi,
    "volume": run_volume,
    "simulate": run_simulate,
    "mc": run_mc,
    "mc-scan": run_mc_scan,
    "grid": run_grid,
    "verify": run_verify,
}


def _emit(cfg, table):
    if cfg.out:
        with open(cfg.out, "w") as f:
            report.write(table, f, fmt=cfg.fmt, comment=cfg.comment)
    else:
        report.write(table, sys.stdout, fmt=cfg.fmt, comment=cfg.comment)


def dispatch(argv):
    """Parse `argv`, run the subcommand and write its table.

    Returns:
        The exit code.
    """
    parser = _get_argparser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return ex.code

    # Initialize logging
    init_logging(getattr(logging, args.log_level.replace("WARN", "WARNING")))
    invocation = " ".join(["rankerg"] + list(argv))

    try:
        cfg = RunConfig.from_args(args, invocation)
        table, code = _RUNNERS[args.command](cfg, args)
        _emit(cfg, table)
    except errors.ValidationError as ex:
        LOG.error("%s", ex)
        return EXIT_INVALID
    except errors.NumericalError as ex:
        LOG.error("%s", ex)
        return EXIT_NUMERICAL

    return code


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]

    return dispatch(list(argv))


if __name__ == "__main__":
    sys.exit(main())
