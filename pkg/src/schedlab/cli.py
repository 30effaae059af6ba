"""``schedlab`` command line.

Exit status: 0 on success, 1 when the answer is a negative verdict
(infeasible, no solution), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import configlp, gaplab, lp, maxmin, oracle
from .core import (
    BudgetExceeded,
    InstanceFormatError,
    PreconditionViolated,
    format_instance,
    format_rational,
    makespan,
    min_load,
    parse_rational,
    read_instance,
)
from .generators import random_instance

OK, NO, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _int_list(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _print_matrix(x, out) -> None:
    for row in x.to_matrix():
        out.write(" ".join(format_rational(v) for v in row) + "\n")


def _print_integral(instance, a, out, objective="makespan") -> None:
    for j, i in enumerate(a.machine_of):
        out.write(f"assign {j} {i}\n")
    value = makespan(instance, a) if objective == "makespan" else min_load(instance, a)
    out.write(f"value {format_rational(value)}\n")


def _print_half(instance, h, out) -> None:
    for j, row in enumerate(h.x):
        out.write(f"assign {j} " + " ".join(str(i) for i in sorted(row)) + "\n")
    out.write(f"value {format_rational(min_load(instance, h))}\n")


def _load(path):
    try:
        return read_instance(path)
    except InstanceFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_lstlp(args, out):
    instance = _load(args.instance)
    if args.target is None:
        g = args.granularity or lp.granularity(instance)
        out.write(f"c_lp {format_rational(lp.find_c_lp(instance, g))}\n")
        return OK
    result = lp.lst_lp(instance, args.target)
    if not result.feasible:
        out.write("infeasible\n")
        return NO
    out.write("feasible\n")
    _print_matrix(result.assignment, out)
    return OK


def cmd_round(args, out):
    instance = _load(args.instance)
    T = args.target
    if T is None:
        T = lp.find_c_lp(instance, lp.granularity(instance))
    result = lp.lst_lp(instance, T)
    if not result.feasible:
        out.write("infeasible\n")
        return NO
    a = lp.shmoys_tardos_round(instance, result.assignment, T)
    out.write(f"target {format_rational(T)}\n")
    _print_integral(instance, a, out)
    return OK


def cmd_approx(args, out):
    instance = _load(args.instance)
    _print_integral(instance, lp.approximate_makespan(instance), out)
    return OK


def cmd_gcd_round(args, out):
    instance = _load(args.instance)
    _print_integral(instance, lp.gcd_granularity_round(instance), out)
    return OK


def cmd_three_cut(args, out):
    instance = _load(args.instance)
    result = lp.three_cut_lp(instance, args.gamma)
    a = lp.shmoys_tardos_round(instance, result.assignment, result.target)
    out.write(f"target {format_rational(result.target)}\n")
    _print_integral(instance, a, out)
    return OK


def cmd_configlp(args, out):
    instance = _load(args.instance)
    if args.full:
        y = configlp.config_lp_full(instance, args.target)
    else:
        y = configlp.config_lp_feasible(instance, args.target, args.mode, args.epsilon)
    if y is None:
        out.write("infeasible\n")
        return NO
    out.write("feasible\n")
    if args.certificate:
        with open(args.certificate, "w", encoding="utf-8") as fh:
            fh.write(configlp.format_config_solution(y))
    else:
        out.write(configlp.format_config_solution(y))
    return OK


def _read_certificate(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return configlp.parse_config_solution(text)
    except InstanceFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_project(args, out):
    instance = _load(args.instance)
    y = _read_certificate(args.certificate)
    _print_matrix(configlp.project_to_assignment(instance, y), out)
    return OK


def cmd_verify_config(args, out):
    instance = _load(args.instance)
    y = _read_certificate(args.certificate)
    problem = configlp.verify_config_solution(instance, y, args.target)
    if problem is None:
        out.write("valid\n")
        return OK
    out.write(f"invalid {problem.kind}: {problem.detail}\n")
    return NO


def cmd_gen_gap(args, out):
    try:
        g = gaplab.generate_gap_instance(args.k, allow_small_k=args.allow_small_k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(format_instance(g.instance))
    if args.certificate:
        with open(args.certificate, "w", encoding="utf-8") as fh:
            fh.write(configlp.format_config_solution(gaplab.build_certificate(g)))
    out.write(f"k {g.k} depth {g.N} machines {g.instance.m} jobs {g.instance.n}\n")
    return OK


def cmd_gap_report(args, out):
    if any(k < 2 for k in args.k):
        raise UsageError("every k must be at least 2")
    out.write(gaplab.format_gap_report(gaplab.gap_report(args.k)))
    return OK


def cmd_maxmin_balance(args, out):
    instance = _load(args.instance)
    try:
        if args.decide is not None:
            outcome = maxmin.decide_T(instance, args.decide)
            if not outcome.solved:
                out.write("no-solution\n")
                return NO
            _print_integral(instance, outcome.assignment, out, "maxmin")
            return OK
        _print_integral(instance, maxmin.maxmin_balance(instance), out, "maxmin")
    except maxmin.NotBalancingInstance as exc:
        raise UsageError(str(exc)) from None
    return OK


def cmd_maxmin_half(args, out):
    instance = _load(args.instance)
    h = maxmin.half_integral_maxmin(instance)
    if args.sparse:
        h = maxmin.half_integral_sparse(instance, h)
    _print_half(instance, h, out)
    return OK


def cmd_brute(args, out):
    instance = _load(args.instance)
    result = oracle.brute_force(instance, args.objective, args.budget)
    _print_integral(instance, result.witness, out, args.objective)
    return OK


def cmd_random(args, out):
    instance = random_instance(
        args.m,
        args.n,
        (args.p_min, args.p_max),
        args.density,
        args.seed,
        balancing=args.balancing,
        gamma_band=args.gamma_band,
    )
    text = format_instance(instance)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schedlab", description="Scheduling on unrelated machines: LPs, rounding, gaps, max-min.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text, instance=True):
        p = sub.add_parser(name, help=help_text)
        if instance:
            p.add_argument("--instance", required=True, help="instance file")
        p.set_defaults(func=func)
        return p

    p = command("lstlp", cmd_lstlp, "assignment LP feasibility at T, or the smallest feasible T")
    p.add_argument("--target", type=_rational)
    p.add_argument("--granularity", type=_rational, help="search step when --target is omitted")

    p = command("round", cmd_round, "solve the assignment LP and round it")
    p.add_argument("--target", type=_rational, help="default: smallest feasible target")

    command("approx-makespan", cmd_approx, "2-approximate makespan schedule")
    command("gcd-round", cmd_gcd_round, "rounding at gcd-granularity targets")

    p = command("three-cut", cmd_three_cut, "11/6-approximation for times in [gamma, 3 gamma]")
    p.add_argument("--gamma", type=_rational, required=True)

    p = command("configlp", cmd_configlp, "configuration LP feasibility at T")
    p.add_argument("--target", type=_rational, required=True)
    p.add_argument("--mode", choices=[configlp.EXACT, configlp.RELAXED], default=configlp.EXACT)
    p.add_argument("--epsilon", type=_rational, default=configlp.DEFAULT_EPSILON)
    p.add_argument("--full", action="store_true", help="enumerate every configuration instead of pricing")
    p.add_argument("--certificate", help="write the solution here instead of stdout")

    p = command("project", cmd_project, "project a configuration solution to x")
    p.add_argument("--certificate", required=True)

    p = command("verify-config", cmd_verify_config, "check a configuration solution exactly")
    p.add_argument("--certificate", required=True)
    p.add_argument("--target", type=_rational, help="default: the certificate's target")

    p = command("gen-gap", cmd_gen_gap, "write the gap instance for k", instance=False)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--allow-small-k", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--certificate")

    p = command("gap-report", cmd_gap_report, "TSV of fractional target, integral bound and ratio", instance=False)
    p.add_argument("--k", type=_int_list, required=True, help="comma-separated, e.g. 3,4,6,9")

    p = command("maxmin-balance", cmd_maxmin_balance, "max-min 2-approximation, at most two machines per job")
    p.add_argument("--decide", type=_rational, metavar="T", help="run the decision procedure at T only")

    p = command("maxmin-half", cmd_maxmin_half, "half-integral max-min assignment")
    p.add_argument("--sparse", action="store_true", help="at most m/2 split jobs")

    p = command("brute", cmd_brute, "exact optimum by exhaustive search")
    p.add_argument("--objective", choices=[oracle.MAKESPAN, oracle.MAXMIN], default=oracle.MAKESPAN)
    p.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)

    p = command("random", cmd_random, "seeded random instance", instance=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p-min", type=int, default=1)
    p.add_argument("--p-max", type=int, default=10)
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--balancing", action="store_true")
    p.add_argument("--gamma-band", type=_rational)
    p.add_argument("--out")
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    try:
        return args.func(args, out)
    except (UsageError, PreconditionViolated, BudgetExceeded, ValueError, OSError) as exc:
        err.write(f"schedlab: {exc}\n")
    return ERROR


def main() -> None:
    sys.exit(run())
