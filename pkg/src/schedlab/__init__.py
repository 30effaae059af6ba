"""Exact LP relaxations, rounding and gap instances for scheduling on unrelated machines."""

from .core import (
    INF,
    BudgetExceeded,
    FractionalAssignment,
    HalfIntegralAssignment,
    Instance,
    InstanceFormatError,
    IntegralAssignment,
    PreconditionViolated,
    format_instance,
    format_rational,
    load,
    loads,
    makespan,
    min_load,
    parse_instance,
    parse_rational,
    read_instance,
    write_instance,
)
from .oracle import MAKESPAN, MAXMIN, brute_force
from .lp import (
    approximate_makespan,
    find_c_lp,
    gcd_granularity_round,
    lst_lp,
    shmoys_tardos_round,
    three_cut_lp,
    three_cut_round,
)
from .configlp import (
    ConfigSolution,
    Configuration,
    config_lp_feasible,
    config_lp_full,
    price_column,
    project_to_assignment,
    verify_config_solution,
)
from .gaplab import build_certificate, gap_report, generate_gap_instance
from .maxmin import decide_T, half_integral_maxmin, half_integral_sparse, maxmin_balance
from .generators import random_instance

__version__ = "0.1.0"
