"""
Assignment LP versus configuration LP on three unit jobs
=========================================================

Two machines, three jobs of size 1. Any schedule puts two jobs on one
machine, so the optimum is 2.
"""

from fractions import Fraction

from schedlab import Instance, format_rational, brute_force, config_lp_feasible, lst_lp, project_to_assignment
from schedlab.configlp import format_config_solution

def show(x):
    return [[format_rational(v) for v in row] for row in x.to_matrix()]


inst = Instance.from_matrix([[1, 1, 1], [1, 1, 1]])
print("integral optimum:", brute_force(inst).optimum)

# the assignment LP spreads the work evenly and is happy at 3/2
x = lst_lp(inst, Fraction(3, 2)).assignment
print("assignment LP at 3/2:", show(x))

# the configuration LP only knows sets of jobs that fit, and none of them
# carry more than one job below T = 2
for T in (Fraction(3, 2), Fraction(7, 4), Fraction(19, 10), Fraction(2)):
    y = config_lp_feasible(inst, T)
    print(f"configuration LP at {T}:", "feasible" if y else "infeasible")

y = config_lp_feasible(inst, 2)
print(format_config_solution(y), end="")

# projecting back gives an assignment-LP point at the same target
print("projection:", show(project_to_assignment(inst, y)))
