"""
Rounding the assignment LP
==========================

Smallest feasible LP target, then the slot-matching rounding, compared with
the exact optimum.
"""

from schedlab import approximate_makespan, brute_force, find_c_lp, loads, lst_lp, makespan, shmoys_tardos_round
from schedlab.generators import random_instance
from schedlab.lp import granularity, three_cut_round

# same instance every run
inst = random_instance(4, 10, (1, 20), density=0.7, seed=2024)

T = find_c_lp(inst, granularity(inst))
x = lst_lp(inst, T).assignment
a = shmoys_tardos_round(inst, x, T)
opt = brute_force(inst).optimum
print("LP target:", T, " optimum:", opt)
print("rounded loads:", [str(l) for l in loads(inst, a)])
print("ratio to optimum:", makespan(inst, approximate_makespan(inst)) / opt)

# jobs within a factor three of each other: extra cuts keep the ratio under 11/6
band = random_instance(3, 8, density=0.8, seed=7, gamma_band=6)
b = three_cut_round(band, 6)
print("three-cut ratio:", makespan(band, b) / brute_force(band).optimum)
