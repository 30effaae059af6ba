"""
Max-min allocation
==================

Each job fits at most two machines: binary search over T with the forced-move
phase and a two-colouring. General instances: a half-integral solution,
then one with few split jobs.
"""

from schedlab import half_integral_maxmin, half_integral_sparse, maxmin_balance, min_load
from schedlab.generators import random_instance
from schedlab.oracle import MAXMIN, brute_force

inst = random_instance(4, 9, (1, 15), density=0.6, seed=31, balancing=True)
opt = brute_force(inst, MAXMIN).optimum
a = maxmin_balance(inst)
print("balancing: optimum", opt, "found", min_load(inst, a))

general = random_instance(5, 10, (1, 20), density=0.7, seed=0)
opt = brute_force(general, MAXMIN).optimum
half = half_integral_maxmin(general)
sparse = half_integral_sparse(general, half)
print("optimum", opt)
print("half-integral value", min_load(general, half), "split jobs", half.split_jobs())
print("sparse value", min_load(general, sparse), "split jobs", sparse.split_jobs())
