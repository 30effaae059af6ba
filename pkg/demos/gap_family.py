"""
The tree instances with configuration-LP gap approaching 2
==========================================================

Times are scaled by k: short jobs take 1, long jobs take k. The fractional
solution lives at k + 1, integral schedules need 2k - 1.
"""

from schedlab.configlp import project_to_assignment, verify_config_solution
from schedlab.gaplab import build_certificate, format_gap_report, gap_report, generate_gap_instance

g = generate_gap_instance(4)
print(f"k = {g.k}: depth {g.N}, {g.instance.m} machines, {g.instance.n} jobs")
print("alpha by height:", [str(a) for a in g.alpha.values])

y = build_certificate(g)
print("certificate valid at", y.target, ":", verify_config_solution(g.instance, y) is None)

# the shared job between the two roots is covered half by each
x = project_to_assignment(g.instance, y)
print("shared job coverage per root:", [str(x.weight(r, g.big_job)) for r in g.roots])

# larger k are checked through one root-to-leaf path per tree
print(format_gap_report(gap_report([3, 4, 6, 9, 20])), end="")
