"""
Searching for cheaper compositions
==================================

Best-first search over iterate / amplify / lift. With amplify(2) only, the
deepest search recovers the 2048-query plan for NE^8; wider amplify factors
and lifts to cos(pi/c) do not beat it within depth 8.
"""

import time

from nequery.plan import render_plan
from nequery.planner import SearchConfig, search

configs = [
    SearchConfig(t_max=1, c_max=2),
    SearchConfig(t_max=2, c_max=2),
    SearchConfig(t_max=4, c_max=2),
    SearchConfig(t_max=8, c_max=2),
    SearchConfig(t_max=8, c_max=4),
    SearchConfig(t_max=8, c_max=4, lift_cos=True),
]

for cfg in configs:
    t0 = time.perf_counter()
    res = search(cfg)
    dt = time.perf_counter() - t0
    print(f"t_max={cfg.t_max} c_max={cfg.c_max} lift_cos={cfg.lift_cos!s:<5} "
          f"-> t={res.t} k={res.k:<5} exponent={res.exponent:.7f}  "
          f"({res.expanded} nodes, {dt:.2f} s)")

print()
print("best plan:", render_plan(search(SearchConfig(t_max=8, c_max=2)).plan))
