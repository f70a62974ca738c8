"""
Exact p-ladders of the two constructions
========================================

Walk both plans leaf first and print t, k and p after every step. All p
values are exact rationals; the decimal column is only for reading.
"""

from nequery import CONSTRUCTION_1, CONSTRUCTION_2, exponent
from nequery.planner import trace

for name, plan in [("construction 1", CONSTRUCTION_1), ("construction 2", CONSTRUCTION_2)]:
    print(name)
    for row in trace(plan):
        exact = row.p_exact if len(row.p_exact) < 30 else row.p_exact[:27] + "..."
        print(f"  {row.move:<12} t={row.t}  k={row.k:<5} p={row.p_decimal:>11}   {exact}")
    e = exponent(plan)
    print(f"  exponent k^(1/t) = {e.base:.7f}  (log base 3: {e.vs_classical:.7f})\n")

# the exact numerators and denominators grow fast; the last iterate before
# the final lift in construction 2
p = trace(CONSTRUCTION_2)[-3].p_exact
print("digits in the last exact p:", len(p))
