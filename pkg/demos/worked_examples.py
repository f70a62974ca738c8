"""
The small worked examples
=========================

Algorithms 1-3 for NE and NE^2 written as explicit 4x4 and 13x13 matrices,
checked against the plan interpreter.
"""

import numpy as np

from nequery.fixtures import (
    PSI_START,
    algorithm1_final_state,
    algorithm2_final_state,
    algorithm3_final_state,
    algorithm3_space,
    run_fixtures,
)

np.set_printoptions(precision=4, suppress=True)

print("algorithm 1 (one query):")
for x in [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1)]:
    final = algorithm1_final_state(x)
    print(f"  x={x}  final={final.real}  P(output 1)={np.sum(np.abs(final[1:]) ** 2):.4f}")

print("\nalgorithm 2 (two queries), amplitude on the start state:")
for x in [(0, 0, 0), (0, 0, 1), (1, 0, 1)]:
    print(f"  x={x}  {np.vdot(PSI_START, algorithm2_final_state(x)).real:+.6f}")

space = algorithm3_space()
y = [1, 0, 0, 0, 1, 0, 0, 0, 1]
print("\nalgorithm 3 on", y, "-> <0|final> =",
      round(np.vdot(space.zero, algorithm3_final_state(y)).real, 6))

print()
for check in run_fixtures():
    print("PASS" if check.passed else "FAIL", check.name, f"({check.detail})")
