"""
Simulating the constructions on concrete inputs
===============================================

Run the matrix-free simulator on a few inputs and check that the overlap
<start|A|start> is +1 when NE^d = 0 and -1 when NE^d = 1.
"""

import time

import numpy as np

from nequery import CONSTRUCTION_1, CONSTRUCTION_2, dimension, eval_ne_d_many, overlap_many, queries

rng = np.random.default_rng(42)

# construction 1: every one of the 512 inputs for NE^2
bits = ((np.arange(512)[:, None] >> np.arange(8, -1, -1)) & 1).astype(np.int8)
ov, res = overlap_many(CONSTRUCTION_1, bits)
ne = eval_ne_d_many(2, bits)
print("construction 1, dim", dimension(CONSTRUCTION_1), "queries", queries(CONSTRUCTION_1))
print("  NE=0:", np.sum(ne == 0), "inputs, overlap range", ov[ne == 0].real.min(), ov[ne == 0].real.max())
print("  NE=1:", np.sum(ne == 1), "inputs, overlap range", ov[ne == 1].real.min(), ov[ne == 1].real.max())

# construction 2 lives in 6562 dimensions and reads 3^8 = 6561 bits
x = rng.integers(0, 2, size=(16, 3**8), dtype=np.int8)
x[0] = 0                    # all zeros: NE^8 = 0
x[1] = 0
x[1, 0] = 1                 # one flipped bit: NE^8 = 1
t0 = time.perf_counter()
ov, res = overlap_many(CONSTRUCTION_2, x)
dt = time.perf_counter() - t0
ne = eval_ne_d_many(8, x)
print("\nconstruction 2, dim", dimension(CONSTRUCTION_2), "queries", queries(CONSTRUCTION_2))
for i in range(len(x)):
    print(f"  input {i:2d}  NE^8={ne[i]}  overlap={ov[i].real:+.12f}  residual={res[i]:.1e}")
print(f"  {dt / len(x):.3f} s per input")
