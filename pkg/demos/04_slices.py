"""
Slices of finite-dimensional balls
==================================

Lower bounds on slice diameters by sampling, and the non-l1^2 gap of a point.
In l1 a weak*-slice at e1 has diameter two; in l2 a thin slice is a small cap.
"""

# %%
import math

import numpy as np

from orlicz import Linear, Power
from orlicz.geometry import (
    SliceSpec,
    explicit_pair_diameter,
    slice_diameter_lower_bound,
    uniformly_non_l12_gap,
)

ws = SliceSpec(4, (1, 0, 0, 0), 0.05, "weak_star_slice")
print("l1, explicit pair:", explicit_pair_diameter(Linear(1.0), ws, [1, 1, 1, 1], [1, -1, -1, -1]).lower_bound)
print("l1, sampler:      ", slice_diameter_lower_bound(Linear(1.0), ws, budget=20_000).lower_bound)

# %%
for eps in (0.02, 0.1, 0.5):
    est = slice_diameter_lower_bound(Power(2.0), SliceSpec(4, (1, 0, 0, 0), eps), budget=20_000)
    print(f"l2 cap eps={eps}: lower bound {est.lower_bound:.5f}, exact {2 * math.sqrt(2 * eps - eps * eps):.5f}")

# %%
e1 = np.eye(8)[0]
print("gap at e1 in l2:", uniformly_non_l12_gap(Power(2.0), e1), "vs 2 - sqrt 2 =", 2 - math.sqrt(2))
print("gap at e1 in l1:", uniformly_non_l12_gap(Linear(1.0), e1))
