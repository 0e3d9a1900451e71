"""
Orlicz functions, growth conditions and conjugates
==================================================

A tour of the descriptor families and of the quantities everything else is
built on: the critical constants a, d, c, b, the N-function classes, the
doubling conditions and the complementary function.
"""

# %%
import math

import numpy as np

from orlicz import (
    Condition,
    ExpMinusOne,
    Linear,
    PiecewiseLinear,
    Power,
    ULogU,
    biconjugate_check,
    check_delta2,
    conjugate,
    critical_constants,
    finiteness_duality,
    young_gap,
)

shifted = PiecewiseLinear(((0.0, 0.0), (1.0, 0.0), (2.0, 1.0)))  # max(0, u - 1)
family = [Linear(1.0), Power(2.0), Power(4.0), ExpMinusOne(), ULogU(), shifted]

# %%
# critical constants: phi vanishes up to a, is linear up to d, reaches 1 at c, is finite below b
for f in family:
    k = critical_constants(f)
    print(f"{f.label():>12}  a={k.a:<4g} d={k.d:<4g} c={k.c:<8.4g} b={k.b:g}  N-class={f.n_function_class()}")

# %%
# doubling conditions, exact where the family has a closed form
for f in family:
    cells = []
    for cond in Condition:
        try:
            cells.append(f"{cond.value}: {check_delta2(f, cond).label()}")
        except Exception as e:  # Delta2^0 is undefined for some shapes
            cells.append(f"{cond.value}: {type(e).__name__}")
    print(f"{f.label():>12}  " + ", ".join(cells))

# %%
# e^u - 1 is an N-function at infinity but fails Delta2 at infinity: the ratio phi(2u)/phi(u) = e^u + 1 is unbounded
g = check_delta2(ExpMinusOne(), Condition.DELTA2_INF, empirical=True)
print(g.label(), "first u past the ratio ceiling:", round(g.witness_u, 4), "vs ln(1e6 - 1) =", round(math.log(1e6 - 1), 4))

# %%
# conjugates: closed forms where they exist, a numeric sup otherwise
pair = conjugate(ExpMinusOne())
print(pair.conjugate.label(), "at 2:", pair.conjugate._scalar(2.0), "=", 2 * math.log(2) - 1)
print("numeric path:", conjugate(ExpMinusOne(), numeric=True).conjugate._scalar(2.0))
print("Young gap at the subgradient (ln 2, 2):", young_gap(pair, math.log(2), 2.0))

# %%
# conjugating twice gives phi back
for f in (Power(2.0), ULogU()):
    print(f.label(), "max relative error of phi** on [1e-2, 1e2]:",
          biconjugate_check(f, np.geomspace(1e-2, 1e2, 64)).max_error)

# %%
# phi is N at infinity exactly when phi_* is finite
for f in (Power(2.0), Linear(1.0), shifted, ExpMinusOne()):
    print(f.label(), finiteness_duality(f))
