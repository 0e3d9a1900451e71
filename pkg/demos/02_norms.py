"""
Luxemburg and Orlicz norms on step functions
============================================

Step functions are the computable model of L_phi: finitely many levels,
each with a value and the measure of its level set.
"""

# %%
import numpy as np

from orlicz import Linear, NonAtomic, PiecewiseLinear, Power, StepFunction, norm_report
from orlicz.spaces import amemiya_minimize, fundamental_function, l1_equivalence_constants, luxemburg_norm

x = StepFunction.nonatomic([(1.0, 1.0), (2.0, 1.0)])
print(norm_report(Power(2.0), x))  # luxemburg sqrt 5, amemiya 2 sqrt 5

# %%
# for phi = u the Amemiya infimum is approached only as k -> inf
res = amemiya_minimize(Linear(1.0), StepFunction.nonatomic([(-3.0, 2.0)]))
print("linear: value", res.value, "attained:", res.attained)

# %%
# the sandwich ||x|| <= ||x||^0 <= 2 ||x|| on random step functions
rng = np.random.default_rng(0)
for f in (Power(3.0), PiecewiseLinear(((0.0, 0.0), (1.0, 0.0), (2.0, 1.0)))):
    ratios = []
    for _ in range(200):
        k = rng.integers(1, 6)
        y = StepFunction.nonatomic(list(zip(rng.normal(size=k), rng.uniform(0.1, 2, size=k))))
        lux = luxemburg_norm(f, y)
        ratios.append(amemiya_minimize(f, y, lux=lux).value / lux)
    print(f.label(), "amemiya / luxemburg in", (round(min(ratios), 4), round(max(ratios), 4)))

# %%
# fundamental function: ||chi_A|| = 1 / phi^-1(1 / mu(A)), which tends to 0 with mu(A)
for t in 10.0 ** np.arange(-3, 4):
    print(f"t={t:<8g} formula {fundamental_function(Power(2.0), t):.6g}  "
          f"direct {luxemburg_norm(Power(2.0), StepFunction.nonatomic([(1.0, t)])):.6g}")

# %%
# a function that is not N at infinity behaves like L_1 on small sets
print(l1_equivalence_constants(PiecewiseLinear(((0.0, 0.0), (1.0, 0.0), (2.0, 1.0))), NonAtomic()))
