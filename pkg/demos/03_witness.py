"""
Uniformly non-l1^2 points
=========================

When phi is not linear near its top there is a normalized indicator x = a chi_A
such that x + y and x - y can never both be long. The certificate below replays
the argument for each challenger y and reports the bound it guarantees.
"""

# %%
import numpy as np

from orlicz import Counting, ExpMinusOne, Linear, NonAtomic, Power, StepFunction
from orlicz.geometry import certify_witness, challenge_witness, construct_witness

for f in (Power(2.0), Power(4.0), ExpMinusOne()):
    for m in (NonAtomic(), Counting()):
        w = construct_witness(f, m)
        cert = certify_witness(f, w, 500, seed=1)
        print(f"{f.label():>6} {str(m):<16} a={w.a:.6g} mass={w.mass:.6g}  "
              f"violations={cert.violations} max bound={cert.max_bound:.6f}")

# %%
# Hilbert space: min(||e1 + y||, ||e1 - y||) <= sqrt 2 for every unit y
f = Power(2.0)
w = construct_witness(f, Counting())
r = challenge_witness(f, w, StepFunction.sequence([0.0, 1.0]))
print("orthogonal challenger:", r.observed_min, "certified", r.certified_bound)
print("proof intermediates: d", r.d, "gamma", r.gamma, "sigma", r.sigma, "delta", r.delta, "eps", r.epsilon)

# %%
# for phi = u there is no such point: e1 +- e2 both have l1 norm 2
print("linear witness:", construct_witness(Linear(1.0), NonAtomic()))
print("e1 +- e2 in l1:", np.abs([1, 1]).sum(), np.abs([1, -1]).sum())
