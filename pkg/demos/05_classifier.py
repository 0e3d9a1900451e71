"""
Property classifier
===================

RNP, the Daugavet property and the three diameter-two properties, read off
from the growth of phi. Nothing here samples a diameter.
"""

# %%
from orlicz import Counting, ExpMinusOne, NonAtomic, Power, classify, render_catalog, run_catalog

for line in classify(ExpMinusOne(), NonAtomic(1.0)).lines():
    print(line)

# %%
for line in classify(Power(2.0), Counting(), "orlicz").lines():
    print(line)

# %%
print(render_catalog(run_catalog()))
