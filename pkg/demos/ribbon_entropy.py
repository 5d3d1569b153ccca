"""
Entropy of two ribbons in one dimension
=======================================

Two homogeneous intervals [a, b] and [c, d] coupled through a massless
scalar field. The closed forms are polylogarithms of exp(-2 gamma T x)
over the four edge-to-edge separations.
"""

import numpy as np

from casimir_thermo.geometry import RibbonPair
from casimir_thermo.scalar1d import entropy_1d, free_energy_1d, thermo_1d

# Widths 2 and 4 with a gap of 8, equal susceptibilities
pair = RibbonPair.from_widths(2.0, 8.0, 4.0, chi1=1.0, chi2=1.0)
T = np.geomspace(0.01, 10, 9)

# The interaction part of the entropy is negative at low temperature
for t in T:
    e_self, e_int = free_energy_1d(pair, t)
    print(f"T={t:8.4f}  E_int={e_int: .4e}  S_int={entropy_1d(pair, t, part='interaction'): .4e}")

# Wider right ribbon, same gap
wide = RibbonPair.from_widths(2.0, 8.0, 8.0)
print("S_int ratio wide/narrow at T=0.05:",
      entropy_1d(wide, 0.05, part="interaction") / entropy_1d(pair, 0.05, part="interaction"))

# One call bundles E, S, U and the force dE/dr
res = thermo_1d(pair, 0.1)
print(res.point)
print("force on the right ribbon (>0 repels):", res.force_on_body)
