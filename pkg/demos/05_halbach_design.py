"""
Halbach magnets for the offset field
====================================

Ideal, segmented and finite-length cylinders, and the sphere.
"""

import numpy as np

from ionspin import HalbachGeometry, halbach_field, remanence_at

Br, ri, ro = 1.23, 0.025, 0.25

print(f"ideal cylinder   {halbach_field(HalbachGeometry(Br, ri, ro)):.3f} T")
print(f"16 segments      {halbach_field(HalbachGeometry(Br, ri, ro, n_segments=16)):.3f} T")
print(f"sphere           {halbach_field(HalbachGeometry(Br, ri, ro, shape='sphere')):.3f} T")

# the field approaches the infinite-cylinder value as the magnet gets longer
for z0 in (0.05, 0.1, 0.25, 0.5, 1.0, 5.0):
    b = halbach_field(HalbachGeometry(Br, ri, ro, n_segments=16, length_z0=z0))
    print(f"half-length {z0:5.2f} m  ->  {b:.3f} T")

# outer radius sweep at fixed bore
for r in np.linspace(0.05, 0.3, 6):
    print(f"r_o = {r:.2f} m  ->  {halbach_field(HalbachGeometry(Br, ri, r)):.3f} T")

# 20 K of cooling raises the remanence
print(f"Br after cooling by 20 K: {remanence_at(Br, -20):.4f} T")
