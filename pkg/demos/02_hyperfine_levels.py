"""
Hyperfine levels in a strong field
==================================

Compare the exact single-ion spectrum with the high-field approximation,
with natural and with effective gyromagnetic ratios.
"""

import math

import numpy as np

from ionspin import (DOWN_DOWN, DOWN_UP, UP_DOWN, UP_UP, diagonalize, exact_hamiltonian,
                     highfield_hamiltonian, refit_effective_ratios, yb171)

yb = yb171()
GHZ = 2 * math.pi * 1e9

exact = diagonalize(exact_hamiltonian(yb, 1.0))
print(f"mixing at 1 T: cos {math.cos(exact.mixing_angle_theta):.4f}, "
      f"sin {math.sin(exact.mixing_angle_theta):.4f}, leakage {exact.leakage_probability:.4f}")

for name, h in (("exact", exact_hamiltonian(yb, 1.0)),
                ("natural", highfield_hamiltonian(yb, 1.0, "natural")),
                ("effective", highfield_hamiltonian(yb, 1.0, "effective"))):
    spec = diagonalize(h)
    print(f"{name:>9}: nuclear flips {spec.transition(UP_UP, UP_DOWN) / GHZ:.4f}"
          f" / {spec.transition(DOWN_UP, DOWN_DOWN) / GHZ:.4f} GHz")

# leakage falls off as the field grows
for B in (0.5, 1, 2, 5, 10):
    print(f"B = {B:4} T  sin^2(theta) = {diagonalize(exact_hamiltonian(yb, B)).leakage_probability:.5f}")

# refit the effective-ratio form against the exact splittings
fit = refit_effective_ratios(yb, np.linspace(1, 5, 9))
print("refit S coefficients (GHz/T):", np.round(fit.coeffs_S_ghz, 3))
print("refit I coefficients (GHz/T):", np.round(fit.coeffs_I_ghz, 3))
