"""
Ion crystals and gradient-induced spin coupling
===============================================

Equilibrium positions, axial modes and the J matrix of a short Yb-171 chain,
followed by the two-qubit gate times for a few trap settings.
"""

import numpy as np

from ionspin import Frequency, crystal, j_matrix, normal_modes, reproduce_gate_table, yb171

yb = yb171()
nu_z = Frequency.from_khz(600)

# three ions at 600 kHz
cfg = crystal(yb, nu_z, 3)
print("positions (um):", np.round(cfg.positions * 1e6, 3))

modes = normal_modes(cfg)
print("mu:", np.round(modes.eigenvalues_mu, 4))
print("mode frequencies (kHz):", [round(f.khz, 1) for f in modes.nu_modes])

# couplings at 100 T/m; J_pauli is the tabulated convention
cm = j_matrix(yb, nu_z, 100.0, 4)
print("J_pauli / 2pi (Hz):")
print(np.round(cm.J_pauli / (2 * np.pi), 2))

# every gate-time row next to its reference
print(f"{'nu_z':>6} {'N':>2} {'b':>4} {'dz_um':>7} {'J_kHz':>8} {'T_ms':>8}")
for ref, got in reproduce_gate_table(yb):
    print(f"{ref.nu_z_khz:6.0f} {ref.n_ions:2d} {ref.b:4.0f} {got.dz_min_um:7.3f} "
          f"{got.J_khz:8.4f} {got.T_ms:8.3f}   (ref {ref.J_khz}, {ref.T_ms})")
