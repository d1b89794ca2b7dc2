"""
Electron-spin spectrum of a chain
=================================

Lines of every ion in a 500 T/m gradient, then the reduced set left once the
passive ions are polarised.
"""

import math

from ionspin import ChainConfig, FieldConfig, Frequency, active_spectrum, full_spectrum, yb171
from ionspin.spectrum import addressing_separation

yb = yb171()

for n in (3, 4):
    cfg = ChainConfig(yb, n, FieldConfig(1.0, 500.0), Frequency.from_khz(600), frozenset({2, 3}))
    print(f"N = {n}: neighbouring groups at least "
          f"{addressing_separation(cfg) / 2 / math.pi / 1e6:.3f} MHz apart")
    ref = full_spectrum(cfg)[0].frequency_hz
    for line in full_spectrum(cfg):
        print(f"  ion {line.ion_index}  {(line.frequency_hz - ref) / 1e6:10.6f} MHz  x{line.weight}")
    print("  active ions only:")
    for line in active_spectrum(cfg):
        print(f"  ion {line.ion_index}  {(line.frequency_hz - ref) / 1e6:10.6f} MHz  given {line.conditioning}")
