"""
Radial modes of an rf trap in a magnetic field
==============================================

The pseudopotential frequency against direct integration of the Mathieu
equation, and the splitting of the radial modes by the cyclotron frequency.
"""

import math

from ionspin import (RfTrapParams, cyclotron_frequency, mathieu_slow_frequency, secular_frequency,
                     shifted_mode_frequencies, yb171)

yb = yb171()
drive = 2 * math.pi * 10e6

# lowest-order pseudopotential drifts below the true secular motion as q grows
for q in (0.05, 0.1, 0.2, 0.3, 0.4):
    closed = secular_frequency(RfTrapParams(drive, 0.0, q, yb))
    slow = mathieu_slow_frequency(0.0, q, drive)
    print(f"q = {q:.2f}: closed form {closed / 2 / math.pi / 1e3:8.2f} kHz, "
          f"integrated {slow / 2 / math.pi / 1e3:8.2f} kHz ({closed / slow - 1:+.2%})")

p = RfTrapParams(drive, 0.0, 0.3, yb)
for B in (0, 1, 3, 10):
    m = shifted_mode_frequencies(p, B)
    print(f"B = {B:2} T: omega_c/2pi = {cyclotron_frequency(yb, B) / 2 / math.pi / 1e3:7.2f} kHz, "
          f"modes {m.omega_plus / 2 / math.pi / 1e3:8.2f} / {m.omega_minus / 2 / math.pi / 1e3:8.2f} kHz")
