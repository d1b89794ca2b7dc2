"""Radial secular motion in an rf trap with an axial magnetic field.

Averaging over the rf micromotion gives an isotropic radial oscillator of
frequency omega_r plus a term (omega_c / 2) L_z; the two circular modes then
oscillate at omega_r +- omega_c / 2 and the axial motion is unchanged.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, StabilityError
from .units import CONSTANTS, IonSpecies

Q_MAX = 0.9  # heuristic edge of the lowest stability region


@dataclass(frozen=True)
class RfTrapParams:
    drive_Omega_t: float  # rad/s
    a: float
    q: float
    species: IonSpecies

    def __post_init__(self):
        if not self.drive_Omega_t > 0:
            raise DomainError("rf drive frequency must be positive")

    @property
    def stable(self) -> bool:
        beta_sq = self.a + self.q**2 / 2
        return (beta_sq > 0 or (self.a == 0 and self.q == 0)) and abs(self.q) < Q_MAX


def secular_frequency(p: RfTrapParams) -> float:
    """Lowest-order pseudopotential frequency (Omega_t / 2) sqrt(a + q^2 / 2), rad/s."""
    if not p.stable:
        raise StabilityError(f"(a, q) = ({p.a}, {p.q}) outside the lowest stability region")
    return 0.5 * p.drive_Omega_t * math.sqrt(p.a + p.q**2 / 2)


def cyclotron_frequency(species: IonSpecies, B: float) -> float:
    """e B / m for a singly charged ion, rad/s."""
    if B < 0:
        raise DomainError("field must be non-negative")
    return CONSTANTS.elementary_charge * B / species.mass


class ShiftedModes(NamedTuple):
    omega_plus: float
    omega_minus: float
    confined: bool


def shifted_mode_frequencies(p: RfTrapParams, B: float) -> ShiftedModes:
    """(omega_r + omega_c/2, omega_r - omega_c/2); warns when the lower mode is not confined."""
    w_r = secular_frequency(p)
    w_c = cyclotron_frequency(p.species, B)
    confined = w_r > w_c / 2
    if not confined:
        warnings.warn(f"omega_r = {w_r:.4g} rad/s <= omega_c/2 = {w_c / 2:.4g} rad/s; "
                      "the lower radial mode is not confined", stacklevel=2)
    return ShiftedModes(w_r + w_c / 2, w_r - w_c / 2, confined)


def dynamical_matrix(omega_r: float, omega_c: float, mass: float = 1.0) -> np.ndarray:
    """Linear equations of motion d/dt (x, y, p_x, p_y) = M (x, y, p_x, p_y).

    From H = p^2/2m + m omega_r^2 (x^2 + y^2)/2 + omega_c (p_x y - p_y x)/2.
    """
    m, wr2, h = mass, omega_r**2, omega_c / 2
    return np.array([
        [0.0, h, 1 / m, 0.0],
        [-h, 0.0, 0.0, 1 / m],
        [-m * wr2, 0.0, 0.0, h],
        [0.0, -m * wr2, -h, 0.0],
    ])


def mode_frequencies(omega_r: float, omega_c: float) -> np.ndarray:
    """Positive eigenfrequencies of :func:`dynamical_matrix`, descending."""
    ev = np.linalg.eigvals(dynamical_matrix(omega_r, omega_c))
    w = np.sort(np.abs(ev.imag))[::-1]
    return w[::2]


def mathieu_slow_frequency(a: float, q: float, drive_Omega_t: float, *,
                           periods: int = 400, samples_per_period: int = 64) -> float:
    """Slow oscillation frequency of x'' = -(a - 2 q cos(2 tau)) x, rad/s.

    Integrates the classical equation of motion from rest at x = 1 and takes
    the dominant low-frequency peak of its spectrum, refined by parabolic
    interpolation of the windowed FFT.
    """
    n = periods * samples_per_period
    tau = np.linspace(0, periods * math.pi, n, endpoint=False)

    def rhs(t, y):
        return [y[1], -(a - 2 * q * math.cos(2 * t)) * y[0]]

    sol = solve_ivp(rhs, (0, tau[-1]), [1.0, 0.0], t_eval=tau, rtol=1e-10, atol=1e-12,
                    method="DOP853")
    x = sol.y[0] * np.hanning(n)
    pad = 8 * n
    spec = np.abs(np.fft.rfft(x, pad))
    freqs = np.fft.rfftfreq(pad, d=tau[1] - tau[0]) * 2 * math.pi  # per unit tau
    band = freqs < 1.0  # slow motion lies below the micromotion sidebands (beta < 1)
    k = int(np.argmax(np.where(band, spec, 0)))
    y0, y1, y2 = np.log(spec[k - 1:k + 2])
    shift = 0.5 * (y0 - y2) / (y0 - 2 * y1 + y2)
    beta = (freqs[k] + shift * (freqs[1] - freqs[0]))
    return beta * drive_Omega_t / 2
