"""Physical constants, frequency handling and ion species.

Everything inside the package is SI with *angular* frequencies (rad/s).
Ordinary frequencies (Hz, kHz, GHz) only appear through the
:class:`Frequency` constructors/accessors and at the CLI boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import scipy.constants as sc

from .errors import DomainError, ValidationError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhysicalConstants:
    reduced_planck: float  # J s
    bohr_magneton: float  # J/T
    elementary_charge: float  # C
    vacuum_permittivity: float  # F/m
    atomic_mass_unit: float  # kg


CONSTANTS = PhysicalConstants(
    reduced_planck=sc.hbar,
    bohr_magneton=sc.physical_constants["Bohr magneton"][0],
    elementary_charge=sc.e,
    vacuum_permittivity=sc.epsilon_0,
    atomic_mass_unit=sc.atomic_mass,
)


@dataclass(frozen=True, order=True)
class Frequency:
    """A frequency stored as angular frequency in rad/s."""

    angular: float

    @classmethod
    def from_hz(cls, hz: float) -> Frequency:
        return cls(TWO_PI * hz)

    @classmethod
    def from_khz(cls, khz: float) -> Frequency:
        return cls.from_hz(khz * 1e3)

    @classmethod
    def from_mhz(cls, mhz: float) -> Frequency:
        return cls.from_hz(mhz * 1e6)

    @classmethod
    def from_ghz(cls, ghz: float) -> Frequency:
        return cls.from_hz(ghz * 1e9)

    @property
    def hz(self) -> float:
        return self.angular / TWO_PI

    @property
    def khz(self) -> float:
        return self.hz * 1e-3

    @property
    def mhz(self) -> float:
        return self.hz * 1e-6

    @property
    def ghz(self) -> float:
        return self.hz * 1e-9


def angular(value) -> float:
    """Return rad/s for a :class:`Frequency` or a bare float (taken as rad/s)."""
    if isinstance(value, Frequency):
        return value.angular
    return float(value)


_ALLOWED_NUCLEAR_SPINS = {Fraction(1, 2), Fraction(3, 2), Fraction(5, 2), Fraction(7, 2)}


@dataclass(frozen=True)
class IonSpecies:
    """Per-isotope constants.

    ``gamma_S`` and ``gamma_I`` are gyromagnetic ratios in (rad/s)/T such that
    the Larmor frequencies are ``gamma * B``; ``hyperfine_A`` is in rad/s.
    """

    name: str
    mass: float
    gamma_S: float
    gamma_I: float
    hyperfine_A: float
    nuclear_spin: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "nuclear_spin", Fraction(self.nuclear_spin))
        if not self.mass > 0:
            raise ValidationError(f"mass must be positive, got {self.mass}")
        if self.hyperfine_A == 0:
            raise ValidationError("hyperfine constant must be nonzero")
        if self.nuclear_spin not in _ALLOWED_NUCLEAR_SPINS:
            raise ValidationError(f"unsupported nuclear spin {self.nuclear_spin}")

    def with_mass(self, mass: float) -> IonSpecies:
        return IonSpecies(self.name, mass, self.gamma_S, self.gamma_I,
                          self.hyperfine_A, self.nuclear_spin)


def yb171() -> IonSpecies:
    """171Yb+ with the rounded constants 28 GHz/T, -7.5 MHz/T, A = 12.645 GHz."""
    return IonSpecies(
        name="Yb171",
        mass=170.936 * CONSTANTS.atomic_mass_unit,
        gamma_S=TWO_PI * 28e9,
        gamma_I=-TWO_PI * 7.5e6,
        hyperfine_A=TWO_PI * 12.645e9,
        nuclear_spin=Fraction(1, 2),
    )


SPECIES = {"yb171": yb171}


def ion_length_scale(species: IonSpecies, nu_z) -> float:
    """Characteristic ion spacing ``(e^2 / (4 pi eps0 m w_z^2))**(1/3)`` in m."""
    w = angular(nu_z)
    if not w > 0:
        raise DomainError(f"axial frequency must be positive, got {w}")
    c = CONSTANTS
    return (c.elementary_charge**2
            / (4 * math.pi * c.vacuum_permittivity * species.mass * w**2)) ** (1 / 3)
