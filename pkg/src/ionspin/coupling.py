"""Magnetic-gradient-induced coupling between electron spins.

For ions in B(z) = B0 + b z the Larmor frequency of ion i varies with position,
and eliminating the shared axial modes gives an Ising interaction

    H_c = -1/2 sum_{i<j} J_ij S_z^i S_z^j,
    J_ij = sum_l 2 hbar / (m nu_l^2) D_il D_jl dOmega_i/dz dOmega_j/dz,

with spin-1/2 operators S_z (eigenvalues +-1/2). Written with Pauli matrices
the same interaction has couplings J_ij / 4; that smaller number is the one
usually tabulated, and :attr:`CouplingMatrix.J_pauli` exposes it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crystal import NormalModes, crystal, normal_modes
from .errors import DomainError
from .units import CONSTANTS, TWO_PI, Frequency, IonSpecies, angular


@dataclass(frozen=True)
class FieldConfig:
    B0: float  # T, at the trap centre
    gradient_b: float = 0.0  # T/m

    def __post_init__(self):
        if not self.B0 > 0:
            raise DomainError(f"offset field must be positive, got {self.B0} T")
        if self.gradient_b < 0:
            raise DomainError(f"gradient must be non-negative, got {self.gradient_b} T/m")

    def at(self, z):
        return self.B0 + self.gradient_b * np.asarray(z)


@dataclass(frozen=True)
class CouplingMatrix:
    J: np.ndarray  # rad/s, spin-1/2 operator convention
    modes: NormalModes
    field: FieldConfig
    species: IonSpecies
    positions: np.ndarray  # m

    @property
    def J_pauli(self) -> np.ndarray:
        """Couplings for the Pauli-operator form -1/2 sum J'_ij sigma_z sigma_z, rad/s."""
        return self.J / 4.0

    def nearest_neighbour(self, i: int, pauli: bool = False) -> float:
        """Coupling between ions ``i`` and ``i + 1`` (0-based), rad/s."""
        m = self.J_pauli if pauli else self.J
        return float(m[i, i + 1])


def larmor_gradient(species: IonSpecies, b: float) -> float:
    """dOmega_S/dz = gamma_S b, in (rad/s)/m."""
    if b < 0:
        raise DomainError(f"gradient must be non-negative, got {b}")
    return species.gamma_S * b


def j_matrix(species: IonSpecies, nu_z, b: float, n_ions: int,
             B0: float = 1.0) -> CouplingMatrix:
    """Coupling matrix of a homogeneous chain; zero diagonal, rad/s."""
    if not b > 0:
        raise DomainError(f"gradient must be positive, got {b}")
    if n_ions < 2:
        raise DomainError("need at least two ions")
    config = crystal(species, nu_z, n_ions)
    modes = normal_modes(config)
    w_l = modes.angular_frequencies
    D = modes.mode_matrix_D
    grad = larmor_gradient(species, b)
    inv_stiffness = (D / (species.mass * w_l**2)) @ D.T
    J = 2.0 * CONSTANTS.reduced_planck * grad**2 * inv_stiffness
    J = 0.5 * (J + J.T)
    np.fill_diagonal(J, 0.0)
    return CouplingMatrix(J, modes, FieldConfig(B0, b), species, config.positions)


def gate_time(J_pair: float) -> float:
    """Two-qubit gate duration T with T * (J_pair / 2 pi) = pi, in s.

    ``J_pair`` is an angular coupling (rad/s) in the tabulated (Pauli) convention.
    """
    if not J_pair > 0:
        raise DomainError(f"coupling must be positive, got {J_pair}")
    return math.pi / (J_pair / TWO_PI)


@dataclass(frozen=True)
class GateTableRow:
    nu_z_khz: float
    n_ions: int
    b: float  # T/m
    dz_min_um: float
    J_khz: float
    T_ms: float


# published reference: B0 = 1 T, Yb-171; J is nearest-neighbour (middle pair
# for four ions), in the Pauli convention, as an ordinary frequency
REFERENCE_GATE_TABLE = (
    GateTableRow(600, 3, 50, 4.15, 0.0444, 70.8),
    GateTableRow(600, 3, 100, 4.15, 0.178, 17.7),
    GateTableRow(600, 3, 300, 4.15, 1.60, 1.97),
    GateTableRow(600, 4, 50, 3.50, 0.0368, 85.2),
    GateTableRow(600, 4, 100, 3.50, 0.147, 21.3),
    GateTableRow(600, 4, 300, 3.50, 1.33, 2.37),
    GateTableRow(200, 3, 50, 8.63, 0.399, 7.87),
    GateTableRow(200, 3, 100, 8.63, 1.60, 1.97),
    GateTableRow(200, 3, 300, 8.63, 14.38, 0.218),
    GateTableRow(200, 4, 50, 7.28, 0.332, 9.47),
    GateTableRow(200, 4, 100, 7.28, 1.33, 2.37),
    GateTableRow(200, 4, 300, 7.28, 11.94, 0.263),
)


def gate_table_row(species: IonSpecies, nu_z, n_ions: int, b: float) -> GateTableRow:
    """Compute one row of the gate-time table (same units as the reference)."""
    cm = j_matrix(species, nu_z, b, n_ions)
    pair = (n_ions - 1) // 2  # middle pair
    J = cm.nearest_neighbour(pair, pauli=True)
    dz = float(np.min(np.diff(cm.positions)))
    return GateTableRow(
        nu_z_khz=Frequency(angular(nu_z)).khz,
        n_ions=n_ions,
        b=b,
        dz_min_um=dz * 1e6,
        J_khz=J / TWO_PI * 1e-3,
        T_ms=gate_time(J) * 1e3,
    )


def reproduce_gate_table(species: IonSpecies) -> list:
    """(reference, computed) pairs for every reference row."""
    return [(ref, gate_table_row(species, Frequency.from_khz(ref.nu_z_khz), ref.n_ions, ref.b))
            for ref in REFERENCE_GATE_TABLE]
