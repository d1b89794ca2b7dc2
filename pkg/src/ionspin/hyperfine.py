"""Single-ion hyperfine structure of an S=1/2, I=1/2 ion in a strong field.

Basis ordering used everywhere (m_S, m_I):

    0: |+1/2, +1/2>   1: |+1/2, -1/2>   2: |-1/2, +1/2>   3: |-1/2, -1/2>

Three Hamiltonians are provided: the exact one with the full contact
interaction A S.I, the high-field approximation keeping only A S_z I_z, and
the same approximation with effective (fitted) gyromagnetic ratios.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, NumericalError, RangeError, UnsupportedSpeciesError
from .units import TWO_PI, IonSpecies


@dataclass(frozen=True)
class SpinBasisState:
    m_S: Fraction
    m_I: Fraction

    def __post_init__(self):
        for m in (self.m_S, self.m_I):
            if abs(Fraction(m)) != Fraction(1, 2):
                raise DomainError(f"spin projections must be +-1/2, got {m}")
        object.__setattr__(self, "m_S", Fraction(self.m_S))
        object.__setattr__(self, "m_I", Fraction(self.m_I))

    @property
    def index(self) -> int:
        return 2 * (self.m_S < 0) + (self.m_I < 0)

    def __str__(self):
        return f"|{self.m_S},{self.m_I}>"


_HALF = Fraction(1, 2)
BASIS = (
    SpinBasisState(_HALF, _HALF),
    SpinBasisState(_HALF, -_HALF),
    SpinBasisState(-_HALF, _HALF),
    SpinBasisState(-_HALF, -_HALF),
)
UP_UP, UP_DOWN, DOWN_UP, DOWN_DOWN = BASIS

# single-ion spin operators in the ordered product basis (electron first)
_sx = np.array([[0, 1], [1, 0]], dtype=complex) / 2
_sy = np.array([[0, -1j], [1j, 0]], dtype=complex) / 2
_sz = np.array([[1, 0], [0, -1]], dtype=complex) / 2
_id2 = np.eye(2, dtype=complex)
S_X, S_Y, S_Z = (np.kron(op, _id2) for op in (_sx, _sy, _sz))
I_X, I_Y, I_Z = (np.kron(_id2, op) for op in (_sx, _sy, _sz))


class HamiltonianKind(enum.Enum):
    EXACT = "exact"
    HIGH_FIELD = "high_field"
    HIGH_FIELD_EFFECTIVE = "high_field_effective"


@dataclass(frozen=True)
class SingleIonHamiltonian:
    matrix: np.ndarray  # rad/s
    kind: HamiltonianKind
    field_B: float
    species: IonSpecies


# fit of the effective ratios, GHz/T, valid for 1 T <= B0 <= 5 T
EFFECTIVE_FIT_RANGE = (1.0, 5.0)
_FIT_DECAY = 1.5  # 1/T
_FIT_S = (28.1, 5.5)
_FIT_I = (-0.085, -5.5)


@dataclass(frozen=True)
class EffectiveRatios:
    """Effective gyromagnetic ratios in (rad/s)/T, at one offset field."""

    gamma_S_eff: float
    gamma_I_eff: float
    valid_range: tuple = EFFECTIVE_FIT_RANGE

    @property
    def gamma_S_eff_ghz(self) -> float:
        return self.gamma_S_eff / TWO_PI * 1e-9

    @property
    def gamma_I_eff_ghz(self) -> float:
        return self.gamma_I_eff / TWO_PI * 1e-9

    def check(self, B: float) -> None:
        lo, hi = self.valid_range
        if not lo <= B <= hi:
            raise RangeError(f"B = {B} T outside effective-ratio range [{lo}, {hi}] T")


def _fit_form(coeffs, B):
    c0, c1 = coeffs
    return c0 + c1 * np.exp(-_FIT_DECAY * np.asarray(B, dtype=float))


def effective_ratios(B0: float, *, valid_range=EFFECTIVE_FIT_RANGE) -> EffectiveRatios:
    """Published fit gamma' = c0 + c1 exp(-1.5 B0 / 1 T), evaluated at ``B0``.

    ``valid_range`` may be widened deliberately to extrapolate the fit.
    """
    ratios = EffectiveRatios(
        TWO_PI * 1e9 * float(_fit_form(_FIT_S, B0)),
        TWO_PI * 1e9 * float(_fit_form(_FIT_I, B0)),
        tuple(valid_range),
    )
    ratios.check(B0)
    return ratios


def _require_spin_half(species: IonSpecies) -> None:
    if species.nuclear_spin != _HALF:
        raise UnsupportedSpeciesError(
            f"{species.name}: only nuclear spin 1/2 is supported, got {species.nuclear_spin}")


def _require_positive_field(B: float) -> None:
    if not B > 0:
        raise DomainError(f"field must be positive, got {B} T")


def exact_hamiltonian(species: IonSpecies, B: float) -> SingleIonHamiltonian:
    """Omega_S S_z + Omega_I I_z + A (S_x I_x + S_y I_y + S_z I_z)."""
    _require_spin_half(species)
    _require_positive_field(B)
    w_s, w_i, a = species.gamma_S * B, species.gamma_I * B, species.hyperfine_A
    h = w_s * S_Z + w_i * I_Z + a * (S_X @ I_X + S_Y @ I_Y + S_Z @ I_Z)
    return SingleIonHamiltonian(h.real.copy(), HamiltonianKind.EXACT, B, species)


def highfield_hamiltonian(species: IonSpecies, B: float,
                          ratios="natural") -> SingleIonHamiltonian:
    """Diagonal Omega_S S_z + Omega_I I_z + A S_z I_z.

    ``ratios`` is ``"natural"`` (species constants), ``"effective"`` (the
    published fit evaluated at ``B``) or an :class:`EffectiveRatios`.
    """
    _require_spin_half(species)
    _require_positive_field(B)
    if isinstance(ratios, str):
        if ratios == "natural":
            g_s, g_i, kind = species.gamma_S, species.gamma_I, HamiltonianKind.HIGH_FIELD
        elif ratios == "effective":
            r = effective_ratios(B)
            g_s, g_i, kind = r.gamma_S_eff, r.gamma_I_eff, HamiltonianKind.HIGH_FIELD_EFFECTIVE
        else:
            raise DomainError(f"unknown ratios {ratios!r}")
    else:
        ratios.check(B)
        g_s, g_i, kind = ratios.gamma_S_eff, ratios.gamma_I_eff, HamiltonianKind.HIGH_FIELD_EFFECTIVE
    h = g_s * B * S_Z + g_i * B * I_Z + species.hyperfine_A * (S_Z @ I_Z)
    return SingleIonHamiltonian(h.real.copy(), kind, B, species)


@dataclass(frozen=True)
class HyperfineSpectrum:
    """Eigen-energies ``levels[k]`` belong to the eigenvector dominated by ``BASIS[k]``.

    ``eigenvectors[:, k]`` is that eigenvector in the product basis.
    """

    levels: np.ndarray
    labels: tuple
    mixing_angle_theta: float
    eigenvectors: np.ndarray

    def energy(self, state: SpinBasisState) -> float:
        return self.levels[state.index]

    def transition(self, a: SpinBasisState, b: SpinBasisState) -> float:
        """Transition angular frequency between the levels labelled ``a`` and ``b``."""
        return abs(self.energy(a) - self.energy(b))

    @property
    def leakage_probability(self) -> float:
        return math.sin(self.mixing_angle_theta) ** 2


def diagonalize(h: SingleIonHamiltonian) -> HyperfineSpectrum:
    """Closed-form eigensystem.

    Only the {|+1/2,-1/2>, |-1/2,+1/2>} block is coupled. Its upper eigenvector
    is cos(theta)|+1/2,-1/2> + sin(theta)|-1/2,+1/2> with
    tan(2 theta) = 2 h12 / (h11 - h22).
    """
    m = np.asarray(h.matrix, dtype=float)
    if not np.allclose(m, m.T, rtol=0, atol=1e-12 * np.max(np.abs(m))):
        raise NumericalError("Hamiltonian is not symmetric")
    d1, d2, off = m[1, 1], m[2, 2], m[1, 2]
    theta = 0.5 * math.atan2(2 * off, d1 - d2)
    mean, half = 0.5 * (d1 + d2), 0.5 * math.hypot(d1 - d2, 2 * off)
    c, s = math.cos(theta), math.sin(theta)
    vecs = np.eye(4)
    vecs[1, 1], vecs[2, 1] = c, s
    vecs[1, 2], vecs[2, 2] = -s, c
    levels = np.array([m[0, 0], mean + half, mean - half, m[3, 3]])
    if d1 < d2:
        # upper eigenvector is dominated by |-1/2,+1/2>; keep labels by dominance
        levels[1], levels[2] = levels[2], levels[1]
    return HyperfineSpectrum(levels, BASIS, theta, vecs)


def breit_rabi_levels(species: IonSpecies, B: float) -> np.ndarray:
    """Exact eigen-energies from the textbook closed form, ordered like BASIS."""
    w_s, w_i, a = species.gamma_S * B, species.gamma_I * B, species.hyperfine_A
    root = 0.5 * math.hypot(w_s - w_i, a)
    return np.array([0.5 * (w_s + w_i) + a / 4, -a / 4 + root,
                     -a / 4 - root, -0.5 * (w_s + w_i) + a / 4])


def matched_larmor_frequencies(species: IonSpecies, B: float) -> tuple:
    """Effective (Omega_S', Omega_I') in rad/s reproducing the exact splittings.

    Every single-spin-flip splitting of the diagonal high-field model
    (Omega_I' +- A/2 for nuclear flips, Omega_S' +- A/2 for electron flips) is
    set equal to the corresponding splitting between dominant-label levels of
    the exact spectrum.  The four conditions are consistent and are solved
    here by averaging the pairs.
    """
    spec = diagonalize(exact_hamiltonian(species, B))
    e = spec.levels
    a = species.hyperfine_A
    nuc = 0.5 * ((e[0] - e[1] - a / 2) + (e[2] - e[3] + a / 2))
    ele = 0.5 * ((e[0] - e[2] - a / 2) + (e[1] - e[3] + a / 2))
    return ele, nuc


@dataclass(frozen=True)
class RatioFit:
    """Least-squares fit gamma'(B) = c0 + c1 exp(-1.5 B / 1 T), (rad/s)/T."""

    coeffs_S: tuple
    coeffs_I: tuple
    grid: np.ndarray
    max_residual_S: float
    max_residual_I: float
    published_residual_S: float
    published_residual_I: float

    def ratios(self, B: float) -> EffectiveRatios:
        return EffectiveRatios(float(_fit_form(self.coeffs_S, B)),
                               float(_fit_form(self.coeffs_I, B)),
                               (float(self.grid.min()), float(self.grid.max())))

    @property
    def coeffs_S_ghz(self) -> tuple:
        return tuple(c / TWO_PI * 1e-9 for c in self.coeffs_S)

    @property
    def coeffs_I_ghz(self) -> tuple:
        return tuple(c / TWO_PI * 1e-9 for c in self.coeffs_I)


def refit_effective_ratios(species: IonSpecies, B_grid) -> RatioFit:
    """Refit the effective-ratio form to exact-spectrum splittings on ``B_grid``.

    Residuals are in (rad/s)/T. The published fit is evaluated on the same
    targets for comparison only.
    """
    grid = np.asarray(sorted(B_grid), dtype=float)
    if grid.size < 5:
        raise DomainError("need at least 5 grid points")
    if grid.min() <= 0.5 or grid.max() >= 10:
        raise RangeError("grid must lie inside (0.5, 10) T")
    targets = np.array([matched_larmor_frequencies(species, B) for B in grid]) / grid[:, None]
    design = np.column_stack([np.ones_like(grid), np.exp(-_FIT_DECAY * grid)])
    if np.linalg.matrix_rank(design) < 2:
        raise NumericalError("singular fit design matrix")
    coeffs, *_ = np.linalg.lstsq(design, targets, rcond=None)
    resid = design @ coeffs - targets
    scale = TWO_PI * 1e9
    published = np.column_stack([_fit_form(_FIT_S, grid), _fit_form(_FIT_I, grid)]) * scale
    pub_resid = published - targets
    return RatioFit(
        coeffs_S=tuple(coeffs[:, 0]),
        coeffs_I=tuple(coeffs[:, 1]),
        grid=grid,
        max_residual_S=float(np.max(np.abs(resid[:, 0]))),
        max_residual_I=float(np.max(np.abs(resid[:, 1]))),
        published_residual_S=float(np.max(np.abs(pub_resid[:, 0]))),
        published_residual_I=float(np.max(np.abs(pub_resid[:, 1]))),
    )
