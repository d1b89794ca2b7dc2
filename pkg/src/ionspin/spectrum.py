"""Electron-spin resonance spectrum of an ion chain in a field gradient.

Uses the diagonal chain Hamiltonian

    H = sum_i Omega_S'(z_i) S_z^i + Omega_I' I_z^i + A S_z^i I_z^i
        - 1/2 sum_{i<j} J_ij S_z^i S_z^j

so flipping the electron of ion i costs Omega_S'(z_i) + A m_I(i)
- 1/2 sum_j J_ij m_S(j).  Ion numbers are 1-based throughout this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .coupling import FieldConfig, j_matrix, larmor_gradient
from .crystal import MAX_IONS, crystal
from .errors import CapacityError, DomainError
from .hyperfine import effective_ratios
from .units import TWO_PI, Frequency, IonSpecies, angular

MERGE_TOLERANCE_HZ = 1e-3


@dataclass(frozen=True)
class ChainConfig:
    species: IonSpecies
    n_ions: int
    field: FieldConfig
    nu_z: Frequency
    active_set: frozenset = frozenset()
    passive_polarization: float = 0.5
    nuclear_m_I: float = 0.5
    ratios: str = "effective"  # or "natural"

    def __post_init__(self):
        if not 2 <= self.n_ions <= MAX_IONS:
            raise CapacityError(f"n_ions must be in [2, {MAX_IONS}], got {self.n_ions}")
        active = frozenset(int(i) for i in self.active_set)
        if not active <= set(range(1, self.n_ions + 1)):
            raise DomainError(f"active ions {sorted(active)} not in 1..{self.n_ions}")
        object.__setattr__(self, "active_set", active)
        for name in ("passive_polarization", "nuclear_m_I"):
            if abs(getattr(self, name)) != 0.5:
                raise DomainError(f"{name} must be +-1/2")
        if not isinstance(self.nu_z, Frequency):
            object.__setattr__(self, "nu_z", Frequency(angular(self.nu_z)))


@dataclass(frozen=True)
class SpectralLine:
    ion_index: int
    frequency: float  # rad/s
    conditioning: dict  # other ion -> m_S, for the representative configuration
    weight: int
    bitmasks: tuple = field(default=(), compare=False)

    @property
    def frequency_hz(self) -> float:
        return self.frequency / TWO_PI


@dataclass(frozen=True)
class ChainModel:
    """Position-dependent single-ion frequencies and couplings of a chain."""

    positions: np.ndarray  # m
    electron: np.ndarray  # Omega_S'(z_i), rad/s
    nuclear: np.ndarray  # Omega_I'(z_i), rad/s
    hyperfine_A: float
    J: np.ndarray  # rad/s, spin-1/2 convention

    def energy(self, m_S, m_I) -> float:
        m_S, m_I = np.asarray(m_S, float), np.asarray(m_I, float)
        coupling = 0.5 * m_S @ np.triu(self.J, 1) @ m_S
        return float(self.electron @ m_S + self.nuclear @ m_I
                     + self.hyperfine_A * (m_S @ m_I) - coupling)


def chain_model(config: ChainConfig) -> ChainModel:
    """Offset part from the chosen ratios at B0; gradient part gamma_S b z_i."""
    sp, fld = config.species, config.field
    if config.field.gradient_b > 0:
        cm = j_matrix(sp, config.nu_z, fld.gradient_b, config.n_ions, fld.B0)
        z, J = cm.positions, cm.J
    else:
        z = crystal(sp, config.nu_z, config.n_ions).positions
        J = np.zeros((config.n_ions, config.n_ions))
    if config.ratios == "effective":
        r = effective_ratios(fld.B0)
        g_s, g_i = r.gamma_S_eff, r.gamma_I_eff
    elif config.ratios == "natural":
        g_s, g_i = sp.gamma_S, sp.gamma_I
    else:
        raise DomainError(f"unknown ratios {config.ratios!r}")
    electron = g_s * fld.B0 + larmor_gradient(sp, fld.gradient_b) * z
    nuclear = g_i * fld.B0 + sp.gamma_I * fld.gradient_b * z
    return ChainModel(z, electron, nuclear, sp.hyperfine_A, J)


def chain_diagonal(config: ChainConfig) -> np.ndarray:
    """Diagonal of the chain Hamiltonian over the 4^N product basis (rad/s)."""
    model = chain_model(config)
    n = config.n_ions
    if n > 6:
        raise CapacityError("full Hilbert-space diagonal limited to 6 ions")
    states = list(itertools.product((0.5, -0.5), repeat=2 * n))
    out = np.empty(len(states))
    for k, s in enumerate(states):
        s = np.array(s)
        out[k] = model.energy(s[0::2], s[1::2])
    return out


LINE_DTYPE = np.dtype([("ion", "i4"), ("frequency", "f8"), ("weight", "i8"), ("bitmask", "i8")])


def _ion_lines(config, model, ion, fixed):
    """Unmerged (frequencies, bitmasks) of ``ion``; ``fixed`` pins some other ions' m_S."""
    n, i0 = config.n_ions, ion - 1
    others = [j for j in range(1, n + 1) if j != ion]
    free = [j for j in others if j not in fixed]
    k = len(free)
    idx = np.arange(2**k, dtype=np.int64)
    m = np.empty((idx.size, n))
    m[:, i0] = 0.0
    for j, val in fixed.items():
        m[:, j - 1] = val
    for pos, j in enumerate(free):
        # first free ion varies slowest, +1/2 before -1/2
        m[:, j - 1] = 0.5 - ((idx >> (k - 1 - pos)) & 1)
    base = model.electron[i0] + model.hyperfine_A * config.nuclear_m_I
    freqs = base - 0.5 * (m @ model.J[i0])
    weights = np.array([1 << (j - 1) if j != ion else 0 for j in range(1, n + 1)], dtype=np.int64)
    masks = (m > 0).astype(np.int64) @ weights
    return freqs, masks


def _groups(freqs, masks, merge):
    order = np.lexsort((masks, freqs))
    f, mk = freqs[order], masks[order]
    if merge and f.size > 1:
        starts = np.flatnonzero(np.r_[True, np.diff(f) > TWO_PI * MERGE_TOLERANCE_HZ])
    else:
        starts = np.arange(f.size)
    return f, mk, starts


def _table(config, ions, fixed, merge):
    model = chain_model(config)
    parts = []
    for ion in ions:
        f, mk, starts = _groups(*_ion_lines(config, model, ion, fixed), merge)
        part = np.empty(starts.size, dtype=LINE_DTYPE)
        part["ion"] = ion
        part["frequency"] = f[starts]
        part["weight"] = np.diff(np.r_[starts, f.size])
        part["bitmask"] = mk[starts]
        parts.append(part)
    table = np.concatenate(parts)
    return table[np.lexsort((table["ion"], table["frequency"]))]


def _passive(config):
    if not config.active_set:
        raise DomainError("active set is empty")
    return {j: config.passive_polarization
            for j in range(1, config.n_ions + 1) if j not in config.active_set}


def spectrum_table(config: ChainConfig, *, active_only: bool = False,
                   merge: bool = True) -> np.ndarray:
    """Line list as a structured array with fields ion, frequency (rad/s), weight, bitmask.

    Vectorised counterpart of :func:`full_spectrum` / :func:`active_spectrum`
    for long chains; merged lines carry the bitmask of their lowest member.
    """
    if active_only:
        return _table(config, sorted(config.active_set), _passive(config), merge)
    return _table(config, range(1, config.n_ions + 1), {}, merge)


def _line_objects(config, ions, fixed, merge):
    model = chain_model(config)
    lines = []
    for ion in ions:
        f, mk, starts = _groups(*_ion_lines(config, model, ion, fixed), merge)
        bounds = np.r_[starts, f.size]
        for a, b in zip(bounds[:-1], bounds[1:]):
            rep = int(mk[a])
            cond = {j: (0.5 if rep >> (j - 1) & 1 else -0.5)
                    for j in range(1, config.n_ions + 1) if j != ion}
            lines.append(SpectralLine(ion, float(f[a]), cond, int(b - a),
                                      tuple(int(x) for x in mk[a:b])))
    return sorted(lines, key=lambda l: (l.frequency, l.ion_index))


def full_spectrum(config: ChainConfig, *, merge: bool = True) -> list:
    """Every electron-flip line of every ion, over all configurations of the others."""
    return _line_objects(config, range(1, config.n_ions + 1), {}, merge)


def active_spectrum(config: ChainConfig, *, merge: bool = True) -> list:
    """Lines of the active ions with all passive electrons fixed at ``passive_polarization``."""
    return _line_objects(config, sorted(config.active_set), _passive(config), merge)


def group_centres(config: ChainConfig) -> np.ndarray:
    """Centre of each ion's line group (the J-free resonance), rad/s."""
    model = chain_model(config)
    return model.electron + model.hyperfine_A * config.nuclear_m_I


def addressing_separation(config: ChainConfig) -> float:
    """Smallest gradient splitting between neighbouring ions' line groups, rad/s."""
    model = chain_model(config)
    grad = larmor_gradient(config.species, config.field.gradient_b)
    return float(np.min(grad * np.diff(model.positions)))


def is_addressable(config: ChainConfig, resolution_bandwidth: float) -> bool:
    return addressing_separation(config) > resolution_bandwidth
