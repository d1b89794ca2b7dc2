"""Microwave-driven spin dynamics: propagation, CNOT/SWAP pulses, fidelities.

A driven Hamiltonian is ``H(t) = H0 + 2 * rabi_rate * cos(carrier * t + phase) * V``
with ``V`` a spin operator (``I_x`` for nuclear flips, ``S_x`` for electron
flips).  For a matrix element <a|V|b> = 1/2 on resonance this produces full
Rabi oscillations at angular frequency ``rabi_rate``.

Propagation is done in the interaction picture of the (exactly diagonalised)
static part with a fourth-order Magnus integrator, so the large static
energies never limit the step size; only the drive's beat frequencies do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DomainError, NumericalError, RangeError, RegimeError
from .hyperfine import (
    DOWN_UP, I_X, S_X, UP_DOWN, UP_UP, SingleIonHamiltonian, SpinBasisState,
    diagonalize, effective_ratios,
    exact_hamiltonian, highfield_hamiltonian,
)
from .units import IonSpecies

MIN_FIELD = 0.5  # T
FIDELITY_FIELD_RANGE = (0.9, 5.0)  # T, span of the fidelity-versus-field curve
MAX_DYNAMICS_IONS = 4
DEFAULT_RABI_FRACTION = 1 / 2000  # rabi_rate = A * fraction


@dataclass(frozen=True)
class Drive:
    operator: np.ndarray
    carrier: float  # rad/s
    rabi_rate: float  # rad/s
    phase: float = 0.0


@dataclass(frozen=True)
class DrivenHamiltonian:
    static: np.ndarray
    drive: Drive | None = None


@dataclass(frozen=True)
class PulseSpec:
    carrier: float  # rad/s
    rabi_rate: float  # rad/s
    duration: float  # s
    phase: float
    target_transition: tuple  # (SpinBasisState, SpinBasisState)

    def __post_init__(self):
        if not self.rabi_rate > 0 or not self.duration > 0:
            raise DomainError("rabi_rate and duration must be positive")

    @property
    def is_pi_pulse(self) -> bool:
        return abs(self.rabi_rate * self.duration - math.pi) < 1e-9 * math.pi

    @property
    def flips_electron(self) -> bool:
        a, b = self.target_transition
        return a.m_S != b.m_S

    @property
    def operator(self) -> np.ndarray:
        return S_X if self.flips_electron else I_X

    def drive(self, operator=None) -> Drive:
        return Drive(self.operator if operator is None else operator,
                     self.carrier, self.rabi_rate, self.phase)


# --------------------------------------------------------------------------
# propagation

def _magnus_nodes(n_steps, duration):
    h = duration / n_steps
    starts = np.arange(n_steps) * h
    off = math.sqrt(3) / 6
    return h, starts + h * (0.5 - off), starts + h * (0.5 + off)


def _expm_hermitian(k):
    w, v = np.linalg.eigh(k)
    return (v * np.exp(-1j * w)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def _chain_product(us):
    """Ordered product us[-1] @ ... @ us[0] by pairwise reduction."""
    while us.shape[0] > 1:
        if us.shape[0] % 2:
            tail = us[-1:]
            us = us[:-1]
        else:
            tail = None
        us = us[1::2] @ us[0::2]
        if tail is not None:
            us = np.concatenate([us, tail])
    return us[0]


class _InteractionDrive:
    """Drive in the interaction picture of the static part, in its eigenbasis."""

    def __init__(self, static, drive, t0, rwa):
        self.energies, self.basis = np.linalg.eigh(static)
        self.drive = drive
        if drive is None:
            self.terms = []
            return
        v = np.conj(self.basis.T) @ drive.operator @ self.basis
        v[np.abs(v) < 1e-14 * max(1.0, np.max(np.abs(v)))] = 0
        delta = self.energies[:, None] - self.energies[None, :]
        phase = drive.phase + drive.carrier * t0
        amp = drive.rabi_rate * v
        up = (delta + drive.carrier, amp * np.exp(1j * phase))
        down = (delta - drive.carrier, amp * np.exp(-1j * phase))
        if rwa:
            keep_up = np.abs(up[0]) < np.abs(down[0])
            up = (up[0], np.where(keep_up, up[1], 0))
            down = (down[0], np.where(keep_up, 0, down[1]))
        self.terms = [t for t in (up, down) if np.any(t[1] != 0)]

    @property
    def max_frequency(self) -> float:
        freqs = [np.max(np.abs(f[a != 0])) for f, a in self.terms]
        return max(freqs, default=0.0)

    def __call__(self, tau):
        tau = np.asarray(tau)[:, None, None]
        return sum(a * np.exp(1j * f * tau) for f, a in self.terms)

    def step_unitaries(self, n_steps, duration, chunk):
        h, t1, t2 = _magnus_nodes(n_steps, duration)
        c = math.sqrt(3) / 12 * h * h
        for lo in range(0, n_steps, chunk):
            h1, h2 = self(t1[lo:lo + chunk]), self(t2[lo:lo + chunk])
            k = 0.5 * h * (h1 + h2) - 1j * c * (h2 @ h1 - h1 @ h2)
            yield _expm_hermitian(k)


def _propagate(idrive, coeffs, duration, n_steps):
    dim = coeffs.shape[0]
    chunk = max(1, int(2e6 // (dim * dim)))
    for us in idrive.step_unitaries(n_steps, duration, chunk):
        coeffs = _chain_product(us) @ coeffs
    return coeffs


def evolve(state, hamiltonian: DrivenHamiltonian, duration: float, *, t0: float = 0.0,
           rwa: bool = False, tol: float = 1e-8, points_per_period: int = 12,
           max_steps: int = 2**21) -> np.ndarray:
    """Propagate ``state`` (vector, or matrix of column states) from ``t0`` to ``t0 + duration``.

    The step count is doubled until two successive results differ by less
    than ``tol`` in max-norm. With ``rwa=True`` every drive matrix element keeps
    only its co-rotating component.
    """
    psi = np.asarray(state, dtype=complex)
    if duration < 0:
        raise DomainError("duration must be non-negative")
    idrive = _InteractionDrive(np.asarray(hamiltonian.static), hamiltonian.drive, t0, rwa)
    W, E = idrive.basis, idrive.energies
    c0 = np.conj(W.T) @ psi
    if duration == 0 or not idrive.terms:
        c = c0
    else:
        periods = duration * idrive.max_frequency / (2 * math.pi)
        n = max(8, int(math.ceil(periods * points_per_period)))
        c = _propagate(idrive, c0, duration, n)
        while True:
            if 2 * n > max_steps:
                raise NumericalError(
                    f"propagation did not reach tol={tol} within {max_steps} steps")
            n *= 2
            finer = _propagate(idrive, c0, duration, n)
            err = np.max(np.abs(finer - c))
            c = finer
            if err < tol:
                break
    phases = np.exp(-1j * E * duration)
    return W @ (phases[:, None] * c if c.ndim == 2 else phases * c)


def propagator(hamiltonian: DrivenHamiltonian, duration: float, **kwargs) -> np.ndarray:
    dim = np.asarray(hamiltonian.static).shape[0]
    return evolve(np.eye(dim, dtype=complex), hamiltonian, duration, **kwargs)


def basis_state(*states: SpinBasisState) -> np.ndarray:
    """Product-basis vector for one :class:`SpinBasisState` per ion."""
    vec = np.ones(1, dtype=complex)
    for s in states:
        e = np.zeros(4, dtype=complex)
        e[s.index] = 1
        vec = np.kron(vec, e)
    return vec


def embed(op: np.ndarray, ion: int, n_ions: int) -> np.ndarray:
    """Single-ion 4x4 operator acting on ion ``ion`` (0-based) of an n-ion register."""
    if n_ions > MAX_DYNAMICS_IONS:
        raise DomainError(f"dynamics limited to {MAX_DYNAMICS_IONS} ions")
    mats = [np.eye(4)] * n_ions
    mats[ion] = op
    return reduce(np.kron, mats)


# --------------------------------------------------------------------------
# single-ion gates

def single_ion_hamiltonian(species: IonSpecies, B: float, model="effective") -> SingleIonHamiltonian:
    """``model`` is "exact", "natural", "effective" or an :class:`EffectiveRatios`."""
    if isinstance(model, str) and model == "exact":
        return exact_hamiltonian(species, B)
    return highfield_hamiltonian(species, B, model)


def _pulse(species, B, model, transition, rabi_rate, phase):
    if B < MIN_FIELD:
        raise RegimeError(f"B = {B} T is below the {MIN_FIELD} T strong-field limit")
    spec = diagonalize(single_ion_hamiltonian(species, B, model))
    if rabi_rate is None:
        rabi_rate = abs(species.hyperfine_A) * DEFAULT_RABI_FRACTION
    return PulseSpec(spec.transition(*transition), rabi_rate, math.pi / rabi_rate,
                     phase, transition)


def cnot_SI_pulse(species: IonSpecies, B: float, ratios="effective", *,
                  rabi_rate=None, phase=0.0) -> PulseSpec:
    """Nuclear flip |+1/2,+1/2> <-> |+1/2,-1/2>, i.e. conditioned on m_S = +1/2."""
    return _pulse(species, B, ratios, (UP_UP, UP_DOWN), rabi_rate, phase)


def cnot_IS_pulse(species: IonSpecies, B: float, ratios="effective", *,
                  rabi_rate=None, phase=0.0) -> PulseSpec:
    """Electron flip |+1/2,+1/2> <-> |-1/2,+1/2>, i.e. conditioned on m_I = +1/2."""
    return _pulse(species, B, ratios, (UP_UP, DOWN_UP), rabi_rate, phase)


def swap_sequence(species: IonSpecies, B: float, ratios="effective", order="IS", *,
                  rabi_rate=None) -> list:
    """Three alternating CNOT pulses; ``order`` "IS" gives IS-SI-IS, "SI" gives SI-IS-SI."""
    makers = {"IS": cnot_IS_pulse, "SI": cnot_SI_pulse}
    if order not in makers:
        raise DomainError(f"order must be 'IS' or 'SI', got {order!r}")
    other = "SI" if order == "IS" else "IS"
    return [makers[k](species, B, ratios, rabi_rate=rabi_rate) for k in (order, other, order)]


def ideal_pulse_unitary(pulse: PulseSpec, dim: int = 4) -> np.ndarray:
    """Resonant rotating-wave action of ``pulse`` in the frame of a diagonal H0.

    Valid when both target levels are eigenstates and the upper level is the
    first of ``target_transition``'s pair by energy; the returned unitary acts
    as identity outside the two-level subspace.
    """
    a, b = (s.index for s in pulse.target_transition)
    angle = pulse.rabi_rate * pulse.duration / 2
    u = np.eye(dim, dtype=complex)
    u[a, a] = u[b, b] = math.cos(angle)
    u[a, b] = -1j * math.sin(angle) * np.exp(-1j * pulse.phase)
    u[b, a] = -1j * math.sin(angle) * np.exp(1j * pulse.phase)
    return u


def run_sequence(state, static: np.ndarray, pulses, *, t0: float = 0.0, **kwargs):
    """Apply pulses back to back; returns (final state, final time)."""
    psi, t = np.asarray(state, dtype=complex), t0
    for p in pulses:
        psi = evolve(psi, DrivenHamiltonian(static, p.drive()), p.duration, t0=t, **kwargs)
        t += p.duration
    return psi, t


@dataclass(frozen=True)
class FidelityPoint:
    B: float  # T
    B_over_A: float  # T per GHz of hyperfine constant
    C: float
    leakage: float  # population left in |-1/2,+1/2> after the exact evolution
    error: str | None = None


def _curve_ratios(model, B):
    if model == "effective":
        return effective_ratios(B, valid_range=FIDELITY_FIELD_RANGE)
    return model


def cnot_fidelity_point(species: IonSpecies, B: float, model="effective", *,
                        initial: SpinBasisState = UP_UP, rabi_rate=None, **kwargs) -> FidelityPoint:
    """C = |<psi|psi_exact>|^2 after one CNOT_SI pulse in each model.

    Both evolutions share the Rabi rate and duration; each is driven at the
    resonance of its own Hamiltonian. ``model`` selects the approximate
    Hamiltonian ("effective" or "natural").
    """
    ratios = _curve_ratios(model, B)
    approx = single_ion_hamiltonian(species, B, ratios)
    pulse = cnot_SI_pulse(species, B, ratios, rabi_rate=rabi_rate)
    pulse_ex = cnot_SI_pulse(species, B, "exact", rabi_rate=pulse.rabi_rate)
    psi0 = basis_state(initial)
    psi = evolve(psi0, DrivenHamiltonian(approx.matrix, pulse.drive()), pulse.duration, **kwargs)
    psi_ex = evolve(psi0, DrivenHamiltonian(exact_hamiltonian(species, B).matrix, pulse_ex.drive()),
                    pulse_ex.duration, **kwargs)
    C = abs(np.vdot(psi, psi_ex)) ** 2
    a_ghz = species.hyperfine_A / (2 * math.pi) * 1e-9
    return FidelityPoint(B, B / a_ghz, float(C), float(abs(psi_ex[DOWN_UP.index]) ** 2))


def cnot_fidelity_curve(species: IonSpecies, B_list, model="effective", **kwargs) -> list:
    """One :class:`FidelityPoint` per field; failures are reported per point."""
    out = []
    a_ghz = species.hyperfine_A / (2 * math.pi) * 1e-9
    for B in B_list:
        try:
            out.append(cnot_fidelity_point(species, float(B), model, **kwargs))
        except (RangeError, RegimeError, NumericalError) as exc:
            out.append(FidelityPoint(float(B), float(B) / a_ghz, math.nan, math.nan, str(exc)))
    return out


# --------------------------------------------------------------------------
# two-qubit conditional phase

def two_qubit_conditional_phase(J_pair: float, duration: float) -> np.ndarray:
    """exp(-i H t) for H = -1/2 J S_z S_z on two electron spins (basis uu, ud, du, dd)."""
    if not J_pair > 0:
        raise DomainError(f"coupling must be positive, got {J_pair}")
    phi = J_pair * duration / 8
    return np.diag(np.exp(1j * phi * np.array([1, -1, -1, 1])))
