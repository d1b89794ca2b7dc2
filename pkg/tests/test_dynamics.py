import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from ionspin import (DOWN_DOWN, DOWN_UP, UP_DOWN, UP_UP, DomainError, DrivenHamiltonian, Drive,
                     IonSpecies, NumericalError, PulseSpec, RegimeError, cnot_fidelity_point,
                     cnot_IS_pulse, cnot_SI_pulse, diagonalize, evolve, exact_hamiltonian,
                     propagator, swap_sequence, two_qubit_conditional_phase)
from ionspin.dynamics import (basis_state, embed, ideal_pulse_unitary, run_sequence,
                              single_ion_hamiltonian)
from ionspin.hyperfine import I_X, S_X, S_Z

GHZ = 2 * math.pi * 1e9
MHZ = 2 * math.pi * 1e6


def _unitarity_error(U):
    return np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))


def _rotating(psi, static, t):
    """Remove the free evolution of a diagonal static Hamiltonian."""
    return np.exp(1j * np.diag(static) * t) * psi


def test_zero_drive_gives_diagonal_phases(yb):
    h = single_ion_hamiltonian(yb, 2.0, "natural").matrix
    psi0 = np.array([0.5, 0.5j, -0.5, 0.5])
    t = 3.7e-7
    psi = evolve(psi0, DrivenHamiltonian(h), t)
    assert psi == pytest.approx(np.exp(-1j * np.diag(h) * t) * psi0, abs=1e-12)


def test_resonant_pi_pulse_two_level():
    w, rabi = 2 * math.pi * 100e6, 2 * math.pi * 1e6
    static = np.diag([w / 2, -w / 2])
    sx = np.array([[0, 0.5], [0.5, 0]])
    psi = evolve(np.array([0, 1], complex), DrivenHamiltonian(static, Drive(sx, w, rabi)),
                 math.pi / rabi, rwa=True)
    assert abs(psi[0]) ** 2 > 1 - 1e-6


def test_against_direct_integration():
    """Lab-frame Schroedinger integration of a scaled-down four-level ion."""
    toy = IonSpecies("toy", 1.0, 2 * math.pi * 200e6, -2 * math.pi * 5e6, 2 * math.pi * 40e6)
    static = exact_hamiltonian(toy, 1.0).matrix
    spec = diagonalize(exact_hamiltonian(toy, 1.0))
    carrier, rabi, phase = spec.transition(UP_UP, UP_DOWN), 2 * math.pi * 3e6, 0.4
    drive = Drive(I_X, carrier, rabi, phase)
    T, t0 = 2.5e-7, 1.3e-8
    psi0 = np.array([0.8, 0, 0.6j, 0], complex)

    def rhs(t, y):
        h = static + 2 * rabi * math.cos(carrier * t + phase) * I_X
        return -1j * (h @ y)

    ref = solve_ivp(rhs, (t0, t0 + T), psi0, method="DOP853", rtol=1e-12, atol=1e-12).y[:, -1]
    got = evolve(psi0, DrivenHamiltonian(static, drive), T, t0=t0)
    assert got == pytest.approx(ref, abs=1e-7)


def test_step_doubling_convergence(yb):
    p = cnot_SI_pulse(yb, 1.0, "exact")
    h = DrivenHamiltonian(exact_hamiltonian(yb, 1.0).matrix, p.drive())
    psi0 = basis_state(UP_UP)
    coarse = evolve(psi0, h, p.duration)
    fine = evolve(psi0, h, p.duration, tol=1e-10)
    assert np.max(np.abs(coarse - fine)) < 1e-8
    assert np.linalg.norm(coarse) == pytest.approx(1, abs=1e-9)


def test_step_budget_exhaustion(yb):
    p = cnot_SI_pulse(yb, 1.0, "exact")
    h = DrivenHamiltonian(exact_hamiltonian(yb, 1.0).matrix, p.drive())
    with pytest.raises(NumericalError):
        evolve(basis_state(UP_UP), h, p.duration, max_steps=64)


def test_pulse_spec_invariants():
    p = PulseSpec(1.0, 2.0, math.pi / 2, 0.0, (UP_UP, UP_DOWN))
    assert p.is_pi_pulse and not p.flips_electron
    assert not PulseSpec(1.0, 2.0, 1.0, 0.0, (UP_UP, DOWN_UP)).is_pi_pulse
    with pytest.raises(DomainError):
        PulseSpec(1.0, 0.0, 1.0, 0.0, (UP_UP, UP_DOWN))
    with pytest.raises(DomainError):
        PulseSpec(1.0, 1.0, -1.0, 0.0, (UP_UP, UP_DOWN))


def test_cnot_carriers(yb):
    assert cnot_SI_pulse(yb, 1.0, "natural").carrier / GHZ == pytest.approx(6.31, abs=0.01)
    assert cnot_SI_pulse(yb, 1.0, "exact").carrier / GHZ == pytest.approx(4.95, abs=0.01)
    assert cnot_IS_pulse(yb, 1.0, "natural").carrier / GHZ == pytest.approx(28 + 6.3225, abs=1e-9)
    p = cnot_IS_pulse(yb, 1.0)
    assert p.flips_electron and p.is_pi_pulse
    assert p.rabi_rate == pytest.approx(yb.hyperfine_A / 2000)
    assert p.rabi_rate * p.duration == pytest.approx(math.pi, rel=1e-12)


@pytest.mark.parametrize("model", ["natural", "effective", "exact"])
def test_si_carrier_differs_from_lower_manifold(yb, model):
    spec = diagonalize(single_ion_hamiltonian(yb, 1.0, model))
    other = spec.transition(DOWN_UP, DOWN_DOWN)
    assert abs(cnot_SI_pulse(yb, 1.0, model).carrier - other) > 2 * yb.hyperfine_A / 2000


def test_regime_error(yb):
    for maker in (cnot_SI_pulse, cnot_IS_pulse):
        with pytest.raises(RegimeError):
            maker(yb, 0.4, "natural")


def _is_leakage(yb, B):
    p = cnot_IS_pulse(yb, B, "exact")
    psi = evolve(basis_state(UP_UP), DrivenHamiltonian(exact_hamiltonian(yb, B).matrix, p.drive()),
                 p.duration)
    return abs(psi[UP_DOWN.index]) ** 2 + abs(psi[DOWN_DOWN.index]) ** 2


def test_is_leakage_falls_with_field(yb):
    assert _is_leakage(yb, 1.0) > _is_leakage(yb, 3.0)


@pytest.mark.parametrize("model, maker", [("exact", cnot_SI_pulse), ("exact", cnot_IS_pulse),
                                          ("effective", cnot_SI_pulse), ("natural", cnot_IS_pulse)])
def test_propagators_unitary(yb, model, maker):
    p = maker(yb, 1.0, model)
    U = propagator(DrivenHamiltonian(single_ion_hamiltonian(yb, 1.0, model).matrix, p.drive()),
                   p.duration)
    assert _unitarity_error(U) < 1e-8


def test_two_ion_propagator_unitary(yb):
    h1 = single_ion_hamiltonian(yb, 1.0, "effective").matrix
    static = embed(h1, 0, 2) + embed(h1, 1, 2) - 0.5 * 2 * math.pi * 5e3 * embed(S_Z, 0, 2) @ embed(S_Z, 1, 2)
    p = cnot_SI_pulse(yb, 1.0)
    drive = Drive(embed(I_X, 1, 2), p.carrier, p.rabi_rate)
    U = propagator(DrivenHamiltonian(static, drive), p.duration)
    assert _unitarity_error(U) < 1e-8
    with pytest.raises(DomainError):
        embed(h1, 0, 5)


def test_selectivity_nuclear_flip(yb):
    """SI pulse acting on the m_S = -1/2 manifold stays within the off-resonant Rabi bound."""
    static = single_ion_hamiltonian(yb, 1.0, "effective").matrix
    spec = diagonalize(single_ion_hamiltonian(yb, 1.0, "effective"))
    p = cnot_SI_pulse(yb, 1.0)
    delta = abs(p.carrier - spec.transition(DOWN_UP, DOWN_DOWN))
    psi = evolve(basis_state(DOWN_UP), DrivenHamiltonian(static, p.drive()), p.duration)
    assert 1 - abs(psi[DOWN_UP.index]) ** 2 <= 4 * (p.rabi_rate / delta) ** 2


def test_selectivity_electron_flip(yb):
    static = single_ion_hamiltonian(yb, 1.0, "effective").matrix
    p = cnot_IS_pulse(yb, 1.0)
    psi = evolve(basis_state(UP_DOWN), DrivenHamiltonian(static, p.drive()), p.duration)
    assert 1 - abs(psi[UP_DOWN.index]) ** 2 <= 4 * (p.rabi_rate / yb.hyperfine_A) ** 2


def test_fidelity_invariant_under_global_shift(yb):
    B, shift = 1.0, 2 * math.pi * 3.3e9
    approx = single_ion_hamiltonian(yb, B, "effective").matrix
    exact = exact_hamiltonian(yb, B).matrix
    p = cnot_SI_pulse(yb, B)
    p_ex = cnot_SI_pulse(yb, B, "exact")
    psi0 = basis_state(UP_UP)

    def overlap(c):
        eye = c * np.eye(4)
        a = evolve(psi0, DrivenHamiltonian(approx + eye, p.drive()), p.duration)
        b = evolve(psi0, DrivenHamiltonian(exact + eye, p_ex.drive()), p_ex.duration)
        return abs(np.vdot(a, b)) ** 2

    assert overlap(shift) == pytest.approx(overlap(0.0), abs=1e-8)
    assert overlap(0.0) == pytest.approx(cnot_fidelity_point(yb, B).C, abs=1e-8)


def test_fidelity_point_matches_mixing(yb):
    pt = cnot_fidelity_point(yb, 1.0)
    s2 = diagonalize(exact_hamiltonian(yb, 1.0)).leakage_probability
    assert 1 - pt.C == pytest.approx(s2, abs=0.01)
    assert pt.leakage == pytest.approx(s2, abs=0.005)
    assert pt.B_over_A == pytest.approx(1 / 12.645)


def _swap(yb, order, psi0):
    rate = yb.hyperfine_A / 20000
    pulses = swap_sequence(yb, 1.0, "effective", order, rabi_rate=rate)
    static = single_ion_hamiltonian(yb, 1.0, "effective").matrix
    psi, t = run_sequence(psi0, static, pulses, rwa=True)
    ideal = psi0
    for p in pulses:
        ideal = ideal_pulse_unitary(p) @ ideal
    return _rotating(psi, static, t), ideal, pulses


ALPHA, BETA = 0.6, 0.8j


@pytest.mark.parametrize("order", ["IS", "SI"])
def test_swap_transfers_electron_state_to_nucleus(yb, order):
    psi0 = ALPHA * basis_state(UP_UP) + BETA * basis_state(DOWN_UP)
    psi, ideal, pulses = _swap(yb, order, psi0)
    assert [p.flips_electron for p in pulses] == ([True, False, True] if order == "IS" else [False, True, False])
    assert abs(np.vdot(ideal, psi)) ** 2 >= 1 - 1e-6
    # electron ends polarised, nucleus holds (alpha, beta) up to known signs
    assert abs(ideal[UP_UP.index]) == pytest.approx(abs(ALPHA)) and abs(ideal[UP_DOWN.index]) == pytest.approx(abs(BETA))
    assert abs(ideal[DOWN_UP.index]) < 1e-12 and abs(ideal[DOWN_DOWN.index]) < 1e-12


def test_swap_orders_agree(yb):
    seq = {o: swap_sequence(yb, 1.0, "effective", o) for o in ("IS", "SI")}
    maps = {o: np.linalg.multi_dot([ideal_pulse_unitary(p) for p in reversed(ps)]) for o, ps in seq.items()}
    assert maps["IS"] == pytest.approx(maps["SI"], abs=1e-12)
    perm = np.abs(maps["IS"])
    assert perm == pytest.approx(np.eye(4)[[0, 2, 1, 3]], abs=1e-12)


def test_swap_is_involution(yb):
    psi0 = ALPHA * basis_state(UP_UP) + BETA * basis_state(DOWN_UP)
    pulses = swap_sequence(yb, 1.0, "effective", "IS", rabi_rate=yb.hyperfine_A / 20000)
    static = single_ion_hamiltonian(yb, 1.0, "effective").matrix
    psi, t = run_sequence(psi0, static, pulses + pulses, rwa=True)
    assert abs(np.vdot(psi0, _rotating(psi, static, t))) ** 2 >= 1 - 1e-6


def test_conditional_phase():
    assert two_qubit_conditional_phase(1.0, 0.0) == pytest.approx(np.eye(4))
    J, t = 2 * math.pi * 1.6e3, 1e-4
    U = np.diag(two_qubit_conditional_phase(J, t))
    differential = np.angle(U[0] * U[3] / (U[1] * U[2]))
    assert differential == pytest.approx(2 * (J * t / 4), abs=1e-12)
    assert np.angle(U[0] / U[1]) == pytest.approx(J * t / 4)
    with pytest.raises(DomainError):
        two_qubit_conditional_phase(0, 1)


def test_conditional_phase_makes_cnot():
    J = 2 * math.pi * 1e3
    t = 2 * math.pi / J  # J t / 4 = pi / 2
    U = two_qubit_conditional_phase(J, t)
    H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    S = np.diag([1, 1j])
    M = np.kron(np.eye(2), H) @ np.kron(S, S) @ U @ np.kron(np.eye(2), H)
    cnot = np.eye(4)[[0, 1, 3, 2]]
    assert abs(np.trace(cnot.conj().T @ M)) / 4 == pytest.approx(1, abs=1e-12)


def test_basis_state():
    v = basis_state(UP_DOWN, DOWN_UP)
    assert v.shape == (16,) and v[1 * 4 + 2] == 1 and np.sum(np.abs(v)) == 1


def test_s_x_matrix_elements():
    assert S_X[UP_UP.index, DOWN_UP.index] == 0.5
    assert I_X[UP_UP.index, UP_DOWN.index] == 0.5
