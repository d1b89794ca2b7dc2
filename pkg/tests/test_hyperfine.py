import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ionspin import (BASIS, DOWN_DOWN, DOWN_UP, UP_DOWN, UP_UP, DomainError, EffectiveRatios,
                     HamiltonianKind, RangeError, UnsupportedSpeciesError, breit_rabi_levels,
                     diagonalize, effective_ratios, exact_hamiltonian, highfield_hamiltonian,
                     matched_larmor_frequencies, refit_effective_ratios)
from ionspin.hyperfine import SpinBasisState

GHZ = 2 * math.pi * 1e9


def test_basis_order():
    assert [s.index for s in BASIS] == [0, 1, 2, 3]
    assert (UP_DOWN.m_S, UP_DOWN.m_I) == (0.5, -0.5)
    with pytest.raises(DomainError):
        SpinBasisState(1, 0.5)


def test_exact_matrix_structure(yb):
    h = exact_hamiltonian(yb, 1.0)
    m = h.matrix / GHZ
    assert h.kind is HamiltonianKind.EXACT
    assert m[0, 0] == pytest.approx((28 - 0.0075) / 2 + 12.645 / 4)
    assert m[0, 0] == pytest.approx(17.157, abs=1e-3)
    assert m[1, 2] == m[2, 1] == pytest.approx(12.645 / 2)
    off = m - np.diag(np.diag(m))
    off[1, 2] = off[2, 1] = 0
    assert np.all(off == 0)
    assert np.trace(m) == pytest.approx(0, abs=1e-12)


@given(st.floats(0.1, 10))
def test_exact_matches_breit_rabi(yb, B):
    spec = diagonalize(exact_hamiltonian(yb, B))
    ref = breit_rabi_levels(yb, B)
    assert spec.levels == pytest.approx(ref, rel=1e-10)
    # generic eigensolver as a second oracle
    assert np.sort(spec.levels) == pytest.approx(np.linalg.eigvalsh(exact_hamiltonian(yb, B).matrix), rel=1e-10)


@given(st.floats(0.1, 10))
def test_spectrum_invariants(yb, B):
    h = exact_hamiltonian(yb, B)
    spec = diagonalize(h)
    theta = spec.mixing_angle_theta
    assert 0 < theta < math.pi / 4
    assert math.tan(2 * theta) == pytest.approx(yb.hyperfine_A / ((yb.gamma_S - yb.gamma_I) * B), rel=1e-10)
    V = spec.eigenvectors
    assert np.max(np.abs(V.T @ V - np.eye(4))) < 1e-12
    assert np.sum(spec.levels) == pytest.approx(np.trace(h.matrix), abs=1e-6 * yb.hyperfine_A)
    assert V.T @ h.matrix @ V == pytest.approx(np.diag(spec.levels), abs=1e-6 * yb.hyperfine_A)


def test_zero_field_limit(yb):
    spec = diagonalize(exact_hamiltonian(yb, 1e-9))
    a = yb.hyperfine_A
    assert np.sort(spec.levels) == pytest.approx([-3 * a / 4, a / 4, a / 4, a / 4], abs=1e-4 * a)


def test_mixing_amplitudes_at_one_tesla(yb):
    spec = diagonalize(exact_hamiltonian(yb, 1.0))
    assert math.cos(spec.mixing_angle_theta) == pytest.approx(0.9776, abs=5e-4)
    assert math.sin(spec.mixing_angle_theta) == pytest.approx(0.2103, abs=5e-4)
    assert spec.leakage_probability == pytest.approx(0.044, abs=5e-3)


def test_transitions_at_one_tesla(yb):
    exact = diagonalize(exact_hamiltonian(yb, 1.0))
    natural = diagonalize(highfield_hamiltonian(yb, 1.0, "natural"))
    eff = diagonalize(highfield_hamiltonian(yb, 1.0, "effective"))
    assert exact.transition(UP_UP, UP_DOWN) / GHZ == pytest.approx(4.95, abs=0.01)
    assert natural.transition(UP_UP, UP_DOWN) / GHZ == pytest.approx(6.31, abs=0.01)
    expected = -(0.085 + 5.5 * math.exp(-1.5)) + 12.645 / 2
    assert eff.transition(UP_UP, UP_DOWN) / GHZ == pytest.approx(expected, rel=1e-12)
    assert eff.transition(UP_UP, UP_DOWN) / GHZ == pytest.approx(5.01, abs=0.01)


def test_large_field_limit(yb):
    spec = diagonalize(exact_hamiltonian(yb, 1e4))
    assert spec.mixing_angle_theta < 1e-4
    hf = np.diag(highfield_hamiltonian(yb, 1e4).matrix)
    assert spec.levels == pytest.approx(hf, rel=1e-6)


@given(st.floats(0.1, 10))
def test_exact_and_highfield_share_diagonal(yb, B):
    assert np.diag(exact_hamiltonian(yb, B).matrix) == pytest.approx(
        np.diag(highfield_hamiltonian(yb, B).matrix), rel=1e-14)


@given(st.floats(1, 5))
def test_highfield_is_diagonal(yb, B):
    for ratios in ("natural", "effective"):
        m = highfield_hamiltonian(yb, B, ratios).matrix
        assert np.all(m == np.diag(np.diag(m)))


@given(st.floats(0.1, 9.9), st.floats(0.01, 1))
def test_leakage_decreases_with_field(yb, B, dB):
    lo = diagonalize(exact_hamiltonian(yb, B)).leakage_probability
    hi = diagonalize(exact_hamiltonian(yb, B + dB)).leakage_probability
    assert hi < lo


def test_effective_ratio_values():
    r = effective_ratios(1.0)
    assert r.gamma_S_eff_ghz == pytest.approx(29.327, abs=1e-3)
    assert r.gamma_I_eff_ghz == pytest.approx(-1.312, abs=1e-3)
    assert effective_ratios(5.0).gamma_S_eff_ghz == pytest.approx(28.1, abs=0.01)
    big = effective_ratios(40.0, valid_range=(1, 50))
    assert big.gamma_S_eff_ghz == pytest.approx(28.1, abs=1e-12)


@given(st.floats(1, 5))
def test_effective_ratio_signs(B):
    r = effective_ratios(B)
    assert r.gamma_S_eff > 0 > r.gamma_I_eff


@pytest.mark.parametrize("B", [0.99, 5.01, 0.5])
def test_effective_ratio_range(yb, B):
    with pytest.raises(RangeError):
        effective_ratios(B)
    with pytest.raises(RangeError):
        highfield_hamiltonian(yb, B, "effective")
    with pytest.raises(RangeError):
        highfield_hamiltonian(yb, B, EffectiveRatios(1.0, -1.0))


def test_field_and_species_validation(yb):
    with pytest.raises(DomainError):
        exact_hamiltonian(yb, 0)
    with pytest.raises(UnsupportedSpeciesError):
        exact_hamiltonian(yb.__class__("x", yb.mass, yb.gamma_S, yb.gamma_I, yb.hyperfine_A, 1.5), 1)


@given(st.floats(1, 5))
def test_effective_intra_manifold_splittings_within_two_percent(yb, B):
    exact = diagonalize(exact_hamiltonian(yb, B))
    eff = diagonalize(highfield_hamiltonian(yb, B, "effective"))
    for a, b in ((UP_UP, UP_DOWN), (DOWN_UP, DOWN_DOWN)):
        assert eff.transition(a, b) == pytest.approx(exact.transition(a, b), rel=0.02)


@given(st.floats(0.6, 9.9))
def test_matched_frequencies_reproduce_all_single_flip_splittings(yb, B):
    ws, wi = matched_larmor_frequencies(yb, B)
    r = EffectiveRatios(ws / B, wi / B, (0, 100))
    model = diagonalize(highfield_hamiltonian(yb, B, r))
    exact = diagonalize(exact_hamiltonian(yb, B))
    for a, b in ((UP_UP, UP_DOWN), (DOWN_UP, DOWN_DOWN), (UP_UP, DOWN_UP), (UP_DOWN, DOWN_DOWN)):
        assert model.transition(a, b) == pytest.approx(exact.transition(a, b), rel=1e-9)


def test_refit(yb):
    grid = np.linspace(1, 5, 9)
    fit = refit_effective_ratios(yb, grid)
    assert fit.coeffs_S_ghz[0] == pytest.approx(28.1, rel=0.05)
    assert fit.max_residual_S >= 0 and fit.published_residual_S > 0
    # reconstructed intra-manifold splittings against the exact spectrum
    worst = 0.0
    for B in grid:
        model = diagonalize(highfield_hamiltonian(yb, B, fit.ratios(B)))
        exact = diagonalize(exact_hamiltonian(yb, B))
        for a, b in ((UP_UP, UP_DOWN), (DOWN_UP, DOWN_DOWN)):
            worst = max(worst, abs(model.transition(a, b) / exact.transition(a, b) - 1))
    assert worst < 0.02


def test_refit_validation(yb):
    with pytest.raises(DomainError):
        refit_effective_ratios(yb, [1, 2, 3, 4])
    with pytest.raises(RangeError):
        refit_effective_ratios(yb, [0.5, 1, 2, 3, 4])
