"""Linear Coulomb crystals: equilibrium positions and axial normal modes.

Positions are dimensionless, in units of :func:`ionspin.units.ion_length_scale`.
In these units the axial potential energy of N ions is

    U(u) = sum_i u_i**2 / 2 + sum_{i<j} 1 / |u_i - u_j|

and its Hessian at equilibrium has eigenvalues mu_l with mode frequencies
nu_l = nu_z * sqrt(mu_l).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericalError
from .units import Frequency, IonSpecies, angular, ion_length_scale

MAX_IONS = 20
MAX_NEWTON_ITERATIONS = 200
GRADIENT_TOLERANCE = 1e-12


def _check_count(n_ions: int) -> None:
    if not isinstance(n_ions, (int, np.integer)) or not 2 <= n_ions <= MAX_IONS:
        raise DomainError(f"n_ions must be an integer in [2, {MAX_IONS}], got {n_ions!r}")


def potential_energy(u) -> float:
    u = np.asarray(u, dtype=float)
    i, j = np.triu_indices(len(u), 1)
    return 0.5 * np.sum(u**2) + np.sum(1.0 / np.abs(u[i] - u[j]))


def potential_gradient(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    d = u[:, None] - u[None, :]
    np.fill_diagonal(d, np.inf)
    return u - np.sum(np.sign(d) / d**2, axis=1)


def potential_hessian(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    d = np.abs(u[:, None] - u[None, :])
    np.fill_diagonal(d, np.inf)
    k = 2.0 / d**3
    hess = -k
    hess[np.diag_indices(len(u))] = 1.0 + k.sum(axis=1)
    return hess


def equilibrium_positions(n_ions: int) -> np.ndarray:
    """Dimensionless equilibrium positions of ``n_ions`` ions, ascending.

    Damped Newton iteration starting from uniformly spaced ions. The Hessian is
    positive definite for any ordered configuration, so the Newton step is
    always a descent direction; it is halved until it keeps the ordering and
    lowers the energy.
    """
    _check_count(n_ions)
    u = np.linspace(-1.0, 1.0, n_ions) * 0.7 * (n_ions - 1) ** 0.7
    energy = potential_energy(u)
    residual = np.inf
    for _ in range(MAX_NEWTON_ITERATIONS):
        grad = potential_gradient(u)
        residual = np.max(np.abs(grad))
        if residual < GRADIENT_TOLERANCE:
            break
        step = np.linalg.solve(potential_hessian(u), grad)
        t = 1.0
        while True:
            trial = u - t * step
            if np.all(np.diff(trial) > 0):
                e_trial = potential_energy(trial)
                if e_trial <= energy + 1e-14 * abs(energy):
                    break
            t *= 0.5
            if t < 1e-12:
                raise NumericalError("line search failed in equilibrium search",
                                     residual=residual)
        u, energy = trial, e_trial
    else:
        raise NumericalError(
            f"equilibrium search for {n_ions} ions did not converge", residual=residual)
    # the exact solution is mirror symmetric; remove round-off asymmetry
    return 0.5 * (u - u[::-1])


@dataclass(frozen=True)
class CrystalConfiguration:
    n_ions: int
    positions_dimensionless: np.ndarray = field(repr=False)
    species: IonSpecies
    nu_z: Frequency

    @property
    def length_scale(self) -> float:
        return ion_length_scale(self.species, self.nu_z)

    @property
    def positions(self) -> np.ndarray:
        """Equilibrium positions in m."""
        return self.length_scale * self.positions_dimensionless


def crystal(species: IonSpecies, nu_z, n_ions: int) -> CrystalConfiguration:
    nu = nu_z if isinstance(nu_z, Frequency) else Frequency(angular(nu_z))
    return CrystalConfiguration(n_ions, equilibrium_positions(n_ions), species, nu)


def min_spacing(species: IonSpecies, nu_z, n_ions: int) -> float:
    """Smallest distance between neighbouring ions, in m."""
    u = equilibrium_positions(n_ions)
    return ion_length_scale(species, nu_z) * np.min(np.diff(u))


@dataclass(frozen=True)
class NormalModes:
    eigenvalues_mu: np.ndarray
    mode_matrix_D: np.ndarray  # column l is mode l
    nu_modes: tuple

    @property
    def angular_frequencies(self) -> np.ndarray:
        return np.array([f.angular for f in self.nu_modes])


def normal_modes(config: CrystalConfiguration) -> NormalModes:
    """Axial modes of a homogeneous crystal, sorted by ascending frequency."""
    hess = potential_hessian(config.positions_dimensionless)
    try:
        mu, D = np.linalg.eigh(hess)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Hessian diagonalisation failed: {exc}") from exc
    # deterministic signs: largest component of every mode is positive
    for col in range(D.shape[1]):
        k = np.argmax(np.round(np.abs(D[:, col]), 12))
        if D[k, col] < 0:
            D[:, col] = -D[:, col]
    w_z = angular(config.nu_z)
    nus = tuple(Frequency(w_z * np.sqrt(m)) for m in mu)
    return NormalModes(mu, D, nus)
