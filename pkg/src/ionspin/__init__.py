"""Spin-spin coupling and spin-qubit gates for trapped ions in strong magnetic fields."""

__version__ = "0.1.0"

from .errors import (CapacityError, DomainError, GeometryError, IonSpinError, NumericalError,
                     RangeError, RegimeError, StabilityError, UnsupportedSpeciesError,
                     ValidationError)
from .units import CONSTANTS, TWO_PI, Frequency, IonSpecies, ion_length_scale, yb171
from .crystal import (CrystalConfiguration, NormalModes, crystal, equilibrium_positions,
                      min_spacing, normal_modes)
from .hyperfine import (BASIS, DOWN_DOWN, DOWN_UP, UP_DOWN, UP_UP, EffectiveRatios,
                        HamiltonianKind, HyperfineSpectrum, SingleIonHamiltonian, SpinBasisState,
                        breit_rabi_levels, diagonalize, effective_ratios, exact_hamiltonian,
                        highfield_hamiltonian, matched_larmor_frequencies, refit_effective_ratios)
from .coupling import (CouplingMatrix, FieldConfig, GateTableRow, gate_table_row, gate_time,
                       j_matrix, reproduce_gate_table)
from .dynamics import (DrivenHamiltonian, Drive, FidelityPoint, PulseSpec, cnot_fidelity_curve,
                       cnot_fidelity_point, cnot_IS_pulse, cnot_SI_pulse, evolve, propagator,
                       swap_sequence, two_qubit_conditional_phase)
from .spectrum import (ChainConfig, SpectralLine, active_spectrum, addressing_separation,
                       full_spectrum, is_addressable)
from .magnets import HalbachGeometry, halbach_field, remanence_at
from .pseudopotential import (RfTrapParams, cyclotron_frequency, mathieu_slow_frequency,
                              secular_frequency, shifted_mode_frequencies)

__all__ = [name for name in dir() if not name.startswith("_")]
