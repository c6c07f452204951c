"""Feasible-subspace QAOA simulation for single linear constraints with
sequential integer coefficients: merge-operator mixing families, their
machine verification, subspace statevector evolution, annealing and
Chebyshev schedules, spectral certificates, and exact gate compilation.
"""

from .casestudy import case_study_instance, named_family, run_case_study
from .circuits import (Circuit, Gate, circuit_unitary, emit_merge_unitary,
                       emit_pauli_rotation, export_circuit, parse_circuit)
from .mixers import (MergeOperator, MixingFamily, PauliTerm, family_max,
                     family_min, family_mu_max, make_family, make_merge,
                     merge_matrix, pauli_decompose, transition_pairs)
from .optimize import OptResult, optimize_chebyshev, optimize_dt
from .problem import (FeasibleBasis, KappaIndex, ProblemInstance,
                      build_instance, enumerate_feasible, find_optimum,
                      objective_value, objective_values)
from .schedules import (AngleSet, ChebyshevSchedule, SimpleSchedule,
                        angles_from_schedule, cheb_derivative, cheb_eval,
                        cheb_fit, fit_schedule, schedule_derivative,
                        schedule_eval, simple_eval)
from .sim import (Hamiltonians, adiabatic_evolve, build_hamiltonians,
                  evolve_diagonal, evolve_sequential, evolve_simultaneous,
                  leakage_check, pr_opt, qaoa_state)
from .spectral import (SpectrumSlice, TimescaleCurve, adiabatic_timescale,
                       default_grid, hamiltonian_at, spectrum_slice)
from .verify import (BasisInteractionGraph, MixerGroundState,
                     QubitInteractionGraph, VerificationReport,
                     analyze_mixer_ground_state, basis_graph,
                     connectivity_scan, qubit_graph, verify_family,
                     witness_merge_pair, witness_with_bit)

__version__ = "0.1.0"
