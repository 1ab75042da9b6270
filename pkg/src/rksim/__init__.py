"""Rokhsar-Kivelson plaquette-ladder simulation toolkit.

Layers, from exact to hardware-flavored:

* :mod:`rksim.lattice`    spin-level ladder, ring exchange, Gauss law;
* :mod:`rksim.reduction`  flip configurations, translation orbits, the
                          reduced Hamiltonian and its certification;
* :mod:`rksim.pauli`      qubit embedding and Pauli decomposition;
* :mod:`rksim.circuits`   Trotter circuit synthesis, native and scaled;
* :mod:`rksim.pulse`      cross-resonance pulse-area scaling;
* :mod:`rksim.engine`     exact / ideal / noisy backends and observables;
* :mod:`rksim.fidelity`   average gate fidelity of the two RZZ routes;
* :mod:`rksim.cli`        batch interface (``rksim`` entry point).
"""

from .circuits import Circuit, Gate, GateCounts, count_gates, synthesize_term, synthesize_trotter
from .engine import (ExactEvolver, NoiseModel, evolve_density, evolve_exact,
                     expect_correlation, expect_flippable, run_ideal, run_noisy,
                     state_fidelity, trotter_error)
from .fidelity import (average_gate_fidelity, rzz_native_channel,
                       rzz_scaled_channel, rzz_unitary)
from .lattice import (LadderGeometry, PlaquetteClass, SpinState, apply_ring_exchange,
                      build_reference_state, classify_plaquette, flippable_count,
                      gauss_charges, reachable_states)
from .pauli import PauliDecomposition, decompose, decompose_hamiltonian, embed, reconstruct
from .pulse import PulseCalibration, PulseParams, pulse_duration_ratio, scale_pulse
from .reduction import (EffectiveHamiltonian, Orbit, ReductionReport,
                        build_effective_hamiltonian, build_reduction_report,
                        config_space_hamiltonian, enumerate_configs,
                        flippable_count_config, orbit_decompose)

__version__ = "0.1.0"
