"""Pauli terms and Trotter circuits, native vs scaled.

Decomposes the reduced Hamiltonians into Pauli strings, prints the
three-qubit expansion for six plaquettes, and compares the two-qubit gate
budget of the native (CNOT ladder) and scaled (rescaled ZZ rotation)
lowerings of one Trotter step.

Run: python demos/02_pauli_terms_and_circuits.py
"""

import numpy as np

from rksim.circuits import count_gates, synthesize_term, synthesize_trotter
from rksim.engine import circuit_unitary
from rksim.pauli import decompose_hamiltonian, pauli_matrix, string_weight
from rksim.reduction import build_effective_hamiltonian

print("=== three-qubit Pauli expansion, six plaquettes ===")
decomposition = decompose_hamiltonian(build_effective_hamiltonian(6))
line = " ".join(f"{c:+.3g}*{s}" for s, c in decomposition.terms)
print(line)
print(f"{len(decomposition)} terms")

print("\n=== gate budget of one Trotter step ===")
print(f"{'N':>3} {'terms':>6} {'CNOT native':>12} {'CNOT scaled':>12} {'scaled RZZ':>11}")
for n in (4, 6, 8):
    dec = decompose_hamiltonian(build_effective_hamiltonian(n))
    native = count_gates(synthesize_trotter(dec, 0.2, 1, "native"))
    scaled = count_gates(synthesize_trotter(dec, 0.2, 1, "scaled"))
    print(f"{n:>3} {len(dec):>6} {native.cnot_native:>12} "
          f"{scaled.cnot_native:>12} {scaled.scaled_rzz:>11}")

print("\n=== one weight-3 term, both lowerings ===")
string, coeff = next((s, c) for s, c in decomposition.terms if string_weight(s) == 3)
dt = 0.2
for mode in ("native", "scaled"):
    gates = synthesize_term(string, coeff, dt, mode)
    listing = ", ".join(
        g.kind if g.angle is None else f"{g.kind}({g.angle:+.3f})" for g in gates)
    print(f"{mode:>7}: exp(-i {coeff:+.3f} {string} dt) -> {listing}")

from rksim.circuits import Circuit  # noqa: E402

target = (np.cos(coeff * dt) * np.eye(8)
          - 1j * np.sin(coeff * dt) * pauli_matrix(string))
for mode in ("native", "scaled"):
    circuit = Circuit(3, tuple(synthesize_term(string, coeff, dt, mode)))
    dev = np.max(np.abs(circuit_unitary(circuit) - target))
    print(f"{mode:>7}: max deviation from the exact exponential = {dev:.2e}")
