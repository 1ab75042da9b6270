"""Average gate fidelity of the two RZZ implementations under noise.

A ZZ rotation can be compiled natively (CNOT, RZ on the target, CNOT) or
from a single amplitude/width-rescaled cross-resonance ZX rotation
conjugated by Hadamards on the target.  Composing each gate's unitary with
its depolarizing channel gives a completely positive trace-preserving map;
its process fidelity against the ideal rotation is the normalized
Hilbert-Schmidt overlap of superoperators, converted to average gate
fidelity by the usual (d F_pro + 1) / (d + 1) with d = 4.

Superoperators act on column-stacked density matrices, so a unitary U
becomes conj(U) (x) U.
"""

from __future__ import annotations

import itertools

import numpy as np

from .circuits import Gate
from .engine import NoiseModel, gate_matrix
from .pauli import pauli_matrix

__all__ = [
    "unitary_superop",
    "depolarizing_superop",
    "gate_channel",
    "sequence_channel",
    "rzz_unitary",
    "rzz_native_channel",
    "rzz_scaled_channel",
    "average_gate_fidelity",
]


def unitary_superop(u: np.ndarray) -> np.ndarray:
    return np.kron(u.conj(), u)


def depolarizing_superop(p: float, qubits: tuple[int, ...], n_qubits: int) -> np.ndarray:
    """Depolarizing channel on a subset of qubits as a superoperator."""
    dim = 1 << n_qubits
    if p == 0.0:
        return np.eye(dim * dim)
    k = len(qubits)
    mix = np.zeros((dim * dim, dim * dim), dtype=complex)
    for letters in itertools.product("IXYZ", repeat=k):
        word = ["I"] * n_qubits
        for q, letter in zip(qubits, letters):
            word[q] = letter
        mix += unitary_superop(pauli_matrix("".join(word)))
    mix /= 4 ** k
    return (1.0 - p) * np.eye(dim * dim) + p * mix


def gate_channel(gate: Gate, noise: NoiseModel, n_qubits: int) -> np.ndarray:
    """Noisy gate: exact unitary followed by its depolarizing channel."""
    local = gate_matrix(gate)
    if len(gate.qubits) == n_qubits and gate.qubits == tuple(range(n_qubits)):
        full = local
    else:
        full = _embed_unitary(local, gate.qubits, n_qubits)
    return depolarizing_superop(noise.gate_error(gate), gate.qubits, n_qubits) @ unitary_superop(full)


def _embed_unitary(local: np.ndarray, qubits: tuple[int, ...], n_qubits: int) -> np.ndarray:
    k = len(qubits)
    order = list(qubits) + [q for q in range(n_qubits) if q not in qubits]
    full = np.kron(local, np.eye(1 << (n_qubits - k)))
    full = full.reshape((2,) * (2 * n_qubits))
    perm = np.argsort(order)
    axes = list(perm) + [n_qubits + int(p) for p in perm]
    full = np.transpose(full, axes)
    return full.reshape(1 << n_qubits, 1 << n_qubits)


def sequence_channel(gates: list[Gate], noise: NoiseModel, n_qubits: int) -> np.ndarray:
    """Channel of a gate sequence, first gate applied first."""
    dim = 1 << n_qubits
    total = np.eye(dim * dim, dtype=complex)
    for gate in gates:
        total = gate_channel(gate, noise, n_qubits) @ total
    return total


def rzz_unitary(theta: float) -> np.ndarray:
    return gate_matrix(Gate("SCALEDRZZ", (0, 1), theta))


def rzz_native_channel(theta: float, noise: NoiseModel) -> np.ndarray:
    """CNOT - RZ(theta) - CNOT implementation with per-gate noise."""
    gates = [Gate("CNOT", (0, 1)), Gate("RZ", (1,), theta), Gate("CNOT", (0, 1))]
    return sequence_channel(gates, noise, 2)


def rzz_scaled_channel(theta: float, noise: NoiseModel) -> np.ndarray:
    """Hadamard-conjugated scaled ZX rotation with duration-scaled noise."""
    gates = [Gate("H", (1,)), Gate("SCALEDRZX", (0, 1), theta), Gate("H", (1,))]
    return sequence_channel(gates, noise, 2)


def average_gate_fidelity(ideal: np.ndarray, channel: np.ndarray) -> float:
    """Average fidelity of a two-qubit channel against an ideal unitary.

    Process fidelity is Tr(S_ideal^dagger S_channel) / d^2; the channel
    must preserve the trace to 1e-8 or the input is rejected.
    """
    d = ideal.shape[0]
    if channel.shape != (d * d, d * d):
        raise ValueError("channel superoperator does not match the unitary dimension")
    identity = np.eye(d, dtype=complex).reshape(-1, order="F")
    if np.max(np.abs(channel.conj().T @ identity - identity)) > 1e-8:
        raise ValueError("channel is not trace preserving")
    process = float(np.real(np.trace(unitary_superop(ideal).conj().T @ channel))) / d ** 2
    return (d * process + 1.0) / (d + 1.0)
