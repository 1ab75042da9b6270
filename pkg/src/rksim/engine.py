"""Execution backends and observables.

Three ways to evolve the reduced system, in increasing realism:

* exact: eigendecomposition of the d x d reduced matrix (the oracle);
* ideal: gate-by-gate state-vector application of a Trotter circuit;
* noisy: density-matrix propagation with a depolarizing channel after
  every gate and bit-flip readout errors at measurement, sampled into
  counts.

Scaled two-qubit gates carry a depolarizing probability shrunk by the
cross-resonance pulse-duration ratio of their angle, which is the entire
mechanism behind the scaled-gate advantage studied here.

States are plain complex vectors of length 2^Q (or length d for the exact
backend); qubit 0 is the most significant bit of the basis index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, Gate, synthesize_trotter
from .pauli import decompose_hamiltonian
from .pulse import PulseCalibration, pulse_duration_ratio, reduce_rzz_angle
from .reduction import (EffectiveHamiltonian, Orbit, build_effective_hamiltonian,
                        flippable_mask)

__all__ = [
    "NoiseModel",
    "ExactEvolver",
    "evolve_exact",
    "apply_gate",
    "run_ideal",
    "circuit_unitary",
    "evolve_density",
    "sample_counts",
    "run_noisy",
    "orbit_flippable_values",
    "orbit_correlation_values",
    "expect_flippable",
    "expect_correlation",
    "sampled_expectation",
    "vector_expectation",
    "state_fidelity",
    "trotter_error",
]


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing noise per gate plus readout bit flips.

    ``p1`` applies to single-qubit gates, ``p2`` to CNOTs; scaled two-qubit
    gates get ``p2`` times the pulse-duration ratio of their reduced angle.
    """

    p1: float = 3e-4
    p2: float = 8e-3
    p_readout: float = 1e-2
    shots: int = 8192
    calibration: PulseCalibration = field(default_factory=PulseCalibration)

    def __post_init__(self) -> None:
        for name in ("p1", "p2", "p_readout"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be a probability in [0, 1]")
        if self.shots < 1:
            raise ValueError("shots must be at least 1")

    def p2_scaled(self, theta: float) -> float:
        """Two-qubit depolarizing probability of a scaled gate at ``theta``."""
        reduced = reduce_rzz_angle(theta)
        if reduced < 1e-15:
            return 0.0
        return self.p2 * pulse_duration_ratio(self.calibration, reduced)

    def gate_error(self, gate: Gate) -> float:
        if gate.kind == "CNOT":
            return self.p2
        if gate.kind in ("SCALEDRZZ", "SCALEDRZX"):
            return self.p2_scaled(gate.angle)
        return self.p1


_H_GATE = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_Z = np.diag([1.0, -1.0]).astype(complex)
_ZZ = np.kron(_Z, _Z)
_ZX = np.kron(_Z, _X)


def _rotation(generator: np.ndarray, angle: float) -> np.ndarray:
    # generator squares to the identity, so the exponential is a cos/sin pair
    dim = generator.shape[0]
    return math.cos(angle / 2.0) * np.eye(dim) - 1.0j * math.sin(angle / 2.0) * generator


def gate_matrix(gate: Gate) -> np.ndarray:
    """Local unitary of a gate, in the order of ``gate.qubits``."""
    if gate.kind == "RX":
        return _rotation(_X, gate.angle)
    if gate.kind == "RY":
        return _rotation(_Y, gate.angle)
    if gate.kind == "RZ":
        return _rotation(_Z, gate.angle)
    if gate.kind == "H":
        return _H_GATE
    if gate.kind == "CNOT":
        return _CNOT
    if gate.kind == "SCALEDRZZ":
        return _rotation(_ZZ, gate.angle)
    if gate.kind == "SCALEDRZX":
        return _rotation(_ZX, gate.angle)
    raise ValueError(f"unknown gate kind {gate.kind!r}")


def _num_qubits_of(dim: int) -> int:
    q = dim.bit_length() - 1
    if 1 << q != dim:
        raise ValueError("state dimension is not a power of two")
    return q


def apply_gate(state: np.ndarray, gate: Gate) -> np.ndarray:
    """Apply one gate to a 2^Q state vector."""
    q = _num_qubits_of(state.shape[0])
    local = gate_matrix(gate)
    k = len(gate.qubits)
    tensor = state.reshape((2,) * q)
    out = np.tensordot(local.reshape((2,) * (2 * k)),
                       tensor, axes=(range(k, 2 * k), gate.qubits))
    out = np.moveaxis(out, range(k), gate.qubits)
    return out.reshape(-1)


def run_ideal(circuit: Circuit, psi0: np.ndarray | None = None) -> np.ndarray:
    """Exact state-vector execution; scaled gates act as their exact unitaries."""
    dim = 1 << circuit.qubits
    if psi0 is None:
        psi = np.zeros(dim, dtype=complex)
        psi[0] = 1.0
    else:
        if psi0.shape != (dim,):
            raise ValueError("initial state dimension does not match the circuit")
        psi = psi0.astype(complex)
    for gate in circuit.gates:
        psi = apply_gate(psi, gate)
    return psi


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Full matrix of a circuit (column-by-column application)."""
    dim = 1 << circuit.qubits
    out = np.empty((dim, dim), dtype=complex)
    for col in range(dim):
        basis = np.zeros(dim, dtype=complex)
        basis[col] = 1.0
        out[:, col] = run_ideal(circuit, basis)
    return out


def _apply_gate_density(rho: np.ndarray, gate: Gate, q: int) -> np.ndarray:
    local = gate_matrix(gate)
    k = len(gate.qubits)
    tensor = rho.reshape((2,) * (2 * q))
    u = local.reshape((2,) * (2 * k))
    # left action on the row indices
    tensor = np.tensordot(u, tensor, axes=(range(k, 2 * k), gate.qubits))
    tensor = np.moveaxis(tensor, range(k), gate.qubits)
    # right action (conjugate) on the column indices
    cols = [q + t for t in gate.qubits]
    tensor = np.tensordot(u.conj(), tensor, axes=(range(k, 2 * k), cols))
    tensor = np.moveaxis(tensor, range(k), cols)
    return tensor.reshape(rho.shape)


def _depolarize(rho: np.ndarray, p: float, qubits: tuple[int, ...], q: int) -> np.ndarray:
    """(1 - p) rho + p (maximally mixed on ``qubits``) x (partial trace)."""
    if p == 0.0:
        return rho
    k = len(qubits)
    tensor = rho.reshape((2,) * (2 * q))
    order = list(qubits) + [i for i in range(q) if i not in qubits]
    perm = order + [q + i for i in order]
    tensor = np.transpose(tensor, perm)
    block = tensor.reshape(1 << k, 1 << (q - k), 1 << k, 1 << (q - k))
    reduced = np.trace(block, axis1=0, axis2=2)
    mixed = np.kron(np.eye(1 << k) / (1 << k), reduced)
    mixed = mixed.reshape((2,) * (2 * q))
    mixed = np.transpose(mixed, np.argsort(perm))
    return (1.0 - p) * rho + p * mixed.reshape(rho.shape)


def evolve_density(circuit: Circuit, noise: NoiseModel,
                   rho0: np.ndarray | None = None) -> np.ndarray:
    """Propagate a density matrix through the circuit with per-gate noise."""
    dim = 1 << circuit.qubits
    if rho0 is None:
        rho = np.zeros((dim, dim), dtype=complex)
        rho[0, 0] = 1.0
    else:
        if rho0.shape != (dim, dim):
            raise ValueError("density matrix dimension does not match the circuit")
        rho = rho0.astype(complex)
    for gate in circuit.gates:
        rho = _apply_gate_density(rho, gate, circuit.qubits)
        rho = _depolarize(rho, noise.gate_error(gate), gate.qubits, circuit.qubits)
    return rho


def _readout_probabilities(rho: np.ndarray, p_flip: float, q: int) -> np.ndarray:
    probs = np.clip(np.real(np.diag(rho)), 0.0, None)
    if p_flip > 0.0:
        flip = np.array([[1.0 - p_flip, p_flip], [p_flip, 1.0 - p_flip]])
        tensor = probs.reshape((2,) * q)
        for axis in range(q):
            tensor = np.moveaxis(np.tensordot(flip, tensor, axes=(1, axis)), 0, axis)
        probs = tensor.reshape(-1)
    total = probs.sum()
    if total <= 0.0:
        raise ValueError("state has no measurable weight")
    return probs / total


def sample_counts(rho: np.ndarray, noise: NoiseModel, rng: np.random.Generator,
                  shots: int | None = None) -> dict[str, int]:
    """Sample computational-basis counts with readout bit flips."""
    q = _num_qubits_of(rho.shape[0])
    probs = _readout_probabilities(rho, noise.p_readout, q)
    shots = noise.shots if shots is None else shots
    drawn = rng.multinomial(shots, probs)
    return {format(i, f"0{q}b"): int(c) for i, c in enumerate(drawn) if c}


def run_noisy(circuit: Circuit, noise: NoiseModel,
              rng: np.random.Generator | int | None = None,
              psi0: np.ndarray | None = None) -> dict[str, int]:
    """Noisy execution: density-matrix propagation then sampled measurement."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    rho0 = None if psi0 is None else np.outer(psi0, psi0.conj())
    rho = evolve_density(circuit, noise, rho0)
    return sample_counts(rho, noise, rng)


class ExactEvolver:
    """Eigendecomposition-based evolution of the reduced Hamiltonian."""

    def __init__(self, hamiltonian: EffectiveHamiltonian | np.ndarray):
        if isinstance(hamiltonian, EffectiveHamiltonian):
            matrix = hamiltonian.matrix
        else:
            matrix = np.asarray(hamiltonian)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise ValueError("expected a square matrix")
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(matrix)
        self.dim = matrix.shape[0]

    def state(self, psi0: np.ndarray, t: float) -> np.ndarray:
        """exp(-i H t) applied to ``psi0``."""
        amplitudes = self.eigenvectors.conj().T @ psi0
        return self.eigenvectors @ (np.exp(-1.0j * self.eigenvalues * t) * amplitudes)


def evolve_exact(hamiltonian: EffectiveHamiltonian | np.ndarray,
                 psi0: np.ndarray, t: float) -> np.ndarray:
    """One-shot exact evolution; see :class:`ExactEvolver` for sweeps."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    return ExactEvolver(hamiltonian).state(psi0, t)


def orbit_flippable_values(basis: tuple[Orbit, ...]) -> np.ndarray:
    """Diagonal of the flippable-count observable in the orbit basis."""
    return np.array([orbit.flippable for orbit in basis], dtype=float)


def orbit_correlation_values(basis: tuple[Orbit, ...], n: int, r: int) -> np.ndarray:
    """Diagonal of the distance-r flippability correlation in the orbit basis.

    For each orbit the value averages, over the member configurations, the
    product of the flippability indicators of two plaquettes separated by
    ``r`` columns.  Periodicity makes the value independent of the anchor
    plaquette; that independence is asserted rather than assumed.
    """
    if not 1 <= r <= n // 2:
        raise ValueError(f"correlation distance must lie in 1..{n // 2}")
    values = np.empty(len(basis))
    for a, orbit in enumerate(basis):
        per_anchor = np.zeros(n)
        for member in orbit.members:
            fmask = flippable_mask(n, member)
            for p in range(n):
                if fmask >> p & 1 and fmask >> ((p + r) % n) & 1:
                    per_anchor[p] += 1.0
        per_anchor /= orbit.size
        if per_anchor.max() - per_anchor.min() > 1e-12:
            raise AssertionError("correlation value depends on the anchor plaquette")
        values[a] = per_anchor[0]
    return values


def _counts_to_index_array(counts: dict[str, int]) -> tuple[np.ndarray, np.ndarray]:
    indices = np.array([int(bits, 2) for bits in counts], dtype=int)
    numbers = np.array(list(counts.values()), dtype=float)
    return indices, numbers


def sampled_expectation(counts: dict[str, int], values: np.ndarray
                        ) -> tuple[float, float, float]:
    """Mean, standard error, and discard fraction of a diagonal observable.

    Bitstrings outside the physical d-dimensional block are discarded and
    the rest renormalized; raises when nothing is left.
    """
    d = len(values)
    indices, numbers = _counts_to_index_array(counts)
    keep = indices < d
    kept = numbers[keep].sum()
    total = numbers.sum()
    if kept == 0:
        raise ValueError("all shots fell outside the physical basis")
    weights = numbers[keep] / kept
    obs = values[indices[keep]]
    mean = float(np.sum(weights * obs))
    variance = float(np.sum(weights * (obs - mean) ** 2))
    stderr = math.sqrt(variance / kept)
    return mean, stderr, float((total - kept) / total)


def vector_expectation(state: np.ndarray, values: np.ndarray) -> float:
    d = len(values)
    if state.shape[0] < d:
        raise ValueError("state dimension smaller than the basis")
    weights = np.abs(state[:d]) ** 2
    return float(np.sum(values * weights))


def expect_flippable(state_or_counts, basis: tuple[Orbit, ...]) -> float:
    """Expected number of flippable plaquettes.

    Accepts a state vector (reduced d-dimensional or padded 2^Q) or a
    counts dictionary from a noisy run.
    """
    values = orbit_flippable_values(basis)
    if isinstance(state_or_counts, dict):
        return sampled_expectation(state_or_counts, values)[0]
    return vector_expectation(np.asarray(state_or_counts), values)


def expect_correlation(state_or_counts, basis: tuple[Orbit, ...], n: int, r: int) -> float:
    """Expected flippability correlation at plaquette separation ``r``."""
    values = orbit_correlation_values(basis, n, r)
    if isinstance(state_or_counts, dict):
        return sampled_expectation(state_or_counts, values)[0]
    return vector_expectation(np.asarray(state_or_counts), values)


def state_fidelity(rho: np.ndarray, psi: np.ndarray) -> float:
    """Overlap <psi| rho |psi> of a density matrix with a pure state."""
    return float(np.real(psi.conj() @ rho @ psi))


def trotter_error(n: int, lam: float, dt: float, t_max: float,
                  grid: np.ndarray | None = None, j: float = 1.0,
                  mode: str = "native") -> float:
    """Largest deviation of the ideal Trotter flippable count from exact.

    The circuit is stepped in increments of ``dt``; the comparison grid
    defaults to every step up to ``t_max`` and must consist of multiples
    of ``dt``.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    eff = build_effective_hamiltonian(n, j, lam)
    decomposition = decompose_hamiltonian(eff)
    step = synthesize_trotter(decomposition, dt, 1, mode)
    values = orbit_flippable_values(eff.basis)
    evolver = ExactEvolver(eff)
    psi0 = np.zeros(eff.dim)
    psi0[0] = 1.0

    if grid is None:
        grid = np.arange(dt, t_max + 1e-9, dt)
    grid = np.asarray(grid, dtype=float)
    steps_needed = np.rint(grid / dt).astype(int)
    if np.max(np.abs(steps_needed * dt - grid)) > 1e-9:
        raise ValueError("grid times must be multiples of dt")

    psi = np.zeros(1 << eff.qubits, dtype=complex)
    psi[0] = 1.0
    done = 0
    worst = 0.0
    for t, k in sorted(zip(grid.tolist(), steps_needed.tolist())):
        for _ in range(k - done):
            psi = run_ideal(step, psi)
        done = k
        approx = vector_expectation(psi, values)
        exact = vector_expectation(evolver.state(psi0, t), values)
        worst = max(worst, abs(approx - exact))
    return worst
