"""Gate-level synthesis of first-order Trotter circuits.

Each Pauli-string exponential exp(-i c P dt) is lowered to single-qubit
basis changes, a CNOT parity ladder onto the highest active qubit, and one
Z rotation (native mode).  In scaled mode the innermost CNOT pair together
with the rotation is replaced by a single two-qubit ZZ rotation meant to
be realized by a rescaled cross-resonance pulse; the outer ladder CNOTs
are kept.  Both modes implement exactly the same unitary.

Gate counts follow directly: a weight-w term costs 2(w - 1) CNOTs native
and 2(w - 2) CNOTs plus one scaled gate for w >= 2 in scaled mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .pauli import PauliDecomposition

__all__ = [
    "Gate",
    "Circuit",
    "GateCounts",
    "synthesize_term",
    "synthesize_trotter",
    "count_gates",
    "circuit_to_text",
    "circuit_from_text",
]

NATIVE = "native"
SCALED = "scaled"
MODES = (NATIVE, SCALED)

# kind -> (has angle, number of qubits)
_GATE_SHAPE = {
    "RX": (True, 1),
    "RY": (True, 1),
    "RZ": (True, 1),
    "H": (False, 1),
    "CNOT": (False, 2),
    "SCALEDRZZ": (True, 2),
    "SCALEDRZX": (True, 2),
}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _GATE_SHAPE:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        has_angle, arity = _GATE_SHAPE[self.kind]
        if has_angle != (self.angle is not None):
            raise ValueError(f"{self.kind} angle mismatch")
        if self.angle is not None and not math.isfinite(self.angle):
            raise ValueError("gate angle must be finite")
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} expects {arity} qubit(s)")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError("two-qubit gate needs distinct qubits")


@dataclass(frozen=True)
class Circuit:
    qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self) -> None:
        for gate in self.gates:
            if any(not 0 <= q < self.qubits for q in gate.qubits):
                raise ValueError(f"gate {gate} outside {self.qubits}-qubit register")

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class GateCounts:
    cnot_native: int
    scaled_rzz: int
    single_qubit: int

    def to_dict(self) -> dict:
        return {
            "cnot_native": self.cnot_native,
            "scaled_rzz": self.scaled_rzz,
            "single_qubit": self.single_qubit,
        }


def _rx(angle: float, q: int) -> Gate:
    return Gate("RX", (q,), angle)


def synthesize_term(string: str, coeff: float, dt: float, mode: str = NATIVE) -> list[Gate]:
    """Gates implementing exp(-i * coeff * P * dt) for one Pauli string.

    Identity strings contribute only a global phase and produce no gates;
    weight-1 strings are a single axis rotation in either mode.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    active = [q for q, letter in enumerate(string) if letter != "I"]
    angle = 2.0 * coeff * dt
    if not active:
        return []
    if len(active) == 1:
        q = active[0]
        return [Gate("R" + string[q], (q,), angle)]

    pre: list[Gate] = []
    post: list[Gate] = []
    for q in active:
        if string[q] == "X":
            pre.append(Gate("H", (q,)))
            post.append(Gate("H", (q,)))
        elif string[q] == "Y":
            pre.append(_rx(math.pi / 2, q))
            post.append(_rx(-math.pi / 2, q))
    post.reverse()

    ladder = [Gate("CNOT", (active[i], active[i + 1])) for i in range(len(active) - 1)]
    if mode == NATIVE:
        core = ladder + [Gate("RZ", (active[-1],), angle)] + ladder[::-1]
    else:
        outer = ladder[:-1]
        core = outer + [Gate("SCALEDRZZ", (active[-2], active[-1]), angle)] + outer[::-1]
    return pre + core + post


def synthesize_trotter(decomposition: PauliDecomposition, dt: float,
                       n_steps: int, mode: str = NATIVE) -> Circuit:
    """First-order Trotter circuit: per-term circuits in the decomposition's
    term order, repeated ``n_steps`` times."""
    if n_steps < 1:
        raise ValueError("need at least one Trotter step")
    step: list[Gate] = []
    for string, coeff in decomposition.terms:
        step.extend(synthesize_term(string, coeff, dt, mode))
    return Circuit(decomposition.qubits, tuple(step * n_steps))


def count_gates(circuit: Circuit) -> GateCounts:
    """Tally CNOTs, scaled two-qubit gates, and single-qubit gates."""
    cnot = scaled = single = 0
    for gate in circuit.gates:
        if gate.kind == "CNOT":
            cnot += 1
        elif gate.kind in ("SCALEDRZZ", "SCALEDRZX"):
            scaled += 1
        else:
            single += 1
    return GateCounts(cnot, scaled, single)


def circuit_to_text(circuit: Circuit) -> str:
    """Line-based serialization: ``KIND [angle] qubit [qubit]`` per gate."""
    lines = [f"QUBITS {circuit.qubits}"]
    for gate in circuit.gates:
        fields = [gate.kind]
        if gate.angle is not None:
            fields.append(repr(gate.angle))
        fields.extend(str(q) for q in gate.qubits)
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str) -> Circuit:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("QUBITS "):
        raise ValueError("circuit text must start with a QUBITS line")
    qubits = int(lines[0].split()[1])
    gates = []
    for line in lines[1:]:
        fields = line.split()
        kind = fields[0]
        if kind not in _GATE_SHAPE:
            raise ValueError(f"unknown gate kind {kind!r}")
        has_angle, arity = _GATE_SHAPE[kind]
        angle = float(fields[1]) if has_angle else None
        targets = tuple(int(f) for f in fields[1 + has_angle:])
        if len(targets) != arity:
            raise ValueError(f"bad field count in line {line!r}")
        gates.append(Gate(kind, targets, angle))
    return Circuit(qubits, tuple(gates))
