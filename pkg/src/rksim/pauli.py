"""Pauli-basis decomposition of the embedded effective Hamiltonian.

The d-dimensional reduced Hamiltonian is zero-padded into the top-left
block of a 2^Q x 2^Q matrix (Q = ceil(log2 d)), with orbit ``a`` mapped to
the computational basis state whose bitstring is ``a`` in binary, most
significant qubit first.  Zero padding keeps the dynamics supported on the
physical block and fixes the identity-string coefficient to trace / 2^Q.

The decomposition coefficient of a Pauli string P is Tr(P M) / 2^Q; for a
Hermitian input all coefficients are real, and for the real symmetric
matrices produced by the reduction only strings with an even number of Y
letters survive.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .reduction import EffectiveHamiltonian

__all__ = [
    "PauliDecomposition",
    "PAULI_MATRICES",
    "pauli_matrix",
    "string_weight",
    "embed",
    "decompose",
    "decompose_hamiltonian",
    "reconstruct",
]

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]]),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

_PAULI_STACK = np.stack([PAULI_MATRICES[letter] for letter in "IXYZ"])


def pauli_matrix(string: str) -> np.ndarray:
    """Dense matrix of a Pauli string, first letter on the most significant qubit."""
    return reduce(np.kron, (PAULI_MATRICES[letter] for letter in string))


def string_weight(string: str) -> int:
    return sum(letter != "I" for letter in string)


@dataclass(frozen=True)
class PauliDecomposition:
    """Thresholded weighted Pauli strings reproducing a Hermitian matrix."""

    terms: tuple[tuple[str, float], ...]
    qubits: int
    threshold: float

    def __len__(self) -> int:
        return len(self.terms)

    def coefficients(self) -> dict[str, float]:
        return dict(self.terms)

    def to_dict(self) -> dict:
        return {
            "qubits": self.qubits,
            "threshold": self.threshold,
            "n_terms": len(self.terms),
            "terms": [{"string": s, "coefficient": c} for s, c in self.terms],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def reconstruct(self) -> np.ndarray:
        return reconstruct(self)


def embed(hamiltonian: EffectiveHamiltonian) -> np.ndarray:
    """Zero-pad the reduced matrix into the top-left block of 2^Q dimensions."""
    dim = hamiltonian.dim
    padded = np.zeros((1 << hamiltonian.qubits,) * 2)
    padded[:dim, :dim] = hamiltonian.matrix
    return padded


def decompose(matrix: np.ndarray, threshold: float = 1e-10) -> PauliDecomposition:
    """Expand a Hermitian matrix in the Pauli-string basis.

    Coefficients are Tr(P M) / 2^Q, computed by contracting one qubit at a
    time rather than materializing all 4^Q string matrices.  Terms with
    |coefficient| <= threshold are dropped; the rest are kept in the
    lexicographic string order I < X < Y < Z.
    """
    matrix = np.asarray(matrix)
    d = matrix.shape[0]
    if matrix.ndim != 2 or matrix.shape[1] != d or d & (d - 1) or d < 2:
        raise ValueError("expected a square matrix of power-of-two dimension")
    if np.max(np.abs(matrix - matrix.conj().T)) > 1e-10:
        raise ValueError("matrix must be Hermitian")
    q = d.bit_length() - 1

    # Invariant: after k iterations the array has k leading string axes of
    # size 4, then the remaining row-bit axes, then the remaining col-bit
    # axes.  Each step traces one qubit against the four Pauli matrices.
    cur = matrix.reshape((2,) * (2 * q)).astype(complex)
    for k in range(q):
        cur = np.tensordot(cur, _PAULI_STACK, axes=([k, q], [2, 1]))
        cur = np.moveaxis(cur, -1, k)
    coeffs = cur.reshape(-1) / d
    if np.max(np.abs(coeffs.imag)) > 1e-9:
        raise AssertionError("non-real Pauli coefficients for Hermitian input")

    terms = tuple(
        ("".join(letters), float(c))
        for letters, c in zip(itertools.product("IXYZ", repeat=q), coeffs.real)
        if abs(c) > threshold
    )
    return PauliDecomposition(terms, q, threshold)


def decompose_hamiltonian(hamiltonian: EffectiveHamiltonian,
                          threshold: float = 1e-10) -> PauliDecomposition:
    """Embed and decompose a reduced Hamiltonian in one go."""
    return decompose(embed(hamiltonian), threshold)


def reconstruct(decomposition: PauliDecomposition) -> np.ndarray:
    """Dense matrix sum of the weighted Pauli strings."""
    dim = 1 << decomposition.qubits
    out = np.zeros((dim, dim), dtype=complex)
    for string, coeff in decomposition.terms:
        out += coeff * pauli_matrix(string)
    return out
