"""Dense statevector simulation with seeded shot sampling.

Basis states are labelled little-endian: qubit 0 is the least significant
bit, so in a bitstring label it is the rightmost character.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

import numpy as np

from ._version import __version__
from .circuit import OPAQUE, PLACEHOLDER, QuantumCircuit, gate
from .errors import InvalidArgument, PlaceholderPresent, TooManyQubits, UnknownGate
from .gates import CATALOG, _readonly_unitary
from .seeding import derive_seed

MAX_QUBITS = 16
SIMULATOR_VERSION = f"qmut-statevector/{__version__}"

# Opaque instructions the simulator may skip.
_NO_OPS = frozenset({"barrier"})


@dataclass(frozen=True)
class Statevector:
    amplitudes: np.ndarray
    num_qubits: int

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def probabilities_dict(self, cutoff: float = 1e-12) -> dict[str, float]:
        probs = self.probabilities()
        return {
            index_to_bits(i, self.num_qubits): float(p)
            for i, p in enumerate(probs)
            if p > cutoff
        }


@dataclass(frozen=True)
class CountsDistribution:
    shots: int
    counts: dict[str, int]

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise InvalidArgument("counts do not sum to shots")
        if len({len(k) for k in self.counts}) > 1:
            raise InvalidArgument("bitstring keys differ in length")

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "CountsDistribution":
        counts = {k: int(v) for k, v in counts.items()}
        return cls(sum(counts.values()), counts)


def index_to_bits(index: int, num_qubits: int) -> str:
    return format(index, f"0{num_qubits}b")


def bits_to_index(bits: str) -> int:
    return int(bits, 2)


def all_inputs(num_qubits: int) -> list[str]:
    return [index_to_bits(i, num_qubits) for i in range(2**num_qubits)]


def apply_matrix(
    state: np.ndarray, matrix: np.ndarray, qubits: tuple[int, ...], num_qubits: int
) -> np.ndarray:
    """Apply a ``2^k x 2^k`` matrix on ``qubits`` of a flat state vector."""
    k = len(qubits)
    psi = state.reshape([2] * num_qubits)
    # tensor axis a holds qubit num_qubits - 1 - a
    axes = [num_qubits - 1 - q for q in reversed(qubits)]
    op = matrix.reshape([2] * (2 * k))
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return out.reshape(-1)


def run_statevector(
    circuit: QuantumCircuit,
    input_bits: Optional[str] = None,
    identity_placeholders: bool = False,
) -> Statevector:
    n = circuit.num_qubits
    if n > MAX_QUBITS:
        raise TooManyQubits(f"{n} qubits exceeds the dense limit of {MAX_QUBITS}")
    if input_bits is None:
        input_bits = "0" * n
    if len(input_bits) != n or set(input_bits) - {"0", "1"}:
        raise InvalidArgument(f"input {input_bits!r} is not a {n}-bit string")
    state = np.zeros(2**n, dtype=complex)
    state[bits_to_index(input_bits)] = 1.0
    for ins in circuit.instructions:
        if ins.kind == PLACEHOLDER:
            if identity_placeholders:
                continue
            raise PlaceholderPresent(f"unsubstituted placeholder {ins.name!r}")
        if ins.kind == OPAQUE:
            if ins.name in _NO_OPS:
                continue
            raise UnknownGate(f"cannot simulate {ins.name!r}")
        if ins.name not in CATALOG:
            raise UnknownGate(f"cannot simulate {ins.name!r}")
        state = apply_matrix(state, _readonly_unitary(ins.name, ins.params), ins.qubits, n)
    return Statevector(state, n)


def sample_counts(state: Statevector, shots: int, seed: int) -> CountsDistribution:
    if shots < 1:
        raise InvalidArgument("shots must be >= 1")
    probs = state.probabilities()
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, probs)
    counts = {
        index_to_bits(int(i), state.num_qubits): int(draws[i]) for i in np.flatnonzero(draws)
    }
    return CountsDistribution(shots, counts)


def prepare_input(circuit: QuantumCircuit, input_bits: str) -> QuantumCircuit:
    """Prefix X gates on the set bits of ``input_bits``."""
    n = circuit.num_qubits
    flips = tuple(gate("x", q) for q in range(n) if input_bits[n - 1 - q] == "1")
    return circuit.with_instructions(flips + circuit.instructions)


def run_all_inputs(
    circuit: QuantumCircuit,
    shots: int,
    seed: int,
    inputs: Optional[Iterable[str]] = None,
    mutant_id: int = 0,
) -> dict[str, CountsDistribution]:
    """Simulate ``circuit`` on each basis input and sample ``shots`` outcomes.

    Each input gets its own sampling seed derived from
    ``(seed, input index, mutant_id)``.
    """
    n = circuit.num_qubits
    if n > MAX_QUBITS:
        raise TooManyQubits(f"{n} qubits exceeds the dense limit of {MAX_QUBITS}")
    inputs = all_inputs(n) if inputs is None else list(inputs)
    results = {}
    for bits in inputs:
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise InvalidArgument(f"input {bits!r} is not a {n}-bit string")
        state = run_statevector(prepare_input(circuit, bits))
        results[bits] = sample_counts(state, shots, derive_seed(seed, bits_to_index(bits), mutant_id))
    return results
