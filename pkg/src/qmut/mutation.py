"""Random, correct-by-construction mutant generation.

Four first-order operators are available:

* ``insert``   -- add one catalog gate at one of the ``N + 1`` gaps
* ``delete``   -- drop one mutable gate
* ``rename``   -- swap a gate for another member of its equivalence class
* ``retarget`` -- redraw a gate's qubits and parameters

Each mutant is produced by drawing an operator uniformly, then a target
position. When the operator cannot apply at the chosen target (a singleton
class for ``rename``, no freedom left for ``retarget``) a fresh operator and
target are drawn. A mutant structurally equal to the original is rebuilt.
Placeholders and opaque instructions are never targeted; they only shift by
one position when a gate is inserted before them or deleted before them.
"""

from __future__ import annotations

import enum
import random
import time
from collections import Counter
from dataclasses import dataclass, field, replace
from math import perm, pi
from typing import Callable, Iterator, Optional

from ._version import __version__
from .circuit import (
    Instruction,
    QuantumCircuit,
    circuits_equal,
    gate,
    is_mutable,
    mutable_gate_indexes,
    validate,
)
from .errors import (
    IllegalTarget,
    InvalidArgument,
    InvalidCircuit,
    MutationError,
    NoAttributeFreedom,
    RetryExhausted,
    SingletonClass,
)
from .gates import CATALOG, class_members
from .seeding import derive_seed

MAX_ATTEMPTS = 100


class Operator(str, enum.Enum):
    INSERT = "insert"
    DELETE = "delete"
    RENAME = "rename"
    RETARGET = "retarget"

    def __str__(self) -> str:
        return self.value


OPERATORS = tuple(Operator)


@dataclass(frozen=True)
class MutationRecord:
    """Provenance of one mutant.

    ``index`` is the gap index for ``insert`` and the instruction index for
    the other operators, both relative to the original circuit.
    """

    operator: Operator
    index: int
    before: Optional[Instruction] = None
    after: Optional[Instruction] = None
    mutant_id: int = 0
    seed_used: Optional[int] = None


@dataclass
class GenerationReport:
    circuit_name: str
    num_mutants: int
    seed: int
    elapsed_seconds: float
    operator_histogram: dict[str, int] = field(default_factory=dict)
    tool_version: str = __version__

    def as_dict(self) -> dict:
        return {
            "circuit_name": self.circuit_name,
            "num_mutants": self.num_mutants,
            "seed": self.seed,
            "elapsed_seconds": self.elapsed_seconds,
            "mean_seconds_per_mutant": self.elapsed_seconds / max(self.num_mutants, 1),
            "operator_histogram": dict(self.operator_histogram),
            "tool_version": self.tool_version,
        }


def _uniform_angle(rng: random.Random) -> float:
    # [-pi, pi)
    return -pi + 2.0 * pi * rng.random()


def _insertion_classes(num_qubits: int) -> tuple[list[tuple[str, ...]], list[int]]:
    members = [m for key, m in CATALOG.classes.items() if key.n <= num_qubits]
    return members, [len(m) for m in members]


def op_insert(
    circuit: QuantumCircuit, gap: int, rng: random.Random
) -> tuple[QuantumCircuit, MutationRecord]:
    if not 0 <= gap <= len(circuit):
        raise IllegalTarget(f"gap {gap} outside [0, {len(circuit)}]")
    # Class weights proportional to class size make every gate equally likely.
    classes, weights = _insertion_classes(circuit.num_qubits)
    members = rng.choices(classes, weights=weights)[0]
    name = rng.choice(members)
    spec = CATALOG.spec(name)
    qubits = rng.sample(range(circuit.num_qubits), spec.num_qubits)
    params = [_uniform_angle(rng) for _ in range(spec.num_params)]
    new = gate(name, qubits, params)
    ins = circuit.instructions
    mutant = circuit.with_instructions(ins[:gap] + (new,) + ins[gap:])
    return mutant, MutationRecord(Operator.INSERT, gap, None, new)


def _target(circuit: QuantumCircuit, index: int) -> Instruction:
    if not 0 <= index < len(circuit) or not is_mutable(circuit[index]):
        raise IllegalTarget(f"instruction {index} is not a mutable gate")
    return circuit[index]


def op_delete(circuit: QuantumCircuit, index: int) -> tuple[QuantumCircuit, MutationRecord]:
    old = _target(circuit, index)
    ins = circuit.instructions
    mutant = circuit.with_instructions(ins[:index] + ins[index + 1 :])
    return mutant, MutationRecord(Operator.DELETE, index, old, None)


def _replaced(circuit: QuantumCircuit, index: int, new: Instruction) -> QuantumCircuit:
    ins = circuit.instructions
    return circuit.with_instructions(ins[:index] + (new,) + ins[index + 1 :])


def op_rename(
    circuit: QuantumCircuit, index: int, rng: random.Random
) -> tuple[QuantumCircuit, MutationRecord]:
    old = _target(circuit, index)
    choices = [m for m in class_members(CATALOG.spec(old.name).class_key) if m != old.name]
    if not choices:
        raise SingletonClass(f"{old.name} has no equivalent gate to rename to")
    new = old.replace(name=rng.choice(choices))
    return _replaced(circuit, index, new), MutationRecord(Operator.RENAME, index, old, new)


def op_retarget(
    circuit: QuantumCircuit, index: int, rng: random.Random
) -> tuple[QuantumCircuit, MutationRecord]:
    old = _target(circuit, index)
    spec = CATALOG.spec(old.name)
    if spec.num_params == 0 and perm(circuit.num_qubits, spec.num_qubits) < 2:
        raise NoAttributeFreedom(
            f"{old.name} has no parameters and no other qubit placement "
            f"in a {circuit.num_qubits}-qubit circuit"
        )
    for _ in range(MAX_ATTEMPTS):
        qubits = tuple(rng.sample(range(circuit.num_qubits), spec.num_qubits))
        params = tuple(_uniform_angle(rng) for _ in range(spec.num_params))
        if qubits != old.qubits or params != old.params:
            new = old.replace(qubits=qubits, params=params)
            return _replaced(circuit, index, new), MutationRecord(
                Operator.RETARGET, index, old, new
            )
    raise NoAttributeFreedom(f"could not draw new attributes for {old.name}")


def _apply(
    op: Operator, circuit: QuantumCircuit, index: int, rng: random.Random
) -> tuple[QuantumCircuit, MutationRecord]:
    if op is Operator.INSERT:
        return op_insert(circuit, index, rng)
    if op is Operator.DELETE:
        return op_delete(circuit, index)
    if op is Operator.RENAME:
        return op_rename(circuit, index, rng)
    return op_retarget(circuit, index, rng)


def mutate_once(
    circuit: QuantumCircuit,
    rng: random.Random,
    mutable: Optional[list[int]] = None,
) -> tuple[QuantumCircuit, MutationRecord]:
    """Produce one mutant that differs from ``circuit``.

    ``mutable`` may be passed to skip recomputing the mutable index set.
    """
    if mutable is None:
        mutable = mutable_gate_indexes(circuit)
    attempts = 0
    while attempts < MAX_ATTEMPTS:
        attempts += 1
        if mutable:
            op = rng.choice(OPERATORS)
        else:
            op = Operator.INSERT
        if op is Operator.INSERT:
            index = rng.randrange(len(circuit) + 1)
        else:
            index = rng.choice(mutable)
        try:
            mutant, record = _apply(op, circuit, index, rng)
        except MutationError:
            continue
        # "Equal?" loop: rebuild with the same operator and target.
        while circuits_equal(mutant, circuit) and attempts < MAX_ATTEMPTS:
            attempts += 1
            mutant, record = _apply(op, circuit, index, rng)
        if not circuits_equal(mutant, circuit):
            return mutant, record
    raise RetryExhausted(
        f"no distinct mutant of {circuit.name!r} after {MAX_ATTEMPTS} attempts"
    )


def iter_mutants(
    circuit: QuantumCircuit, count: int, seed: int
) -> Iterator[tuple[QuantumCircuit, MutationRecord]]:
    """Yield ``count`` mutants; mutant ids are 1-based.

    Mutant ``k`` is drawn from its own PRNG seeded with
    ``derive_seed(seed, k)``, so any single mutant can be regenerated alone.
    """
    if count < 1:
        raise InvalidArgument(f"count must be >= 1, got {count}")
    problems = validate(circuit)
    if problems:
        raise InvalidCircuit("; ".join(problems))
    mutable = mutable_gate_indexes(circuit)
    for mutant_id in range(1, count + 1):
        seed_used = derive_seed(seed, mutant_id)
        mutant, record = mutate_once(circuit, random.Random(seed_used), mutable)
        yield mutant, replace(record, mutant_id=mutant_id, seed_used=seed_used)


def generate_mutants(
    circuit: QuantumCircuit,
    count: int,
    seed: int,
    sink: Optional[Callable[[QuantumCircuit, MutationRecord], object]] = None,
) -> GenerationReport:
    histogram: Counter = Counter()
    start = time.perf_counter()
    for mutant, record in iter_mutants(circuit, count, seed):
        histogram[record.operator.value] += 1
        if sink is not None:
            sink(mutant, record)
    elapsed = time.perf_counter() - start
    return GenerationReport(
        circuit_name=circuit.name,
        num_mutants=count,
        seed=seed,
        elapsed_seconds=elapsed,
        operator_histogram={op.value: histogram[op.value] for op in OPERATORS},
    )


def apply_record(circuit: QuantumCircuit, record: MutationRecord) -> QuantumCircuit:
    """Replay ``record`` against ``circuit``."""
    ins = circuit.instructions
    i = record.index
    if record.operator is Operator.INSERT:
        return circuit.with_instructions(ins[:i] + (record.after,) + ins[i:])
    if record.operator is Operator.DELETE:
        return circuit.with_instructions(ins[:i] + ins[i + 1 :])
    return _replaced(circuit, i, record.after)
