"""Circuit data model.

A :class:`QuantumCircuit` is an immutable value: every operation here returns
a new circuit and leaves its argument untouched. Qubits and classical bits are
plain integer indices.

Instructions come in three kinds:

``gate``
    A member of the mutable catalog; the only kind the mutation operators
    touch.
``placeholder``
    A named, immutable slot reserved for an input block or subroutine, to be
    substituted later.
``opaque``
    Any other named instruction (``barrier`` from imported QASM, for
    instance). Kept in place, never mutated.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    AmbiguousPlaceholder,
    InvalidCircuit,
    InvalidInstruction,
    InvalidPosition,
    InvalidSubstitution,
    PlaceholderNotFound,
)
from .gates import CATALOG

GATE = "gate"
PLACEHOLDER = "placeholder"
OPAQUE = "opaque"
KINDS = (GATE, PLACEHOLDER, OPAQUE)

DEFAULT_PLACEHOLDER_NAME = "Input"


@dataclass(frozen=True)
class Instruction:
    kind: str
    name: str
    qubits: tuple[int, ...]
    clbits: tuple[int, ...] = ()
    params: tuple[float, ...] = ()
    label: str | None = None

    @property
    def is_gate(self) -> bool:
        return self.kind == GATE

    @property
    def is_placeholder(self) -> bool:
        return self.kind == PLACEHOLDER

    def replace(self, **changes) -> "Instruction":
        fields = {
            "kind": self.kind,
            "name": self.name,
            "qubits": self.qubits,
            "clbits": self.clbits,
            "params": self.params,
            "label": self.label,
        }
        fields.update(changes)
        return make_instruction(**fields)

    def __str__(self) -> str:
        args = ""
        if self.params:
            args = "(" + ",".join(f"{p:.3f}" for p in self.params) + ")"
        qubits = ",".join(f"q{q}" for q in self.qubits)
        if self.kind == PLACEHOLDER:
            return f"<{self.name}> {qubits}"
        return f"{self.name}{args} {qubits}"


def make_instruction(
    kind: str,
    name: str,
    qubits: Iterable[int],
    clbits: Iterable[int] = (),
    params: Iterable[float] = (),
    label: str | None = None,
) -> Instruction:
    return Instruction(
        kind=kind,
        name=name,
        qubits=tuple(int(q) for q in qubits),
        clbits=tuple(int(c) for c in clbits),
        params=tuple(float(p) for p in params),
        label=label,
    )


def gate(name: str, qubits: Sequence[int] | int, params: Sequence[float] = ()) -> Instruction:
    if isinstance(qubits, int):
        qubits = (qubits,)
    return make_instruction(GATE, name, qubits, (), params)


def placeholder(
    qubits: Sequence[int] | int,
    name: str = DEFAULT_PLACEHOLDER_NAME,
    label: str | None = None,
) -> Instruction:
    if isinstance(qubits, int):
        qubits = (qubits,)
    if label is None:
        label = f"  {name}  "
    return make_instruction(PLACEHOLDER, name, qubits, (), (), label)


def opaque(
    name: str,
    qubits: Sequence[int],
    clbits: Sequence[int] = (),
    params: Sequence[float] = (),
) -> Instruction:
    return make_instruction(OPAQUE, name, qubits, clbits, params)


@dataclass(frozen=True)
class QuantumCircuit:
    name: str
    num_qubits: int
    num_clbits: int = 0
    instructions: tuple[Instruction, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __getitem__(self, index: int) -> Instruction:
        return self.instructions[index]

    def with_instructions(self, instructions: Iterable[Instruction]) -> "QuantumCircuit":
        return QuantumCircuit(self.name, self.num_qubits, self.num_clbits, tuple(instructions))

    @property
    def placeholders(self) -> list[tuple[int, Instruction]]:
        return [(i, ins) for i, ins in enumerate(self.instructions) if ins.is_placeholder]

    def __str__(self) -> str:
        lines = [f"{self.name}: {self.num_qubits} qubits, {self.num_clbits} clbits"]
        lines += [f"  [{i}] {ins}" for i, ins in enumerate(self.instructions)]
        return "\n".join(lines)


def new_circuit(name: str, num_qubits: int, num_clbits: int = 0) -> QuantumCircuit:
    if num_qubits < 1:
        raise InvalidCircuit(f"circuit needs at least one qubit, got {num_qubits}")
    if num_clbits < 0:
        raise InvalidCircuit(f"negative clbit count {num_clbits}")
    return QuantumCircuit(name, int(num_qubits), int(num_clbits), ())


def build_circuit(
    name: str,
    num_qubits: int,
    ops: Iterable[Instruction | tuple],
    num_clbits: int = 0,
) -> QuantumCircuit:
    """Build and validate a circuit in one go.

    ``ops`` may mix :class:`Instruction` objects with ``(name, qubits)`` or
    ``(name, qubits, params)`` tuples for catalog gates.
    """
    instructions = []
    for op in ops:
        if not isinstance(op, Instruction):
            op = gate(*op)
        instructions.append(op)
    circuit = new_circuit(name, num_qubits, num_clbits).with_instructions(instructions)
    problems = validate(circuit)
    if problems:
        raise InvalidInstruction("; ".join(problems))
    return circuit


def _instruction_problems(ins: Instruction, num_qubits: int, num_clbits: int) -> list[str]:
    problems = []
    if ins.kind not in KINDS:
        problems.append(f"unknown instruction kind {ins.kind!r}")
        return problems
    if len(set(ins.qubits)) != len(ins.qubits):
        problems.append(f"duplicate qubit in {ins.name} {ins.qubits}")
    if len(set(ins.clbits)) != len(ins.clbits):
        problems.append(f"duplicate clbit in {ins.name} {ins.clbits}")
    if any(q < 0 or q >= num_qubits for q in ins.qubits):
        problems.append(f"qubit index out of range in {ins.name} {ins.qubits}")
    if any(c < 0 or c >= num_clbits for c in ins.clbits):
        problems.append(f"clbit index out of range in {ins.name} {ins.clbits}")
    if ins.kind == GATE:
        if ins.name not in CATALOG:
            problems.append(f"unknown gate {ins.name!r}")
            return problems
        spec = CATALOG.spec(ins.name)
        if spec.num_qubits > num_qubits:
            problems.append(
                f"arity exceeds circuit width: {ins.name} needs {spec.num_qubits} "
                f"qubits, circuit has {num_qubits}"
            )
        if len(ins.qubits) != spec.num_qubits:
            problems.append(
                f"{ins.name} acts on {spec.num_qubits} qubit(s), got {len(ins.qubits)}"
            )
        if len(ins.params) != spec.num_params:
            problems.append(
                f"{ins.name} takes {spec.num_params} parameter(s), got {len(ins.params)}"
            )
        if ins.clbits:
            problems.append(f"{ins.name} is purely quantum but has clbits")
    elif ins.kind == PLACEHOLDER:
        if ins.params:
            problems.append(f"placeholder {ins.name!r} carries parameters")
        if not ins.qubits:
            problems.append(f"placeholder {ins.name!r} spans no qubits")
    return problems


def validate(circuit: QuantumCircuit) -> list[str]:
    """Return every invariant violation in ``circuit``; empty means valid."""
    problems = []
    if circuit.num_qubits < 1:
        problems.append("circuit has no qubits")
    if circuit.num_clbits < 0:
        problems.append("negative clbit count")
    for i, ins in enumerate(circuit.instructions):
        problems += [f"[{i}] {p}" for p in _instruction_problems(ins, circuit.num_qubits, circuit.num_clbits)]
    return problems


def _check(ins: Instruction, circuit: QuantumCircuit) -> None:
    problems = _instruction_problems(ins, circuit.num_qubits, circuit.num_clbits)
    if problems:
        raise InvalidInstruction("; ".join(problems))


def append(circuit: QuantumCircuit, instr: Instruction) -> QuantumCircuit:
    _check(instr, circuit)
    return circuit.with_instructions(circuit.instructions + (instr,))


def insert(circuit: QuantumCircuit, position: int, instr: Instruction) -> QuantumCircuit:
    if not 0 <= position <= len(circuit):
        raise InvalidPosition(f"position {position} outside [0, {len(circuit)}]")
    _check(instr, circuit)
    ins = circuit.instructions
    return circuit.with_instructions(ins[:position] + (instr,) + ins[position:])


def insert_placeholder(
    circuit: QuantumCircuit,
    position: int,
    name: str = DEFAULT_PLACEHOLDER_NAME,
    qubits: Sequence[int] | int = (0,),
    label: str | None = None,
) -> QuantumCircuit:
    return insert(circuit, position, placeholder(qubits, name, label))


def substitute_placeholder(
    circuit: QuantumCircuit, name: str, body: QuantumCircuit
) -> QuantumCircuit:
    """Replace the placeholder called ``name`` by the instructions of ``body``.

    Body qubit ``i`` lands on the placeholder's ``i``-th qubit.
    """
    matches = [(i, ins) for i, ins in circuit.placeholders if ins.name == name]
    if not matches:
        raise PlaceholderNotFound(f"no placeholder named {name!r}")
    if len(matches) > 1:
        raise AmbiguousPlaceholder(f"{len(matches)} placeholders named {name!r}")
    pos, slot = matches[0]
    if body.num_qubits != len(slot.qubits):
        raise InvalidSubstitution(
            f"placeholder {name!r} spans {len(slot.qubits)} qubit(s), "
            f"body has {body.num_qubits}"
        )
    if body.num_clbits > circuit.num_clbits:
        raise InvalidSubstitution("body uses more clbits than the host circuit")
    remapped = []
    for ins in body.instructions:
        new = ins.replace(qubits=tuple(slot.qubits[q] for q in ins.qubits))
        _check(new, circuit)
        remapped.append(new)
    ins = circuit.instructions
    return circuit.with_instructions(ins[:pos] + tuple(remapped) + ins[pos + 1 :])


def is_mutable(ins: Instruction) -> bool:
    return ins.kind == GATE and ins.name in CATALOG


def mutable_gate_indexes(circuit: QuantumCircuit) -> list[int]:
    return [i for i, ins in enumerate(circuit.instructions) if is_mutable(ins)]


def _float_bits(values: tuple[float, ...]) -> bytes:
    return struct.pack(f"<{len(values)}d", *values)


def instructions_equal(a: Instruction, b: Instruction) -> bool:
    return (
        a.kind == b.kind
        and a.name == b.name
        and a.qubits == b.qubits
        and a.clbits == b.clbits
        and len(a.params) == len(b.params)
        and _float_bits(a.params) == _float_bits(b.params)
    )


def circuits_equal(a: QuantumCircuit, b: QuantumCircuit) -> bool:
    """Structural equality with bitwise-exact parameter comparison.

    Names and display labels are ignored: two circuits are equal when they
    would act identically on identical registers.
    """
    if a.num_qubits != b.num_qubits or a.num_clbits != b.num_clbits:
        return False
    if len(a) != len(b):
        return False
    return all(instructions_equal(x, y) for x, y in zip(a.instructions, b.instructions))
