"""Mutant files, OpenQASM 2.0 interchange and report writing.

Mutant files (``.qcz``) are gzip-compressed canonical JSON::

    {"format_version": 1,
     "circuit": {"name", "num_qubits", "num_clbits", "instructions": [...]},
     "record": {...} | null}

Identical inputs always produce identical bytes: keys are emitted in a fixed
order, floats use their shortest round-trip representation, and the gzip
header carries no timestamp or file name.
"""

from __future__ import annotations

import ast
import gzip
import json
import math
import operator
import re
import zlib
from pathlib import Path
from typing import Optional

from .circuit import (
    GATE,
    KINDS,
    OPAQUE,
    PLACEHOLDER,
    Instruction,
    QuantumCircuit,
    make_instruction,
    validate,
)
from .errors import InvalidCircuit, LoadError, UnsupportedQasm
from .gates import CATALOG
from .mutation import GenerationReport, MutationRecord, Operator

FORMAT_VERSION = 1
MUTANT_SUFFIX = ".qcz"
ORIGINAL_FILE = "original" + MUTANT_SUFFIX
PLACEHOLDER_PRAGMA = "// QCRMUT-PLACEHOLDER"


# -- JSON documents -----------------------------------------------------------


def instruction_to_dict(ins: Instruction) -> dict:
    return {
        "kind": ins.kind,
        "name": ins.name,
        "qubits": list(ins.qubits),
        "clbits": list(ins.clbits),
        "params": list(ins.params),
        "label": ins.label,
    }


def instruction_from_dict(data: dict) -> Instruction:
    if data["kind"] not in KINDS:
        raise ValueError(f"unknown instruction kind {data['kind']!r}")
    return make_instruction(
        data["kind"],
        data["name"],
        data["qubits"],
        data.get("clbits", ()),
        data.get("params", ()),
        data.get("label"),
    )


def circuit_to_dict(circuit: QuantumCircuit) -> dict:
    return {
        "name": circuit.name,
        "num_qubits": circuit.num_qubits,
        "num_clbits": circuit.num_clbits,
        "instructions": [instruction_to_dict(i) for i in circuit.instructions],
    }


def circuit_from_dict(data: dict) -> QuantumCircuit:
    return QuantumCircuit(
        str(data["name"]),
        int(data["num_qubits"]),
        int(data["num_clbits"]),
        tuple(instruction_from_dict(i) for i in data["instructions"]),
    )


def record_to_dict(record: MutationRecord) -> dict:
    return {
        "operator": record.operator.value,
        "index": record.index,
        "before": None if record.before is None else instruction_to_dict(record.before),
        "after": None if record.after is None else instruction_to_dict(record.after),
        "mutant_id": record.mutant_id,
        "seed_used": record.seed_used,
    }


def record_from_dict(data: dict) -> MutationRecord:
    return MutationRecord(
        operator=Operator(data["operator"]),
        index=int(data["index"]),
        before=None if data.get("before") is None else instruction_from_dict(data["before"]),
        after=None if data.get("after") is None else instruction_from_dict(data["after"]),
        mutant_id=int(data.get("mutant_id", 0)),
        seed_used=data.get("seed_used"),
    )


def canonical_json(obj) -> bytes:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True, allow_nan=False).encode("ascii")


def mutant_bytes(circuit: QuantumCircuit, record: Optional[MutationRecord]) -> bytes:
    doc = {
        "format_version": FORMAT_VERSION,
        "circuit": circuit_to_dict(circuit),
        "record": None if record is None else record_to_dict(record),
    }
    return gzip.compress(canonical_json(doc), compresslevel=9, mtime=0)


def save_mutant(
    circuit: QuantumCircuit, record: Optional[MutationRecord], path: str | Path
) -> int:
    problems = validate(circuit)
    if problems:
        raise InvalidCircuit("; ".join(problems))
    data = mutant_bytes(circuit, record)
    path = Path(path)
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise OSError(f"cannot write mutant file {path}: {exc}") from exc
    return len(data)


def load_mutant(path: str | Path) -> tuple[QuantumCircuit, Optional[MutationRecord]]:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise LoadError(str(exc), "read", path) from exc
    try:
        text = gzip.decompress(raw)
    except (OSError, EOFError, zlib.error) as exc:
        raise LoadError(f"not a gzip stream: {exc}", "gzip", path) from exc
    try:
        doc = json.loads(text)
        if doc.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {doc.get('format_version')!r}")
        circuit = circuit_from_dict(doc["circuit"])
        record = None if doc.get("record") is None else record_from_dict(doc["record"])
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise LoadError(f"malformed document: {exc}", "json", path) from exc
    problems = validate(circuit)
    if problems:
        raise LoadError("; ".join(problems), "validate", path)
    return circuit, record


def load_circuit(path: str | Path) -> QuantumCircuit:
    """Load a circuit from a ``.qcz`` mutant file or an OpenQASM 2.0 file."""
    path = Path(path)
    if path.suffix == MUTANT_SUFFIX:
        return load_mutant(path)[0]
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(str(exc), "read", path) from exc
    return import_qasm(text, name=path.stem)


# -- OpenQASM 2.0 subset ------------------------------------------------------


def _fmt_float(x: float) -> str:
    return format(x, ".17g")


def export_qasm(circuit: QuantumCircuit, qreg: str = "q", creg: str = "c") -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg {qreg}[{circuit.num_qubits}];"]
    if circuit.num_clbits:
        lines.append(f"creg {creg}[{circuit.num_clbits}];")
    for ins in circuit.instructions:
        qargs = ",".join(f"{qreg}[{q}]" for q in ins.qubits)
        if ins.kind == PLACEHOLDER:
            qubits = ",".join(str(q) for q in ins.qubits)
            if re.search(r"\s", ins.name):
                raise UnsupportedQasm(f"placeholder name {ins.name!r} contains whitespace")
            lines.append(f"{PLACEHOLDER_PRAGMA} name={ins.name} qubits={qubits}")
        elif ins.kind == OPAQUE and ins.name == "barrier":
            lines.append(f"barrier {qargs};")
        elif ins.kind == GATE:
            args = ""
            if ins.params:
                args = "(" + ",".join(_fmt_float(p) for p in ins.params) + ")"
            lines.append(f"{ins.name}{args} {qargs};")
        else:
            raise UnsupportedQasm(f"cannot export instruction {ins.name!r}")
    return "\n".join(lines) + "\n"


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_FUNCS = {"sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp, "ln": math.log, "sqrt": math.sqrt}


def _eval_param(text: str) -> float:
    """Evaluate a QASM parameter expression (numbers, ``pi``, + - * / ^)."""

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
        ):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported expression {text!r}")

    return ev(ast.parse(text.replace("^", "**"), mode="eval").body)


_STMT = re.compile(r"^(?P<name>[a-z][a-z0-9_]*)\s*(?:\((?P<params>[^)]*)\))?\s+(?P<args>.+)$")
_REG = re.compile(r"^(?P<kind>qreg|creg)\s+(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(?P<size>\d+)\s*\]$")
_QARG = re.compile(r"^(?P<reg>[A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(?P<idx>\d+)\s*\]$")
_PRAGMA = re.compile(
    r"^//\s*QCRMUT-PLACEHOLDER\s+name=(?P<name>\S+)\s+qubits=(?P<qubits>\d+(?:\s*,\s*\d+)*)\s*$"
)


def import_qasm(text: str, name: str = "circuit") -> QuantumCircuit:
    qreg: Optional[tuple[str, int]] = None
    creg: Optional[tuple[str, int]] = None
    instructions: list[Instruction] = []
    seen_header = False

    def qubit_index(arg: str, lineno: int) -> list[int]:
        arg = arg.strip()
        if qreg is None:
            raise UnsupportedQasm("gate before qreg declaration", lineno)
        m = _QARG.match(arg)
        if m:
            if m["reg"] != qreg[0]:
                raise UnsupportedQasm(f"unknown register {m['reg']!r}", lineno)
            return [int(m["idx"])]
        if arg == qreg[0]:
            raise UnsupportedQasm("whole-register arguments are not supported", lineno)
        raise UnsupportedQasm(f"cannot parse qubit argument {arg!r}", lineno)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        pragma = _PRAGMA.match(line)
        if pragma:
            qubits = [int(q) for q in pragma["qubits"].split(",")]
            instructions.append(make_instruction(PLACEHOLDER, pragma["name"], qubits, (), (), f"  {pragma['name']}  "))
            continue
        if line.startswith("//QCRMUT") or line.startswith(PLACEHOLDER_PRAGMA):
            raise UnsupportedQasm("malformed placeholder pragma", lineno)
        line = line.split("//", 1)[0].strip()
        if not line:
            continue
        for stmt in (s.strip() for s in line.split(";")):
            if not stmt:
                continue
            if stmt.startswith("OPENQASM"):
                if stmt.split()[-1] not in ("2.0", "2"):
                    raise UnsupportedQasm(f"unsupported version in {stmt!r}", lineno)
                seen_header = True
                continue
            if stmt.startswith("include"):
                continue
            reg = _REG.match(stmt)
            if reg:
                size = int(reg["size"])
                if reg["kind"] == "qreg":
                    if qreg is not None:
                        raise UnsupportedQasm("only one quantum register is supported", lineno)
                    qreg = (reg["name"], size)
                else:
                    if creg is not None:
                        raise UnsupportedQasm("only one classical register is supported", lineno)
                    creg = (reg["name"], size)
                continue
            m = _STMT.match(stmt)
            if not m:
                raise UnsupportedQasm(f"cannot parse statement {stmt!r}", lineno)
            gname = m["name"]
            if gname in ("measure", "reset", "if", "gate", "opaque"):
                raise UnsupportedQasm(f"{gname!r} is outside the supported subset", lineno)
            qubits = [q for a in m["args"].split(",") for q in qubit_index(a, lineno)]
            if gname == "barrier":
                if m["params"] is not None:
                    raise UnsupportedQasm("barrier takes no parameters", lineno)
                instructions.append(make_instruction(OPAQUE, "barrier", qubits))
                continue
            if gname not in CATALOG:
                raise UnsupportedQasm(f"unknown gate {gname!r}", lineno)
            params = []
            if m["params"] is not None and m["params"].strip():
                try:
                    params = [_eval_param(p.strip()) for p in m["params"].split(",")]
                except (ValueError, SyntaxError, ZeroDivisionError) as exc:
                    raise UnsupportedQasm(str(exc), lineno) from None
            instructions.append(make_instruction(GATE, gname, qubits, (), params))
    if not seen_header:
        raise UnsupportedQasm("missing OPENQASM 2.0 header", 1)
    if qreg is None:
        raise UnsupportedQasm("no quantum register declared")
    circuit = QuantumCircuit(name, qreg[1], 0 if creg is None else creg[1], tuple(instructions))
    problems = validate(circuit)
    if problems:
        raise UnsupportedQasm("; ".join(problems))
    return circuit


# -- generation output ----------------------------------------------------------


def mutant_filename(mutant_id: int) -> str:
    return f"mutant_{mutant_id:06d}{MUTANT_SUFFIX}"


def mutant_dir(out_dir: str | Path, circuit_name: str) -> Path:
    return Path(out_dir) / circuit_name


class MutantWriter:
    """Sink for the generation loop: one ``.qcz`` file per mutant."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.bytes_written = 0
        self.files = 0

    def __call__(self, circuit: QuantumCircuit, record: MutationRecord) -> Path:
        path = self.directory / mutant_filename(record.mutant_id)
        self.bytes_written += save_mutant(circuit, record, path)
        self.files += 1
        return path


def list_mutants(directory: str | Path) -> list[Path]:
    return sorted(Path(directory).glob(f"mutant_*{MUTANT_SUFFIX}"))


def mutant_id_of(path: str | Path) -> int:
    return int(Path(path).stem.split("_")[1])


def write_generation_report(
    report: GenerationReport, directory: str | Path, extra: Optional[dict] = None
) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    data = report.as_dict()
    if extra:
        data.update(extra)
    path = directory / "report.json"
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    hist = ", ".join(f"{k}={v}" for k, v in report.operator_histogram.items())
    summary = (
        f"circuit:   {report.circuit_name}\n"
        f"mutants:   {report.num_mutants}\n"
        f"seed:      {report.seed}\n"
        f"elapsed:   {report.elapsed_seconds:.3f} s "
        f"({1000 * report.elapsed_seconds / max(report.num_mutants, 1):.3f} ms/mutant)\n"
        f"operators: {hist}\n"
        f"version:   {report.tool_version}\n"
    )
    (directory / "report.txt").write_text(summary, encoding="utf-8")
    return path
