"""Command line entry point: ``qmut bound|mutate|run|analyze|diff``.

Exit codes: 0 success, 2 input or parse error, 3 analysis-input error,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, coverage, io, mutation, simulator
from ._version import __version__
from .circuit import QuantumCircuit
from .errors import (
    InvalidArgument,
    LoadError,
    OracleIncomplete,
    PlaceholderPresent,
    QMutError,
    UnsupportedQasm,
)

log = logging.getLogger("qmut")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ANALYSIS = 3
EXIT_INTERNAL = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _emit(obj, pretty: bool, out=None) -> None:
    out = out or sys.stdout
    if pretty:
        out.write(json.dumps(obj, indent=2) + "\n")
    else:
        out.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _resolve_seed(seed: Optional[int], what: str) -> int:
    if seed is not None:
        return seed
    if sys.stdin.isatty():
        drawn = random.SystemRandom().getrandbits(63)
        print(f"{what}: no --seed given, using {drawn}", file=sys.stderr)
        return drawn
    raise CliError(f"{what} requires --seed in non-interactive mode")


def _load(path: str) -> QuantumCircuit:
    try:
        return io.load_circuit(path)
    except (LoadError, UnsupportedQasm) as exc:
        raise CliError(str(exc)) from exc


def cmd_bound(args) -> int:
    circuit = _load(args.circuit)
    _emit(coverage.coverage_budget(circuit).as_dict(), args.pretty)
    return EXIT_OK


def cmd_mutate(args) -> int:
    circuit = _load(args.circuit)
    seed = _resolve_seed(args.seed, "mutate")
    num = args.num if args.num is not None else coverage.min_mutants(len(circuit))
    if num < 1:
        raise CliError("--num must be >= 1")
    directory = io.mutant_dir(args.out, circuit.name)
    if directory.exists() and any(directory.iterdir()):
        raise CliError(f"output directory {directory} is not empty")
    writer = io.MutantWriter(directory)
    io.save_mutant(circuit, None, directory / io.ORIGINAL_FILE)
    report = mutation.generate_mutants(circuit, num, seed, sink=writer)
    path = io.write_generation_report(report, directory, {"bytes_written": writer.bytes_written})
    log.info("wrote %d mutants to %s", writer.files, directory)
    _emit({"directory": str(directory), "report": str(path), **report.as_dict()}, args.pretty)
    return EXIT_OK


def _read_inputs(spec: str, num_qubits: int) -> Optional[list[str]]:
    if spec == "all":
        return None
    try:
        text = Path(spec).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read inputs file: {exc}") from exc
    try:
        items = json.loads(text)
        if not isinstance(items, list):
            raise CliError("inputs JSON must be a list of bitstrings")
    except json.JSONDecodeError:
        items = [line.strip() for line in text.splitlines() if line.strip()]
    for bits in items:
        if not isinstance(bits, str) or len(bits) != num_qubits or set(bits) - {"0", "1"}:
            raise CliError(f"input {bits!r} is not a {num_qubits}-bit string")
    return items


def _run_one(job):
    mutant_id, path, shots, seed, inputs = job
    circuit, _ = io.load_mutant(path)
    results = simulator.run_all_inputs(circuit, shots, seed, inputs, mutant_id=mutant_id)
    return mutant_id, {bits: dict(sorted(c.counts.items())) for bits, c in results.items()}


def cmd_run(args) -> int:
    directory = Path(args.mutants_dir)
    paths = io.list_mutants(directory)
    if not paths:
        raise CliError(f"no mutant files in {directory}")
    seed = _resolve_seed(args.seed, "run")
    if args.shots < 1:
        raise CliError("--shots must be >= 1")
    try:
        first, _ = io.load_mutant(paths[0])
        circuits = [(io.mutant_id_of(p), p, io.load_mutant(p)[0]) for p in paths]
    except LoadError as exc:
        raise CliError(str(exc)) from exc
    for mid, path, circuit in circuits:
        if circuit.placeholders:
            raise CliError(f"{path.name}: unsubstituted placeholder {circuit.placeholders[0][1].name!r}")
        if circuit.num_qubits > simulator.MAX_QUBITS:
            raise CliError(f"{path.name}: too many qubits to simulate")
    inputs = _read_inputs(args.inputs, first.num_qubits)
    jobs = [(mid, str(path), args.shots, seed, inputs) for mid, path, _ in circuits]
    try:
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                done = list(pool.map(_run_one, jobs, chunksize=8))
        else:
            done = [_run_one(j) for j in jobs]
    except PlaceholderPresent as exc:
        raise CliError(str(exc)) from exc
    doc = {
        "metadata": {
            "circuit": first.name,
            "mutants_dir": str(directory),
            "shots": args.shots,
            "seed": seed,
            "inputs": "all" if inputs is None else inputs,
            "simulator_version": simulator.SIMULATOR_VERSION,
        },
        "mutants": {str(mid): res for mid, res in sorted(done)},
    }
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2 if args.pretty else None) + "\n", encoding="utf-8")
        _emit({"results": args.out, "mutants": len(done)}, args.pretty)
    else:
        _emit(doc, args.pretty)
    return EXIT_OK


def _survivor_rows(directory: Path, survivors: list[int]) -> list[dict]:
    original_path = directory / io.ORIGINAL_FILE
    if not original_path.exists():
        return [{"mutant_id": mid} for mid in survivors]
    original, _ = io.load_mutant(original_path)
    rows = []
    for mid in survivors:
        path = directory / io.mutant_filename(mid)
        row: dict = {"mutant_id": mid}
        if path.exists():
            mutant, _ = io.load_mutant(path)
            row.update(analysis.classify_survivor(original, mutant).as_dict())
        rows.append(row)
    return rows


def cmd_analyze(args) -> int:
    try:
        doc = json.loads(Path(args.results).read_text(encoding="utf-8"))
        meta, mutants = doc["metadata"], doc["mutants"]
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"cannot read results file: {exc}") from exc
    try:
        oracle = analysis.load_oracle(args.oracle)
    except (OSError, ValueError, InvalidArgument) as exc:
        raise CliError(f"cannot read oracle: {exc}", EXIT_ANALYSIS) from exc
    try:
        verdicts = [
            analysis.judge_mutant(int(mid), res, oracle, args.alpha) for mid, res in mutants.items()
        ]
    except OracleIncomplete as exc:
        raise CliError(f"OracleIncomplete: {exc}", EXIT_ANALYSIS) from exc
    if not verdicts:
        raise CliError("results file lists no mutants", EXIT_ANALYSIS)
    survivors = sorted(v.mutant_id for v in verdicts if not v.killed)
    rows = _survivor_rows(Path(meta.get("mutants_dir", ".")), survivors)
    report = analysis.score_report(meta.get("circuit", ""), int(meta["shots"]), args.alpha, verdicts, oracle, rows)
    report["seed"] = meta.get("seed")
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    _emit(report, args.pretty)
    return EXIT_OK


def cmd_diff(args) -> int:
    original = _load(args.original)
    rows = []
    for path in args.mutants:
        mutant = _load(path)
        try:
            diff = analysis.classify_survivor(original, mutant)
            rows.append({"mutant": path, **diff.as_dict()})
        except QMutError as exc:
            rows.append({"mutant": path, "operator": "none", "position": None, "detail": str(exc)})
    if args.table:
        for row in rows:
            pos = "" if row["position"] is None else row["position"]
            print(f"{Path(row['mutant']).name:<24} {row['operator']:<9} {pos!s:>4}  {row['detail']}")
    else:
        _emit(rows, args.pretty)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmut", description="Random mutant generation for quantum circuits.")
    parser.add_argument("--version", action="version", version=f"qmut {__version__}")
    parser.add_argument("--pretty", action="store_true", help="indent JSON output")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="print the coverage mutant budget for a circuit")
    p.add_argument("circuit", help=".qasm or .qcz file")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("mutate", help="generate mutants into <out>/<circuit name>/")
    p.add_argument("circuit")
    p.add_argument("--num", type=int, default=None, help="number of mutants (default: coverage budget)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=".", help="parent directory for the mutant directory")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("run", help="simulate every mutant on each basis input")
    p.add_argument("mutants_dir")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--inputs", default="all", help="'all' or a file of bitstrings")
    p.add_argument("--out", default=None, help="results file (default: stdout)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("analyze", help="score simulation results against an oracle")
    p.add_argument("results")
    p.add_argument("--oracle", required=True)
    p.add_argument("--alpha", type=float, default=analysis.DEFAULT_ALPHA)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("diff", help="classify mutants against the original circuit")
    p.add_argument("original")
    p.add_argument("mutants", nargs="+")
    p.add_argument("--table", action="store_true", help="print a text table instead of JSON")
    p.set_defaults(func=cmd_diff)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except QMutError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
