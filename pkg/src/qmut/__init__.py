"""Random mutant generation, simulation and kill analysis for quantum circuits."""

from ._version import __version__
from .analysis import (
    KillVerdict,
    MutationDiff,
    OracleEntry,
    Verdict,
    chi_square_p,
    classify_survivor,
    judge_input,
    judge_mutant,
    mutation_score,
    oracle_from_circuit,
)
from .circuit import (
    Instruction,
    QuantumCircuit,
    append,
    build_circuit,
    circuits_equal,
    gate,
    insert_placeholder,
    mutable_gate_indexes,
    new_circuit,
    placeholder,
    substitute_placeholder,
    validate,
)
from .coverage import audit_coverage, coverage_budget, harmonic, insertion_budget, min_mutants
from .gates import (
    CATALOG,
    MUTABLE_GATE_SET,
    class_members,
    eligible_for_insertion,
    equivalence_class_of,
    unitary_of,
)
from .io import export_qasm, import_qasm, load_mutant, save_mutant
from .mutation import (
    GenerationReport,
    MutationRecord,
    Operator,
    generate_mutants,
    iter_mutants,
    mutate_once,
)
from .simulator import CountsDistribution, Statevector, run_all_inputs, run_statevector, sample_counts

__all__ = [name for name in dir() if not name.startswith("_")]
