"""Mutant budgets from the coupon collector's problem, and coverage audits.

A circuit of ``N`` instructions has ``N + 1`` insertion gaps. Collecting all
of them with uniformly drawn insertions takes ``n * H_n`` draws on average
(``n = N + 1``). Bounding ``H_n`` above by ``ln(n) + 1`` and accounting for
insertion being one operator in four gives the default mutant budget

    4 * (N + 1) * ceil(ln(N + 1) + 1)

which also covers, in expectation, the ``N`` delete/rename/retarget targets.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .circuit import QuantumCircuit, mutable_gate_indexes
from .errors import InconsistentRecords, InvalidArgument
from .mutation import MutationRecord, Operator


def harmonic(n: int) -> float:
    if n < 1:
        raise InvalidArgument(f"harmonic number needs n >= 1, got {n}")
    # smallest terms first keeps the rounding error down
    return math.fsum(1.0 / i for i in range(n, 0, -1))


def expected_insertions(n: int) -> float:
    return n * harmonic(n)


def insertion_budget(num_instructions: int) -> int:
    if num_instructions < 0:
        raise InvalidArgument("instruction count must be >= 0")
    gaps = num_instructions + 1
    return gaps * math.ceil(math.log(gaps) + 1)


def min_mutants(num_instructions: int) -> int:
    return 4 * insertion_budget(num_instructions)


@dataclass(frozen=True)
class CoverageBudget:
    N: int
    insertion_budget: int
    total_budget: int

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "insertion_budget": self.insertion_budget,
            "total_budget": self.total_budget,
        }


def coverage_budget(circuit: QuantumCircuit | int) -> CoverageBudget:
    """Budget for a circuit, counting every instruction (placeholders too)."""
    n = circuit if isinstance(circuit, int) else len(circuit)
    ins = insertion_budget(n)
    return CoverageBudget(n, ins, 4 * ins)


@dataclass
class CoverageReport:
    covered_gaps: set[int]
    covered_indexes: set[int]
    num_gaps: int
    mutable_indexes: list[int]
    per_operator_position_matrix: dict[tuple[str, int], int] = field(default_factory=dict)

    @property
    def fully_covered(self) -> bool:
        return len(self.covered_gaps) == self.num_gaps and self.covered_indexes == set(
            self.mutable_indexes
        )

    @property
    def gap_fraction(self) -> float:
        return len(self.covered_gaps) / self.num_gaps

    @property
    def index_fraction(self) -> float:
        if not self.mutable_indexes:
            return 1.0
        return len(self.covered_indexes) / len(self.mutable_indexes)

    @property
    def covered_by_every_operator(self) -> bool:
        """Stricter reading: each target hit by each applicable operator."""
        m = self.per_operator_position_matrix
        if any(m.get((Operator.INSERT.value, g), 0) == 0 for g in range(self.num_gaps)):
            return False
        return all(
            m.get((op.value, i), 0) > 0
            for op in (Operator.DELETE, Operator.RENAME, Operator.RETARGET)
            for i in self.mutable_indexes
        )


def audit_coverage(records: Iterable[MutationRecord], circuit: QuantumCircuit) -> CoverageReport:
    mutable = mutable_gate_indexes(circuit)
    mutable_set = set(mutable)
    num_gaps = len(circuit) + 1
    gaps: set[int] = set()
    indexes: set[int] = set()
    matrix: Counter = Counter()
    for rec in records:
        if rec.operator is Operator.INSERT:
            if not 0 <= rec.index < num_gaps:
                raise InconsistentRecords(f"insert gap {rec.index} outside [0, {num_gaps - 1}]")
            gaps.add(rec.index)
        else:
            if rec.index not in mutable_set:
                raise InconsistentRecords(
                    f"{rec.operator.value} targets {rec.index}, not a mutable index"
                )
            indexes.add(rec.index)
        matrix[(rec.operator.value, rec.index)] += 1
    return CoverageReport(gaps, indexes, num_gaps, mutable, dict(matrix))
