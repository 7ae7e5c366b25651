import math
from fractions import Fraction

import numpy as np
import pytest

from circuits import bv_circuit, ce_circuit, iqft_circuit
from qmut.circuit import new_circuit
from qmut.coverage import (
    audit_coverage,
    coverage_budget,
    expected_insertions,
    harmonic,
    insertion_budget,
    min_mutants,
)
from qmut.errors import InconsistentRecords, InvalidArgument
from qmut.mutation import MutationRecord, Operator, iter_mutants


def test_harmonic():
    assert harmonic(1) == 1.0
    assert harmonic(3) == pytest.approx(float(Fraction(11, 6)), abs=1e-15)
    exact = sum(Fraction(1, i) for i in range(1, 101))
    assert harmonic(100) == pytest.approx(float(exact), abs=1e-14)
    with pytest.raises(InvalidArgument):
        harmonic(0)


def test_expected_insertions():
    assert expected_insertions(1) == 1.0
    assert expected_insertions(2) == 3.0
    assert expected_insertions(10) == pytest.approx(29.289682539682538, abs=1e-12)


def test_insertion_budget():
    assert insertion_budget(24) == 125
    assert insertion_budget(9) == 40
    assert insertion_budget(0) == 1


def test_min_mutants_table():
    assert min_mutants(24) == 500
    assert min_mutants(17) == 288
    assert min_mutants(9) == 160
    assert min_mutants(0) == 4


def test_budget_uses_total_instruction_count():
    assert coverage_budget(ce_circuit()).total_budget == 288
    assert coverage_budget(iqft_circuit()).total_budget == 500
    assert coverage_budget(bv_circuit()).total_budget == 160
    b = coverage_budget(new_circuit("e", 1))
    assert (b.N, b.insertion_budget, b.total_budget) == (0, 1, 4)


def test_min_mutants_monotone():
    values = [min_mutants(n) for n in range(2000)]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_harmonic_bounds_spot_checks():
    for n in (1, 2, 7, 1000, 123457):
        h = harmonic(n)
        assert math.log(n) + 1 / n <= h <= math.log(n) + 1


def test_audit_coverage():
    c = bv_circuit()
    empty = audit_coverage([], c)
    assert not empty.fully_covered and empty.gap_fraction == 0

    recs = [MutationRecord(Operator.INSERT, g) for g in range(len(c) + 1)]
    recs += [MutationRecord(Operator.DELETE, i) for i in range(len(c))]
    full = audit_coverage(recs, c)
    assert full.fully_covered and not full.covered_by_every_operator
    assert full.per_operator_position_matrix[("insert", 0)] == 1

    with pytest.raises(InconsistentRecords):
        audit_coverage([MutationRecord(Operator.INSERT, 99)], c)
    with pytest.raises(InconsistentRecords):
        audit_coverage([MutationRecord(Operator.RENAME, 0)], ce_circuit())  # placeholder slot


def test_budget_usually_covers_iqft():
    c = iqft_circuit()
    report = audit_coverage([r for _, r in iter_mutants(c, min_mutants(len(c)), 1)], c)
    assert report.gap_fraction > 0.9 and report.index_fraction > 0.9


def test_cumulative_harmonic_matches_direct():
    cum = np.cumsum(1.0 / np.arange(1, 5001))
    for n in (1, 10, 4999, 5000):
        assert cum[n - 1] == pytest.approx(harmonic(n), rel=1e-13)
