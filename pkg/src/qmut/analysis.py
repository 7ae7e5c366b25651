"""Oracle-driven kill analysis.

Each input of each mutant is judged with two oracles, in order:

1. wrong-output oracle (WOO): any observed outcome outside the valid set
   kills the mutant;
2. output-probability oracle (OPO): a Pearson chi-square goodness-of-fit test
   against the expected distribution kills when ``p < alpha``.

A mutant is killed when at least one input kills it.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .circuit import Instruction, QuantumCircuit, circuits_equal, instructions_equal
from .errors import InvalidArgument, NoDifference, OracleIncomplete
from .mutation import Operator
from .simulator import CountsDistribution, all_inputs, prepare_input, run_statevector

DEFAULT_ALPHA = 0.05
LOW_EXPECTED_COUNT = 5.0
CHI_SQUARE_CONVENTION = (
    "pearson over the expected support, expected counts = p * shots, "
    "no low-count correction, df = |support| - 1"
)


# -- regularized incomplete gamma ------------------------------------------

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 10_000


def _gamma_series(a: float, x: float) -> float:
    # lower regularized P(a, x) by its power series; converges for x < a + 1
    term = total = 1.0 / a
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_continued_fraction(a: float, x: float) -> float:
    # upper regularized Q(a, x), modified Lentz; converges for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gammaincc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function ``Q(a, x)``."""
    if a <= 0:
        raise InvalidArgument("shape parameter must be positive")
    if x < 0:
        raise InvalidArgument("x must be non-negative")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x))
    return _gamma_continued_fraction(a, x)


def chi2_sf(statistic: float, df: int) -> float:
    """Upper tail probability of a chi-square variable with ``df`` dof."""
    if df < 1:
        raise InvalidArgument("degrees of freedom must be >= 1")
    if statistic <= 0:
        return 1.0
    return gammaincc(df / 2.0, statistic / 2.0)


# -- oracles -----------------------------------------------------------------


@dataclass(frozen=True)
class OracleEntry:
    valid_outputs: frozenset[str]
    distribution: Optional[dict[str, float]] = None

    def __post_init__(self):
        if self.distribution is not None:
            total = sum(self.distribution.values())
            if abs(total - 1.0) > 1e-9:
                raise InvalidArgument(f"expected distribution sums to {total}, not 1")
            support = {k for k, p in self.distribution.items() if p > 0}
            if not support <= self.valid_outputs:
                raise InvalidArgument("distribution support is not within the valid outputs")


OracleSpec = dict[str, OracleEntry]


def oracle_from_json(data: Mapping) -> OracleSpec:
    oracle = {}
    for bits, entry in data.items():
        dist = entry.get("distribution")
        valid = entry.get("valid_outputs")
        if valid is None:
            if dist is None:
                raise InvalidArgument(f"oracle entry {bits!r} has neither outputs nor distribution")
            valid = [k for k, p in dist.items() if p > 0]
        oracle[bits] = OracleEntry(
            frozenset(valid), None if dist is None else {k: float(p) for k, p in dist.items()}
        )
    return oracle


def oracle_to_json(oracle: OracleSpec) -> dict:
    out = {}
    for bits in sorted(oracle):
        entry = oracle[bits]
        item: dict = {"valid_outputs": sorted(entry.valid_outputs)}
        if entry.distribution is not None:
            item["distribution"] = {k: entry.distribution[k] for k in sorted(entry.distribution)}
        out[bits] = item
    return out


def load_oracle(path: str | Path) -> OracleSpec:
    with open(path, encoding="utf-8") as fh:
        return oracle_from_json(json.load(fh))


def oracle_from_circuit(
    circuit: QuantumCircuit,
    inputs: Optional[Iterable[str]] = None,
    cutoff: float = 1e-12,
    with_distribution: bool = True,
) -> OracleSpec:
    """Exact oracle for each basis input, computed from the reference circuit."""
    inputs = all_inputs(circuit.num_qubits) if inputs is None else list(inputs)
    oracle = {}
    for bits in inputs:
        probs = run_statevector(prepare_input(circuit, bits)).probabilities_dict(cutoff)
        total = sum(probs.values())
        dist = {k: p / total for k, p in probs.items()}
        oracle[bits] = OracleEntry(frozenset(dist), dist if with_distribution else None)
    return oracle


def uniform_oracle(num_qubits: int, inputs: Optional[Iterable[str]] = None) -> OracleSpec:
    outcomes = all_inputs(num_qubits)
    dist = {k: 1.0 / len(outcomes) for k in outcomes}
    inputs = outcomes if inputs is None else list(inputs)
    return {bits: OracleEntry(frozenset(outcomes), dict(dist)) for bits in inputs}


# -- judging -----------------------------------------------------------------


class Verdict(str, enum.Enum):
    WOO = "WOO"
    OPO = "OPO"
    SURVIVED = "survived"

    @property
    def kills(self) -> bool:
        return self is not Verdict.SURVIVED


@dataclass(frozen=True)
class InputVerdict:
    verdict: Verdict
    p_value: Optional[float] = None
    statistic: Optional[float] = None
    min_expected_count: Optional[float] = None


def _counts_of(observed: CountsDistribution | Mapping[str, int]) -> tuple[dict[str, int], int]:
    if isinstance(observed, CountsDistribution):
        return observed.counts, observed.shots
    counts = dict(observed)
    return counts, sum(counts.values())


def chi_square_p(
    observed: CountsDistribution | Mapping[str, int], expected: Mapping[str, float]
) -> tuple[float, float]:
    """Pearson statistic and upper-tail p-value of ``observed`` vs ``expected``.

    Outcomes with zero expected probability are outside the support; the
    caller is expected to have rejected observations there already.
    """
    counts, shots = _counts_of(observed)
    support = {k: p for k, p in expected.items() if p > 0}
    if not support:
        raise InvalidArgument("expected distribution has empty support")
    stray = [k for k, c in counts.items() if c > 0 and k not in support]
    if stray:
        raise InvalidArgument(f"observed outcomes outside the expected support: {stray}")
    total_p = sum(support.values())
    stat = 0.0
    for k, p in support.items():
        e = p / total_p * shots
        stat += (counts.get(k, 0) - e) ** 2 / e
    df = len(support) - 1
    if df == 0:
        return 0.0, 1.0
    return stat, chi2_sf(stat, df)


def judge_input(
    observed: CountsDistribution | Mapping[str, int],
    entry: OracleEntry,
    alpha: float = DEFAULT_ALPHA,
) -> InputVerdict:
    counts, shots = _counts_of(observed)
    if any(c > 0 and k not in entry.valid_outputs for k, c in counts.items()):
        return InputVerdict(Verdict.WOO)
    if entry.distribution is None:
        return InputVerdict(Verdict.SURVIVED)
    support = {k: p for k, p in entry.distribution.items() if p > 0}
    if any(c > 0 and k not in support for k, c in counts.items()):
        # valid but impossible under the expected distribution
        return InputVerdict(Verdict.WOO)
    stat, p = chi_square_p(counts, support)
    min_e = min(support.values()) * shots
    verdict = Verdict.OPO if p < alpha else Verdict.SURVIVED
    return InputVerdict(verdict, p, stat, min_e)


@dataclass
class KillVerdict:
    mutant_id: int
    killing_inputs: int
    total_inputs: int
    per_input: dict[str, InputVerdict] = field(default_factory=dict)

    @property
    def killed(self) -> bool:
        return self.killing_inputs >= 1

    @property
    def signature(self) -> list[int]:
        return [self.killing_inputs, self.total_inputs]


def judge_mutant(
    mutant_id: int,
    results: Mapping[str, CountsDistribution | Mapping[str, int]],
    oracle: OracleSpec,
    alpha: float = DEFAULT_ALPHA,
) -> KillVerdict:
    per_input = {}
    for bits in sorted(results):
        if bits not in oracle:
            raise OracleIncomplete(f"oracle has no entry for input {bits!r}")
        per_input[bits] = judge_input(results[bits], oracle[bits], alpha)
    kills = sum(v.verdict.kills for v in per_input.values())
    return KillVerdict(mutant_id, kills, len(per_input), per_input)


def mutation_score(verdicts: Iterable[KillVerdict]) -> float:
    verdicts = list(verdicts)
    if not verdicts:
        raise InvalidArgument("mutation score of an empty verdict list")
    return 100.0 * sum(v.killed for v in verdicts) / len(verdicts)


def low_count_warnings(oracle: OracleSpec, shots: int, threshold: float = LOW_EXPECTED_COUNT) -> list[dict]:
    warnings = []
    for bits in sorted(oracle):
        dist = oracle[bits].distribution
        if not dist:
            continue
        min_e = min(p for p in dist.values() if p > 0) * shots
        if min_e < threshold:
            warnings.append({"input": bits, "min_expected_count": min_e})
    return warnings


# -- survivor diffing -------------------------------------------------------


@dataclass(frozen=True)
class MutationDiff:
    operator: str
    position: int
    detail: str
    candidates: tuple[int, ...] = ()

    def as_dict(self) -> dict:
        return {"operator": self.operator, "position": self.position, "detail": self.detail}

    def row(self) -> str:
        return f"{self.operator:<9} {self.position:>4}  {self.detail}"


UNKNOWN = "unknown"


def _fmt_params(params: tuple[float, ...]) -> str:
    return ", ".join(f"{p:.3f}" for p in params)


def _fmt_qubits(qubits: tuple[int, ...]) -> str:
    return "(" + ",".join(str(q) for q in qubits) + ")"


def _first_divergence(a: tuple[Instruction, ...], b: tuple[Instruction, ...]) -> int:
    i = 0
    while i < min(len(a), len(b)) and instructions_equal(a[i], b[i]):
        i += 1
    return i


def _run_start(seq: tuple[Instruction, ...], i: int) -> int:
    # walk back over a run of instructions identical to seq[i]
    while i > 0 and instructions_equal(seq[i - 1], seq[i]):
        i -= 1
    return i


def classify_survivor(original: QuantumCircuit, mutant: QuantumCircuit) -> MutationDiff:
    """Recover the single edit that turns ``original`` into ``mutant``.

    When a run of identical instructions makes the edit position ambiguous,
    the smallest consistent position is reported and every consistent
    position is listed in ``candidates``.
    """
    if circuits_equal(original, mutant):
        raise NoDifference("mutant is identical to the original")
    a, b = original.instructions, mutant.instructions
    if original.num_qubits != mutant.num_qubits or original.num_clbits != mutant.num_clbits:
        return MutationDiff(UNKNOWN, 0, "register sizes differ")
    d = _first_divergence(a, b)

    if len(b) == len(a) + 1:
        if not all(instructions_equal(x, y) for x, y in zip(a[d:], b[d + 1 :])):
            return MutationDiff(UNKNOWN, d, "more than one edit")
        start = _run_start(b, d)
        new = b[d]
        detail = f"{new.name} {_fmt_qubits(new.qubits)}"
        if new.params:
            detail += f" [{_fmt_params(new.params)}]"
        return MutationDiff(Operator.INSERT.value, start, detail, tuple(range(start, d + 1)))

    if len(b) == len(a) - 1:
        if not all(instructions_equal(x, y) for x, y in zip(a[d + 1 :], b[d:])):
            return MutationDiff(UNKNOWN, d, "more than one edit")
        start = _run_start(a, d)
        return MutationDiff(Operator.DELETE.value, start, f"- ({a[d].name})", tuple(range(start, d + 1)))

    if len(b) != len(a):
        return MutationDiff(UNKNOWN, d, f"length changed by {len(b) - len(a)}")
    if not all(instructions_equal(x, y) for x, y in zip(a[d + 1 :], b[d + 1 :])):
        return MutationDiff(UNKNOWN, d, "more than one edit")
    old, new = a[d], b[d]
    same_attrs = old.qubits == new.qubits and old.params == new.params and old.clbits == new.clbits
    if old.name != new.name and same_attrs and old.kind == new.kind:
        return MutationDiff(Operator.RENAME.value, d, f"{old.name} -> {new.name}", (d,))
    if old.name == new.name and old.kind == new.kind:
        parts = []
        if old.qubits != new.qubits:
            parts.append(f"({old.name}) Qubits : {_fmt_qubits(old.qubits)} -> {_fmt_qubits(new.qubits)}")
        if old.params != new.params:
            parts.append(f"({old.name}) Params : [{_fmt_params(old.params)}] -> [{_fmt_params(new.params)}]")
        if old.clbits != new.clbits:
            parts.append(f"({old.name}) Clbits : {old.clbits} -> {new.clbits}")
        if not parts:
            # differ only below the printed precision, e.g. -0.0 vs 0.0
            parts.append(f"({old.name}) Params : {old.params!r} -> {new.params!r}")
        return MutationDiff(Operator.RETARGET.value, d, "; ".join(parts), (d,))
    return MutationDiff(UNKNOWN, d, f"{old} -> {new}")


# -- score report -------------------------------------------------------------


def score_report(
    circuit_name: str,
    shots: int,
    alpha: float,
    verdicts: list[KillVerdict],
    oracle: OracleSpec,
    survivors: Optional[list[dict]] = None,
) -> dict:
    verdicts = sorted(verdicts, key=lambda v: v.mutant_id)
    killed = sum(v.killed for v in verdicts)
    return {
        "circuit": circuit_name,
        "shots": shots,
        "alpha": alpha,
        "mutants_total": len(verdicts),
        "mutants_killed": killed,
        "score_percent": round(mutation_score(verdicts), 4) if verdicts else 0.0,
        "survivors": survivors if survivors is not None else [],
        "low_expected_count_warnings": low_count_warnings(oracle, shots),
        "kill_signatures": {str(v.mutant_id): v.signature for v in verdicts},
        "chi_square_convention": CHI_SQUARE_CONVENTION,
    }
