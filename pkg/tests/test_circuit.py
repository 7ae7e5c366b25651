import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circuits import ce_circuit
from qmut.circuit import (
    Instruction,
    append,
    build_circuit,
    circuits_equal,
    gate,
    insert_placeholder,
    make_instruction,
    mutable_gate_indexes,
    new_circuit,
    opaque,
    placeholder,
    substitute_placeholder,
    validate,
)
from qmut.errors import (
    AmbiguousPlaceholder,
    InvalidCircuit,
    InvalidInstruction,
    InvalidPosition,
    InvalidSubstitution,
    PlaceholderNotFound,
)
from qmut.gates import CATALOG


def test_new_circuit():
    c = new_circuit("bv", 3, 3)
    assert len(c) == 0 and c.num_qubits == 3 and c.num_clbits == 3
    assert validate(c) == []
    assert new_circuit("iqft", 6, 0).num_qubits == 6
    with pytest.raises(InvalidCircuit):
        new_circuit("x", 0, 0)


def test_append():
    c = append(new_circuit("c", 2), gate("h", 0))
    assert len(c) == 1
    c2 = append(c, gate("cx", (0, 1)))
    assert c2[0] == c[0] and len(c) == 1


@pytest.mark.parametrize(
    "ins",
    [
        gate("cx", (0, 0)),
        gate("u2", 0, (0.1,)),
        gate("h", 5),
        gate("nope", 0),
        gate("rx", 0),
    ],
    ids=["dup-qubit", "u2-one-param", "out-of-range", "unknown", "missing-param"],
)
def test_append_rejects(ins):
    with pytest.raises(InvalidInstruction):
        append(new_circuit("c", 2), ins)


def test_placeholder_defaults():
    p = placeholder(0)
    assert p.name == "Input" and p.label == "  Input  " and p.params == ()


def test_insert_placeholder_and_indexes():
    c = insert_placeholder(new_circuit("c", 2), 0, "Oracle", (0, 1))
    assert len(c) == 1 and mutable_gate_indexes(c) == []

    c = build_circuit("c", 2, [("h", 0), ("x", 1)])
    c = insert_placeholder(c, 1, qubits=(0,))
    assert mutable_gate_indexes(c) == [0, 2]
    assert c[1].name == "Input"

    with pytest.raises(InvalidPosition):
        insert_placeholder(c, 9, qubits=(0,))


def test_mutable_indexes():
    c = build_circuit("c", 2, [("h", 0), placeholder(1), ("x", 1)])
    assert mutable_gate_indexes(c) == [0, 2]
    assert mutable_gate_indexes(new_circuit("e", 1)) == []
    ce = ce_circuit()
    assert len(ce) == 17 and len(mutable_gate_indexes(ce)) == 12


def test_substitute_placeholder():
    host = build_circuit("host", 3, [("h", 2), placeholder((0, 1), "Oracle"), ("x", 2)])
    body = build_circuit("body", 2, [("cx", (0, 1))])
    out = substitute_placeholder(host, "Oracle", body)
    assert [str(i) for i in out] == ["h q2", "cx q0,q1", "x q2"]

    flipped = build_circuit("host", 3, [placeholder((2, 0), "Oracle")])
    out = substitute_placeholder(flipped, "Oracle", body)
    assert out[0].qubits == (2, 0)

    empty = substitute_placeholder(host, "Oracle", new_circuit("empty", 2))
    assert len(empty) == len(host) - 1

    with pytest.raises(PlaceholderNotFound):
        substitute_placeholder(out, "Oracle", body)
    with pytest.raises(InvalidSubstitution):
        substitute_placeholder(host, "Oracle", new_circuit("wide", 3))
    twice = build_circuit("t", 2, [placeholder(0, "A"), placeholder(1, "A")])
    with pytest.raises(AmbiguousPlaceholder):
        substitute_placeholder(twice, "A", new_circuit("b", 1))


def test_circuits_equal():
    a = build_circuit("a", 2, [("h", 0)])
    assert circuits_equal(a, a)
    assert not circuits_equal(a, build_circuit("a", 2, [("h", 1)]))
    assert not circuits_equal(a, build_circuit("a", 3, [("h", 0)]))
    x = build_circuit("x", 6, [("cu1", (2, 5), (0.393,))])
    y = build_circuit("x", 6, [("cu1", (2, 5), (0.426,))])
    assert not circuits_equal(x, y)
    # bitwise comparison distinguishes signed zeros
    z0 = build_circuit("z", 1, [("rz", 0, (0.0,))])
    z1 = build_circuit("z", 1, [("rz", 0, (-0.0,))])
    assert not circuits_equal(z0, z1)
    # display name does not matter
    assert circuits_equal(a, build_circuit("other", 2, [("h", 0)]))


def test_validate_reports_violations():
    bad = new_circuit("b", 2).with_instructions([make_instruction("gate", "h", (2,))])
    assert any("qubit index out of range" in v for v in validate(bad))
    wide = new_circuit("w", 2).with_instructions([make_instruction("gate", "ccx", (0, 1, 2))])
    assert any("arity exceeds circuit width" in v for v in validate(wide))
    ph = new_circuit("p", 1).with_instructions([make_instruction("placeholder", "P", (0,), (), (1.0,))])
    assert validate(ph)
    assert validate(ce_circuit()) == []


def test_opaque_instructions_are_immutable():
    c = build_circuit("c", 2, [opaque("barrier", (0, 1)), ("h", 0)])
    assert mutable_gate_indexes(c) == [1]


# -- properties -------------------------------------------------------------

names = sorted(CATALOG.names)


@st.composite
def random_circuits(draw, max_qubits=4, max_len=12):
    n = draw(st.integers(1, max_qubits))
    ops: list[Instruction] = []
    for _ in range(draw(st.integers(0, max_len))):
        name = draw(st.sampled_from([g for g in names if CATALOG.spec(g).num_qubits <= n]))
        spec = CATALOG.spec(name)
        qubits = draw(st.permutations(range(n)))[: spec.num_qubits]
        params = [draw(st.floats(-3.14, 3.14)) for _ in range(spec.num_params)]
        ops.append(gate(name, qubits, params))
    c = build_circuit("rand", n, ops)
    for _ in range(draw(st.integers(0, 2))):
        k = draw(st.integers(1, n))
        pos = draw(st.integers(0, len(c)))
        c = insert_placeholder(c, pos, draw(st.sampled_from(["Input", "Oracle"])), tuple(range(k)))
    return c


@settings(max_examples=100)
@given(random_circuits())
def test_mutable_indexes_never_hit_placeholders(c):
    idx = mutable_gate_indexes(c)
    assert idx == sorted(set(idx))
    assert all(not c[i].is_placeholder for i in idx)
    assert len(idx) + len(c.placeholders) == len(c)


@settings(max_examples=50)
@given(random_circuits(), random_circuits())
def test_equality_is_an_equivalence(a, b):
    assert circuits_equal(a, a)
    assert circuits_equal(a, b) == circuits_equal(b, a)
    copy = a.with_instructions(list(a.instructions))
    if circuits_equal(a, b):
        assert circuits_equal(copy, b)
