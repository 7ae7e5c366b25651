import gzip
import json
import math

import pytest
from hypothesis import given, settings

from circuits import bv_circuit, ce_circuit, iqft_circuit
from qmut.circuit import build_circuit, circuits_equal, gate, placeholder
from qmut.errors import LoadError, UnsupportedQasm
from qmut.io import (
    MutantWriter,
    export_qasm,
    import_qasm,
    list_mutants,
    load_circuit,
    load_mutant,
    mutant_bytes,
    mutant_id_of,
    save_mutant,
    write_generation_report,
)
from qmut.mutation import generate_mutants, iter_mutants
from test_circuit import random_circuits


def test_round_trip(tmp_path):
    c = ce_circuit()
    for m, r in iter_mutants(c, 50, 2):
        path = tmp_path / "m.qcz"
        save_mutant(m, r, path)
        m2, r2 = load_mutant(path)
        assert circuits_equal(m, m2) and m2.name == m.name and r2 == r
        assert [i.label for i in m2] == [i.label for i in m]


def test_bytes_are_deterministic():
    m, r = next(iter_mutants(iqft_circuit(), 1, 3))
    assert mutant_bytes(m, r) == mutant_bytes(m, r)
    # gzip header carries no timestamp
    assert mutant_bytes(m, r)[4:8] == b"\0\0\0\0"


def test_files_are_small(tmp_path):
    size = save_mutant(iqft_circuit(), None, tmp_path / "o.qcz")
    assert 100 < size < 4096


def test_corrupt_files(tmp_path):
    p = tmp_path / "bad.qcz"
    p.write_bytes(b"not gzip")
    with pytest.raises(LoadError) as exc:
        load_mutant(p)
    assert exc.value.stage == "gzip"

    p.write_bytes(gzip.compress(b"{not json"))
    with pytest.raises(LoadError) as exc:
        load_mutant(p)
    assert exc.value.stage == "json"

    doc = json.loads(gzip.decompress(mutant_bytes(bv_circuit(), None)))
    doc["circuit"]["instructions"][0]["qubits"] = [9]
    p.write_bytes(gzip.compress(json.dumps(doc).encode()))
    with pytest.raises(LoadError) as exc:
        load_mutant(p)
    assert exc.value.stage == "validate"

    with pytest.raises(LoadError) as exc:
        load_mutant(tmp_path / "missing.qcz")
    assert exc.value.stage == "read"


def test_writer_layout(tmp_path):
    writer = MutantWriter(tmp_path / "bv")
    report = generate_mutants(bv_circuit(), 12, 5, sink=writer)
    files = list_mutants(tmp_path / "bv")
    assert [f.name for f in files[:2]] == ["mutant_000001.qcz", "mutant_000002.qcz"]
    assert [mutant_id_of(f) for f in files] == list(range(1, 13))
    assert writer.bytes_written == sum(f.stat().st_size for f in files)
    write_generation_report(report, tmp_path / "bv")
    data = json.loads((tmp_path / "bv" / "report.json").read_text())
    assert data["num_mutants"] == 12 and data["seed"] == 5
    assert "mutants:   12" in (tmp_path / "bv" / "report.txt").read_text()


# -- QASM --------------------------------------------------------------------


def test_qasm_round_trip_with_placeholders_and_barriers():
    c = ce_circuit()
    text = export_qasm(c)
    assert "// QCRMUT-PLACEHOLDER name=Oracle qubits=2,3" in text
    back = import_qasm(text, c.name)
    assert circuits_equal(back, c)
    assert [i.kind for i in back] == [i.kind for i in c]


def test_qasm_params_are_exact():
    ops = [("u2", 0, (math.pi / 3, -1e-300)), ("u3", 1, (0.1, 0.2, 0.3)), ("rzx", (1, 0), (2.5e-17,))]
    c = build_circuit("p", 2, ops)
    assert circuits_equal(import_qasm(export_qasm(c)), c)


def test_qasm_import_expressions(tmp_path):
    text = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[2];
creg c[2];
// a comment
u2(pi/2, -pi^2) q[1];
cu1(2*pi/8) q[0],q[1]; h q[0];
barrier q[0],q[1];
"""
    c = import_qasm(text, "e")
    assert c.num_clbits == 2
    assert c[0].params == (math.pi / 2, -(math.pi**2))
    assert c[1].params == (math.pi / 4,) and c[2].name == "h"
    assert c[3].kind == "opaque"
    path = tmp_path / "e.qasm"
    path.write_text(text)
    assert load_circuit(path).name == "e"


@pytest.mark.parametrize(
    "body, line",
    [
        ("qreg q[1];\nmeasure q[0] -> c[0];", 4),
        ("qreg q[1];\nfoo q[0];", 4),
        ("qreg q[1];\nrx(__import__) q[0];", 4),
        ("qreg q[1];\nh r[0];", 4),
        ("h q[0];", 3),
        ("qreg q[1];\n// QCRMUT-PLACEHOLDER name=A", 4),
    ],
)
def test_qasm_unsupported(body, line):
    with pytest.raises(UnsupportedQasm) as exc:
        import_qasm('OPENQASM 2.0;\ninclude "qelib1.inc";\n' + body)
    assert exc.value.line == line


def test_qasm_requires_header():
    with pytest.raises(UnsupportedQasm):
        import_qasm("qreg q[1];\nh q[0];")


def test_export_rejects_unknown_opaque():
    from qmut.circuit import opaque

    with pytest.raises(UnsupportedQasm):
        export_qasm(build_circuit("o", 1, [opaque("snapshot", (0,))]))


def test_placeholder_pragma_round_trip():
    c = build_circuit("p", 3, [gate("h", 0), placeholder((2, 0), "Oracle")])
    back = import_qasm(export_qasm(c))
    assert back[1].qubits == (2, 0) and back[1].name == "Oracle"


@settings(max_examples=100, deadline=None)
@given(random_circuits())
def test_qasm_round_trip_property(c):
    assert circuits_equal(import_qasm(export_qasm(c), c.name), c)
