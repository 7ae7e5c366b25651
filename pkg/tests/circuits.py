"""Reference circuits shared by the test modules.

Reconstructions of the three benchmark programs at the sizes used for the
coverage budgets: a 9-gate Bernstein-Vazirani circuit, a 17-instruction
circuit with 12 mutable gates, and a 24-gate 6-qubit inverse QFT.
"""

from math import pi

from qmut.circuit import build_circuit, opaque, placeholder


def bv_circuit():
    # hidden string 11 on two data qubits, ancilla on q2
    return build_circuit(
        "BV",
        3,
        [
            ("x", 2),
            ("h", 0),
            ("h", 1),
            ("h", 2),
            ("cx", (0, 2)),
            ("cx", (1, 2)),
            ("h", 0),
            ("h", 1),
            ("h", 2),
        ],
    )


def ce_circuit():
    return build_circuit(
        "CE",
        4,
        [
            placeholder((0, 1), "Input"),
            opaque("barrier", (0, 1, 2, 3)),
            ("h", 2),
            ("h", 3),
            ("cx", (0, 2)),
            ("cx", (1, 3)),
            ("cz", (2, 3)),
            opaque("barrier", (0, 1, 2, 3)),
            placeholder((2, 3), "Oracle"),
            ("x", 0),
            ("ccx", (0, 1, 2)),
            ("swap", (1, 3)),
            opaque("barrier", (0, 1, 2, 3)),
            ("h", 2),
            ("h", 3),
            ("rz", 3, (0.5,)),
            ("cx", (2, 3)),
        ],
    )


def iqft_circuit(n=6):
    ops = [("swap", (q, n - 1 - q)) for q in range(n // 2)]
    for j in range(n):
        for k in range(j):
            ops.append(("cu1", (k, j), (-pi / 2 ** (j - k),)))
        ops.append(("h", j))
    return build_circuit("IQFT", n, ops)


def placeholder_circuits():
    """Circuits carrying one or two placeholders."""
    one = build_circuit(
        "oracle1",
        3,
        [("h", 0), ("h", 1), placeholder((0, 1, 2), "Oracle"), ("h", 0), ("cx", (0, 1)), ("u2", 2, (0.1, 0.2))],
    )
    two = build_circuit(
        "oracle2",
        2,
        [placeholder(0), ("h", 0), ("cx", (0, 1)), placeholder((1, 0), "Oracle"), ("rx", 1, (0.7,)), ("h", 0)],
    )
    return [one, two]
