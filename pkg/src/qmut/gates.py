"""The mutable gate catalog.

Thirty-eight gates, grouped into equivalence classes keyed ``"<n>q<m>p"``
(``n`` qubits, ``m`` parameters). Two gates in the same class can be swapped
for one another without touching qubits or parameters, which is what keeps
renamed circuits well formed.

Matrices use the little-endian convention: the first qubit an instruction
names is the least significant bit of the matrix index. For controlled gates
the leading qubit(s) are the controls.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import cos, sin, sqrt
from typing import Callable, Sequence

import numpy as np

from .errors import ArityMismatch, InvalidArgument, UnknownGate


@dataclass(frozen=True, order=True)
class EquivClassKey:
    n: int
    m: int

    def __str__(self) -> str:
        return f"{self.n}q{self.m}p"

    @classmethod
    def parse(cls, text: str) -> "EquivClassKey":
        try:
            n, rest = text.split("q")
            return cls(int(n), int(rest.rstrip("p")))
        except ValueError:
            raise InvalidArgument(f"malformed class key {text!r}") from None


# Canonical member order is the order gates are listed in each class.
CLASSES: dict[str, tuple[str, ...]] = {
    "1q0p": ("x", "h", "z", "y", "t", "sx", "sdg", "s", "tdg", "id"),
    "1q1p": ("p", "u1", "r", "rz", "ry", "rx"),
    "1q2p": ("u2",),
    "1q3p": ("u", "u3"),
    "2q0p": ("swap", "iswap", "dcx", "cz", "cy", "cx", "csx", "ch"),
    "2q1p": ("rzz", "rzx", "ryy", "rxx", "cu1", "crz", "cry", "crx", "cp"),
    "3q0p": ("cswap", "ccx"),
}


# -- matrix building blocks -------------------------------------------------

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / sqrt(2)
_S = np.diag([1, 1j]).astype(complex)
_T = np.diag([1, np.exp(1j * np.pi / 4)])
_SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
_ISWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def _controlled(target: np.ndarray, num_controls: int = 1) -> np.ndarray:
    """Controlled version of ``target`` with the controls on the low bits."""
    dim_c = 2**num_controls
    on = np.zeros((dim_c, dim_c), dtype=complex)
    on[-1, -1] = 1
    off = np.eye(dim_c, dtype=complex) - on
    eye_t = np.eye(target.shape[0], dtype=complex)
    return np.kron(eye_t, off) + np.kron(target, on)


def _pauli_rotation(pauli: np.ndarray, theta: float) -> np.ndarray:
    # exp(-i theta/2 P) for an involutory P
    dim = pauli.shape[0]
    return cos(theta / 2) * np.eye(dim, dtype=complex) - 1j * sin(theta / 2) * pauli


def _phase(lam: float) -> np.ndarray:
    return np.diag([1, np.exp(1j * lam)])


def _rx(theta: float) -> np.ndarray:
    return _pauli_rotation(_X, theta)


def _ry(theta: float) -> np.ndarray:
    return _pauli_rotation(_Y, theta)


def _rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def _r(theta: float) -> np.ndarray:
    # R(theta, phi) with phi pinned to 0; the class table gives r one angle.
    return _rx(theta)


def _u(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = cos(theta / 2), sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


def _u2(phi: float, lam: float) -> np.ndarray:
    return np.array(
        [[1, -np.exp(1j * lam)], [np.exp(1j * phi), np.exp(1j * (phi + lam))]],
        dtype=complex,
    ) / sqrt(2)


_CX = _controlled(_X)
# cx(q1 -> q0) in the same little-endian frame
_CX_REV = _SWAP @ _CX @ _SWAP


_FACTORIES: dict[str, Callable[..., np.ndarray]] = {
    # 1q0p
    "x": lambda: _X,
    "h": lambda: _H,
    "z": lambda: _Z,
    "y": lambda: _Y,
    "t": lambda: _T,
    "sx": lambda: _SX,
    "sdg": lambda: _S.conj(),
    "s": lambda: _S,
    "tdg": lambda: _T.conj(),
    "id": lambda: _I2,
    # 1q1p
    "p": _phase,
    "u1": _phase,
    "r": _r,
    "rz": _rz,
    "ry": _ry,
    "rx": _rx,
    # 1q2p
    "u2": _u2,
    # 1q3p
    "u": _u,
    "u3": _u,
    # 2q0p
    "swap": lambda: _SWAP,
    "iswap": lambda: _ISWAP,
    "dcx": lambda: _CX_REV @ _CX,
    "cz": lambda: _controlled(_Z),
    "cy": lambda: _controlled(_Y),
    "cx": lambda: _CX,
    "csx": lambda: _controlled(_SX),
    "ch": lambda: _controlled(_H),
    # 2q1p; kron(a, b) puts b on the first qubit
    "rzz": lambda t: _pauli_rotation(np.kron(_Z, _Z), t),
    "rzx": lambda t: _pauli_rotation(np.kron(_X, _Z), t),
    "ryy": lambda t: _pauli_rotation(np.kron(_Y, _Y), t),
    "rxx": lambda t: _pauli_rotation(np.kron(_X, _X), t),
    "cu1": lambda lam: _controlled(_phase(lam)),
    "crz": lambda t: _controlled(_rz(t)),
    "cry": lambda t: _controlled(_ry(t)),
    "crx": lambda t: _controlled(_rx(t)),
    "cp": lambda lam: _controlled(_phase(lam)),
    # 3q0p
    "cswap": lambda: _controlled(_SWAP, 1),
    "ccx": lambda: _controlled(_X, 2),
}


@dataclass(frozen=True)
class GateSpec:
    name: str
    class_key: EquivClassKey

    @property
    def num_qubits(self) -> int:
        return self.class_key.n

    @property
    def num_params(self) -> int:
        return self.class_key.m

    def unitary(self, params: Sequence[float] = ()) -> np.ndarray:
        return unitary_of(self.name, params)


class GateCatalog:
    """Immutable lookup tables over the mutable gate set."""

    def __init__(self, classes: dict[str, tuple[str, ...]]):
        self._classes = {EquivClassKey.parse(k): tuple(v) for k, v in classes.items()}
        self._specs = {
            name: GateSpec(name, key)
            for key, members in self._classes.items()
            for name in members
        }

    def __contains__(self, name: object) -> bool:
        return name in self._specs

    def __len__(self) -> int:
        return len(self._specs)

    def __iter__(self):
        return iter(self._specs)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._specs)

    @property
    def classes(self) -> dict[EquivClassKey, tuple[str, ...]]:
        return dict(self._classes)

    def spec(self, name: str) -> GateSpec:
        try:
            return self._specs[name]
        except KeyError:
            raise UnknownGate(f"{name!r} is not a mutable catalog gate") from None


CATALOG = GateCatalog(CLASSES)
MUTABLE_GATE_SET = frozenset(CATALOG.names)


def _as_key(key: EquivClassKey | str) -> EquivClassKey:
    return EquivClassKey.parse(key) if isinstance(key, str) else key


def equivalence_class_of(name: str) -> EquivClassKey:
    return CATALOG.spec(name).class_key


def class_members(key: EquivClassKey | str) -> tuple[str, ...]:
    k = _as_key(key)
    try:
        return CATALOG.classes[k]
    except KeyError:
        raise InvalidArgument(f"no equivalence class {k}") from None


def eligible_for_insertion(num_qubits: int) -> tuple[str, ...]:
    """Catalog gates that fit on a circuit of ``num_qubits`` qubits."""
    if num_qubits < 1:
        raise InvalidArgument("num_qubits must be >= 1")
    return tuple(n for n in CATALOG.names if CATALOG.spec(n).num_qubits <= num_qubits)


def unitary_of(name: str, params: Sequence[float] = ()) -> np.ndarray:
    return _readonly_unitary(name, params).copy()


def _readonly_unitary(name: str, params: Sequence[float]) -> np.ndarray:
    spec = CATALOG.spec(name)
    params = tuple(float(p) for p in params)
    if len(params) != spec.num_params:
        raise ArityMismatch(
            f"{name} takes {spec.num_params} parameter(s), got {len(params)}"
        )
    return _cached_unitary(name, params)


@lru_cache(maxsize=4096)
def _cached_unitary(name: str, params: tuple[float, ...]) -> np.ndarray:
    mat = np.asarray(_FACTORIES[name](*params), dtype=complex)
    mat.setflags(write=False)
    return mat
