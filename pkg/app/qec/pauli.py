# Álgebra de Pauli sin fases

from typing import Iterable

import numpy as np

from .errors import DimensionError

# Código por qubit: x + 2z  ->  I=0, X=1, Z=2, Y=3
PAULI_CODES = {"I": 0, "X": 1, "Z": 2, "Y": 3}
CODE_SYMBOLS = "IXZY"


class PauliOperator:
    """Operador de Pauli de n qubits como par de vectores binarios (parte X, parte Z)"""

    __slots__ = ("x_part", "z_part")

    def __init__(self, x_part: Iterable[int], z_part: Iterable[int]):
        x = np.array(x_part, dtype=np.uint8) % 2
        z = np.array(z_part, dtype=np.uint8) % 2
        if x.ndim != 1 or x.shape != z.shape:
            raise DimensionError(f"x_part {x.shape} y z_part {z.shape} deben ser vectores del mismo largo")
        x.setflags(write=False)
        z.setflags(write=False)
        self.x_part = x
        self.z_part = z

    @property
    def n(self) -> int:
        return int(self.x_part.shape[0])

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @classmethod
    def x_type(cls, n: int, qubits: Iterable[int]) -> "PauliOperator":
        x = np.zeros(n, dtype=np.uint8)
        x[list(qubits)] = 1
        return cls(x, np.zeros(n, dtype=np.uint8))

    @classmethod
    def z_type(cls, n: int, qubits: Iterable[int]) -> "PauliOperator":
        z = np.zeros(n, dtype=np.uint8)
        z[list(qubits)] = 1
        return cls(np.zeros(n, dtype=np.uint8), z)

    @classmethod
    def from_string(cls, text: str) -> "PauliOperator":
        """Construye el operador desde la forma textual "IXZY..." """
        text = text.strip().upper()
        try:
            codes = np.array([PAULI_CODES[c] for c in text], dtype=np.uint8)
        except KeyError as e:
            raise DimensionError(f"Símbolo de Pauli inválido: {e.args[0]!r}") from None
        return cls.from_codes(codes)

    @classmethod
    def from_codes(cls, codes: np.ndarray) -> "PauliOperator":
        codes = np.asarray(codes, dtype=np.uint8)
        return cls(codes & 1, codes >> 1)

    def codes(self) -> np.ndarray:
        return (self.x_part + 2 * self.z_part).astype(np.uint8)

    def to_string(self) -> str:
        return "".join(CODE_SYMBOLS[c] for c in self.codes())

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.x_part | self.z_part)

    def is_identity(self) -> bool:
        return not (self.x_part.any() or self.z_part.any())

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.x_part, other.x_part)
            and np.array_equal(self.z_part, other.z_part)
        )

    def __hash__(self) -> int:
        return hash((self.x_part.tobytes(), self.z_part.tobytes()))

    def __repr__(self) -> str:
        return f"PauliOperator('{self.to_string()}')"


def _check_sizes(f: PauliOperator, g: PauliOperator):
    if f.n != g.n:
        raise DimensionError(f"Operadores de tamaños distintos: {f.n} != {g.n}")


def multiply(f: PauliOperator, g: PauliOperator) -> PauliOperator:
    """Producto en el grupo de Pauli ignorando la fase"""
    _check_sizes(f, g)
    return PauliOperator(f.x_part ^ g.x_part, f.z_part ^ g.z_part)


def weight(f: PauliOperator) -> int:
    """Peso de Hamming: qubits donde el operador actúa no trivialmente"""
    return int(np.count_nonzero(f.x_part | f.z_part))


def commutes(f: PauliOperator, g: PauliOperator) -> bool:
    _check_sizes(f, g)
    form = np.count_nonzero(f.x_part & g.z_part) + np.count_nonzero(f.z_part & g.x_part)
    return int(form) % 2 == 0
