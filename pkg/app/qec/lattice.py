# Geometría del código de superficie

import logging
from enum import Enum
from functools import lru_cache
from typing import Iterable, List, Optional, Tuple

import numpy as np

from .errors import DimensionError, ParameterError, PreconditionError
from .pauli import PauliOperator, multiply

logger = logging.getLogger(__name__)


class LogicalClass(str, Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"


# Orden fijo de desempate entre clases
CLASS_ORDER = (LogicalClass.I, LogicalClass.X, LogicalClass.Y, LogicalClass.Z)


class Syndrome:
    """Síndrome: un bit por estabilizador de sitio A_u y uno por plaqueta B_p"""

    __slots__ = ("site_bits", "plaquette_bits")

    def __init__(self, site_bits: Iterable[int], plaquette_bits: Iterable[int]):
        sites = np.array(site_bits, dtype=np.uint8) % 2
        plaquettes = np.array(plaquette_bits, dtype=np.uint8) % 2
        sites.setflags(write=False)
        plaquettes.setflags(write=False)
        self.site_bits = sites
        self.plaquette_bits = plaquettes

    @classmethod
    def trivial(cls, d: int) -> "Syndrome":
        m = d * (d - 1)
        return cls(np.zeros(m, dtype=np.uint8), np.zeros(m, dtype=np.uint8))

    @classmethod
    def from_bitstring(cls, d: int, text: str) -> "Syndrome":
        """Bits de sitio seguidos de bits de plaqueta, ambos en orden fila a fila"""
        bits = [c for c in text.strip() if not c.isspace()]
        m = d * (d - 1)
        if len(bits) != 2 * m or any(c not in "01" for c in bits):
            raise DimensionError(f"Se esperaban {2 * m} bits 0/1 para d={d}, llegaron {len(bits)}")
        values = np.array([int(c) for c in bits], dtype=np.uint8)
        return cls(values[:m], values[m:])

    def to_bitstring(self) -> str:
        return "".join(str(b) for b in np.concatenate([self.site_bits, self.plaquette_bits]))

    def is_trivial(self) -> bool:
        return not (self.site_bits.any() or self.plaquette_bits.any())

    def key(self) -> bytes:
        return self.site_bits.tobytes() + b"|" + self.plaquette_bits.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Syndrome):
            return NotImplemented
        return np.array_equal(self.site_bits, other.site_bits) and np.array_equal(
            self.plaquette_bits, other.plaquette_bits
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Syndrome('{self.to_bitstring()}')"


class SurfaceCodeLattice:
    """Código de superficie de distancia d con bordes lisos arriba/abajo y rugosos a izquierda/derecha.

    Aristas numeradas por columnas: H^1 (de arriba a abajo), V^1, H^2, ..., H^d.
    Sitio (i, j): fila i en [0, d), columna j en [0, d-1). Plaqueta (i, j): i en [0, d-1), j en [0, d).
    """

    def __init__(self, d: int):
        if d < 3 or d % 2 == 0:
            raise ParameterError(f"La distancia debe ser impar y >= 3, se recibió d={d}")
        self.d = d
        self.n = d * d + (d - 1) * (d - 1)
        self.horizontal_columns: List[List[int]] = [
            [self.h_edge(i, j) for i in range(d)] for j in range(d)
        ]
        self.vertical_columns: List[List[int]] = [
            [self.v_edge(i, j) for i in range(d - 1)] for j in range(d - 1)
        ]
        self.site_stabilizers: List[Tuple[int, ...]] = [
            tuple(self._site_support(i, j)) for i in range(d) for j in range(d - 1)
        ]
        self.plaquette_stabilizers: List[Tuple[int, ...]] = [
            tuple(self._plaquette_support(i, j)) for i in range(d - 1) for j in range(d)
        ]
        self.site_matrix = self._support_matrix(self.site_stabilizers)
        self.plaquette_matrix = self._support_matrix(self.plaquette_stabilizers)
        self.logical_x = PauliOperator.x_type(self.n, [self.h_edge(0, j) for j in range(d)])
        self.logical_z = PauliOperator.z_type(self.n, self.horizontal_columns[d - 1])

    # Índices de aristas

    def h_edge(self, i: int, j: int) -> int:
        """Arista horizontal de la fila i en la columna H^{j+1}"""
        return j * (2 * self.d - 1) + i

    def v_edge(self, i: int, j: int) -> int:
        """Arista vertical de la fila i en la columna V^{j+1}"""
        return j * (2 * self.d - 1) + self.d + i

    def site_index(self, i: int, j: int) -> int:
        return i * (self.d - 1) + j

    def plaquette_index(self, i: int, j: int) -> int:
        return i * self.d + j

    def _site_support(self, i: int, j: int) -> List[int]:
        edges = [self.h_edge(i, j), self.h_edge(i, j + 1)]
        if i >= 1:
            edges.append(self.v_edge(i - 1, j))
        if i <= self.d - 2:
            edges.append(self.v_edge(i, j))
        return sorted(edges)

    def _plaquette_support(self, i: int, j: int) -> List[int]:
        edges = [self.h_edge(i, j), self.h_edge(i + 1, j)]
        if j >= 1:
            edges.append(self.v_edge(i, j - 1))
        if j <= self.d - 2:
            edges.append(self.v_edge(i, j))
        return sorted(edges)

    def _support_matrix(self, supports: List[Tuple[int, ...]]) -> np.ndarray:
        matrix = np.zeros((len(supports), self.n), dtype=np.uint8)
        for row, support in enumerate(supports):
            matrix[row, list(support)] = 1
        matrix.setflags(write=False)
        return matrix

    # Generadores como operadores de Pauli

    def site_generator(self, k: int) -> PauliOperator:
        return PauliOperator.z_type(self.n, self.site_stabilizers[k])

    def plaquette_generator(self, k: int) -> PauliOperator:
        return PauliOperator.x_type(self.n, self.plaquette_stabilizers[k])

    def generators(self) -> List[PauliOperator]:
        sites = [self.site_generator(k) for k in range(len(self.site_stabilizers))]
        plaquettes = [self.plaquette_generator(k) for k in range(len(self.plaquette_stabilizers))]
        return sites + plaquettes

    def summary(self) -> str:
        return (
            f"SurfaceCodeLattice(d={self.d}, n={self.n}, "
            f"sites={len(self.site_stabilizers)}, plaquettes={len(self.plaquette_stabilizers)})"
        )

    def __repr__(self) -> str:
        return self.summary()


@lru_cache(maxsize=32)
def build_lattice(d: int) -> SurfaceCodeLattice:
    """Construye (y cachea) la retícula de distancia d"""
    lat = SurfaceCodeLattice(d)
    logger.debug(f"Retícula construida: {lat.summary()}")
    return lat


def _check_operator(lat: SurfaceCodeLattice, f: PauliOperator):
    if f.n != lat.n:
        raise DimensionError(f"El operador actúa sobre {f.n} qubits, la retícula tiene {lat.n}")


def syndrome_of(lat: SurfaceCodeLattice, f: PauliOperator) -> Syndrome:
    _check_operator(lat, f)
    # A_u (tipo Z) detecta la parte X; B_p (tipo X) detecta la parte Z
    site_bits = (lat.site_matrix.astype(np.int64) @ f.x_part) % 2
    plaquette_bits = (lat.plaquette_matrix.astype(np.int64) @ f.z_part) % 2
    return Syndrome(site_bits, plaquette_bits)


def canonical_error(lat: SurfaceCodeLattice, s: Syndrome) -> PauliOperator:
    """Error f(s): cadenas X hacia el borde izquierdo y cadenas Z hacia el borde superior"""
    d = lat.d
    m = d * (d - 1)
    if s.site_bits.shape != (m,) or s.plaquette_bits.shape != (m,):
        raise DimensionError(f"Síndrome con tamaño incompatible para d={d}")
    x = np.zeros(lat.n, dtype=np.uint8)
    z = np.zeros(lat.n, dtype=np.uint8)
    for k in np.flatnonzero(s.site_bits):
        i, j = divmod(int(k), d - 1)
        for col in range(j + 1):
            x[lat.h_edge(i, col)] ^= 1
    for k in np.flatnonzero(s.plaquette_bits):
        i, j = divmod(int(k), d)
        for row in range(i + 1):
            z[lat.h_edge(row, j)] ^= 1
    return PauliOperator(x, z)


def logical_operator(lat: SurfaceCodeLattice, cls: LogicalClass) -> PauliOperator:
    cls = LogicalClass(cls)
    if cls == LogicalClass.I:
        return PauliOperator.identity(lat.n)
    if cls == LogicalClass.X:
        return lat.logical_x
    if cls == LogicalClass.Z:
        return lat.logical_z
    return multiply(lat.logical_x, lat.logical_z)


def classify_residual(lat: SurfaceCodeLattice, r: PauliOperator) -> LogicalClass:
    """Clase lógica (I, X, Y, Z) de un operador con síndrome nulo"""
    if not syndrome_of(lat, r).is_trivial():
        raise PreconditionError("El residuo tiene síndrome no nulo")
    # La clase contiene X̄ si anticonmuta con Z̄, y contiene Z̄ si anticonmuta con X̄
    has_x = np.count_nonzero(r.x_part & lat.logical_z.z_part) % 2 == 1
    has_z = np.count_nonzero(r.z_part & lat.logical_x.x_part) % 2 == 1
    if has_x and has_z:
        return LogicalClass.Y
    if has_x:
        return LogicalClass.X
    if has_z:
        return LogicalClass.Z
    return LogicalClass.I


def representative(lat: SurfaceCodeLattice, f: PauliOperator, cls: LogicalClass) -> PauliOperator:
    """Representante f·L̄ de la clase indicada"""
    return multiply(f, logical_operator(lat, cls))


def pick_class(log_probs: dict, tolerance: float = 0.0) -> Optional[LogicalClass]:
    """Clase más probable; los empates (diferencia <= tolerance) se resuelven por CLASS_ORDER"""
    best = None
    for cls in CLASS_ORDER:
        value = log_probs.get(cls, -np.inf)
        if not np.isfinite(value) and value < 0:
            continue
        if best is None or value > log_probs[best] + tolerance:
            best = cls
    return best


def compose_classes(a: LogicalClass, b: LogicalClass) -> LogicalClass:
    """Clase del producto de representantes de las clases a y b"""
    has_x = (LogicalClass(a) in (LogicalClass.X, LogicalClass.Y)) != (LogicalClass(b) in (LogicalClass.X, LogicalClass.Y))
    has_z = (LogicalClass(a) in (LogicalClass.Z, LogicalClass.Y)) != (LogicalClass(b) in (LogicalClass.Z, LogicalClass.Y))
    if has_x and has_z:
        return LogicalClass.Y
    if has_x:
        return LogicalClass.X
    if has_z:
        return LogicalClass.Z
    return LogicalClass.I
