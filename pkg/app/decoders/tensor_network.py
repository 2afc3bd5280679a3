# Red tensorial de π(fG) sobre la retícula extendida (2d−1)×(2d−1)

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from app.qec.lattice import SurfaceCodeLattice
from app.qec.noise import NoiseModel
from app.qec.pauli import PauliOperator

from .mps import MatrixProductOperator, MatrixProductState

logger = logging.getLogger(__name__)

# Ejes de cada tensor: (arriba, izquierda, abajo, derecha)
UP, LEFT, DOWN, RIGHT = range(4)

_UP, _LEFT, _DOWN, _RIGHT = np.indices((2, 2, 2, 2))


@dataclass
class SiteTensor:
    """Nodo de la red: "s" (estabilizador), "h" o "v" (qubit); ejes ausentes con dimensión 1"""

    kind: str
    row: int
    col: int
    values: np.ndarray
    edge: Optional[int] = None


def _delta_tensor() -> np.ndarray:
    return ((_UP == _LEFT) & (_LEFT == _DOWN) & (_DOWN == _RIGHT)).astype(float)


def _qubit_tensor(table: np.ndarray, fx: int, fz: int, x_bits: np.ndarray, z_bits: np.ndarray) -> np.ndarray:
    codes = (x_bits ^ fx) + 2 * (z_bits ^ fz)
    return table[codes]


def _missing_axes(lat: SurfaceCodeLattice, row: int, col: int) -> List[int]:
    last = 2 * lat.d - 2
    missing = []
    if row == 0:
        missing.append(UP)
    if col == 0:
        missing.append(LEFT)
    if row == last:
        missing.append(DOWN)
    if col == last:
        missing.append(RIGHT)
    return missing


def build_column(lat: SurfaceCodeLattice, m: NoiseModel, f: PauliOperator, col: int) -> List[SiteTensor]:
    """Tensores de la columna col (par: H^{col/2+1}, impar: V^{(col+1)/2}) de arriba a abajo"""
    table = m.probability_table()
    column = []
    j = col // 2
    for row in range(2 * lat.d - 1):
        i = row // 2
        missing = _missing_axes(lat, row, col)
        qubit_node = (row % 2 == 0) == (col % 2 == 0)
        if qubit_node:
            if col % 2 == 0:
                kind, edge = "h", lat.h_edge(i, j)
                # h: Z desde los sitios izquierda/derecha, X desde las plaquetas arriba/abajo
                values = _qubit_tensor(table, f.x_part[edge], f.z_part[edge], _UP ^ _DOWN, _LEFT ^ _RIGHT)
            else:
                kind, edge = "v", lat.v_edge(i, j)
                values = _qubit_tensor(table, f.x_part[edge], f.z_part[edge], _LEFT ^ _RIGHT, _UP ^ _DOWN)
            for axis in missing:
                values = np.take(values, [0], axis=axis)
        else:
            kind, edge = "s", None
            values = _delta_tensor()
            for axis in missing:
                values = values.sum(axis=axis, keepdims=True)
        column.append(SiteTensor(kind=kind, row=row, col=col, values=values, edge=edge))
    return column


def build_network(lat: SurfaceCodeLattice, m: NoiseModel, f: PauliOperator) -> List[List[SiteTensor]]:
    """Rejilla completa indexada como grid[col][row]"""
    return [build_column(lat, m, f, col) for col in range(2 * lat.d - 1)]


def column_to_mps_first(column: List[SiteTensor]) -> MatrixProductState:
    # índice físico: enlace derecho
    return MatrixProductState([t.values[:, 0, :, :].transpose(2, 0, 1) for t in column])


def column_to_mps_last(column: List[SiteTensor]) -> MatrixProductState:
    # índice físico: enlace izquierdo
    return MatrixProductState([t.values[:, :, :, 0].transpose(1, 0, 2) for t in column])


def column_to_mpo(column: List[SiteTensor]) -> MatrixProductOperator:
    # (salida = derecha, entrada = izquierda, arriba, abajo)
    return MatrixProductOperator([t.values.transpose(3, 1, 0, 2) for t in column])


def columns_to_mpo_mps(
    grid: List[List[SiteTensor]],
) -> Tuple[MatrixProductState, List[MatrixProductOperator], MatrixProductState]:
    """(Ĥ¹, [V̂¹, Ĥ², ..., V̂^{d−1}], Ĥ^d)"""
    first = column_to_mps_first(grid[0])
    middle = [column_to_mpo(column) for column in grid[1:-1]]
    last = column_to_mps_last(grid[-1])
    return first, middle, last
