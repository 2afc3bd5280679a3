from typing import List

import numpy as np
import pytest

from app.decoders.mps import MatrixProductOperator, MatrixProductState
from app.qec.lattice import build_lattice


@pytest.fixture
def lat3():
    return build_lattice(3)


@pytest.fixture
def lat5():
    return build_lattice(5)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_mps(rng: np.random.Generator, bonds: List[int]) -> MatrixProductState:
    """MPS aleatorio con dimensiones de enlace bonds = [1, r1, ..., 1]"""
    return MatrixProductState([rng.normal(size=(2, bonds[k], bonds[k + 1])) for k in range(len(bonds) - 1)])


def random_mpo(rng: np.random.Generator, bonds: List[int]) -> MatrixProductOperator:
    return MatrixProductOperator([rng.normal(size=(2, 2, bonds[k], bonds[k + 1])) for k in range(len(bonds) - 1)])


def random_syndrome_bits(rng: np.random.Generator, d: int):
    m = d * (d - 1)
    return rng.integers(0, 2, m), rng.integers(0, 2, m)
