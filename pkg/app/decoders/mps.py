# Estados y operadores de producto de matrices (tensores reales)

import logging
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.linalg import qr, svd

from app.qec.errors import DegenerateStateError, DimensionError, ParameterError

logger = logging.getLogger(__name__)


@dataclass
class MatrixProductState:
    """MPS con tensores de forma (2, r, c); valor = sign · exp(log_scale) · ψ(tensores)"""

    tensors: List[np.ndarray]
    log_scale: float = 0.0
    sign: float = 1.0

    def __post_init__(self):
        self.tensors = [np.asarray(t, dtype=float) for t in self.tensors]
        if not self.tensors:
            raise DimensionError("Un MPS necesita al menos un sitio")
        if self.tensors[0].shape[1] != 1 or self.tensors[-1].shape[2] != 1:
            raise DimensionError("Los enlaces de borde de un MPS deben tener dimensión 1")
        for a, b in zip(self.tensors, self.tensors[1:]):
            if a.shape[2] != b.shape[1]:
                raise DimensionError(f"Enlaces incompatibles: {a.shape} seguido de {b.shape}")

    @property
    def length(self) -> int:
        return len(self.tensors)

    def bond_dimension(self) -> int:
        return max(max(t.shape[1], t.shape[2]) for t in self.tensors)

    def to_dense(self) -> np.ndarray:
        """Vector denso de 2^L componentes (el primer sitio es el bit más significativo)"""
        vec = self.tensors[0][:, 0, :]
        for t in self.tensors[1:]:
            vec = np.einsum("pa,xab->pxb", vec, t).reshape(-1, t.shape[2])
        return self.sign * math.exp(self.log_scale) * vec[:, 0]

    def copy(self) -> "MatrixProductState":
        return MatrixProductState([t.copy() for t in self.tensors], self.log_scale, self.sign)


@dataclass
class MatrixProductOperator:
    """MPO con tensores de forma (x_out, y_in, r, c)"""

    tensors: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        self.tensors = [np.asarray(t, dtype=float) for t in self.tensors]
        if self.tensors and (self.tensors[0].shape[2] != 1 or self.tensors[-1].shape[3] != 1):
            raise DimensionError("Los enlaces de borde de un MPO deben tener dimensión 1")

    @property
    def length(self) -> int:
        return len(self.tensors)

    @classmethod
    def identity(cls, length: int) -> "MatrixProductOperator":
        eye = np.eye(2).reshape(2, 2, 1, 1)
        return cls([eye.copy() for _ in range(length)])

    def bond_dimension(self) -> int:
        return max(max(t.shape[2], t.shape[3]) for t in self.tensors)

    def to_dense(self) -> np.ndarray:
        mat = self.tensors[0][:, :, 0, :]
        for t in self.tensors[1:]:
            mat = np.einsum("xya,pqab->xpyqb", mat, t)
            mat = mat.reshape(mat.shape[0] * mat.shape[1], mat.shape[2] * mat.shape[3], -1)
        return mat[:, :, 0]


def apply_mpo(op: MatrixProductOperator, psi: MatrixProductState) -> MatrixProductState:
    """Ô|ψ⟩ exacto; la dimensión de enlace se multiplica"""
    if op.length != psi.length:
        raise DimensionError(f"Longitudes distintas: MPO {op.length}, MPS {psi.length}")
    tensors = []
    for o, a in zip(op.tensors, psi.tensors):
        t = np.einsum("xyab,ycd->xacbd", o, a)
        tensors.append(t.reshape(2, o.shape[2] * a.shape[1], o.shape[3] * a.shape[2]))
    return MatrixProductState(tensors, psi.log_scale, psi.sign)


def left_canonical(psi: MatrixProductState) -> Tuple[float, MatrixProductState]:
    """Forma canónica izquierda por QR económicos; devuelve (log Γ, B) con valor(ψ) = Γ · valor(B)"""
    carry = np.ones((1, 1))
    log_gamma = 0.0
    tensors = []
    for a in psi.tensors:
        a = np.einsum("ij,xjk->xik", carry, a)
        r = a.shape[1]
        q, carry = qr(a.reshape(2 * r, a.shape[2]), mode="economic")
        tensors.append(q.reshape(2, r, q.shape[1]))
        norm = np.max(np.abs(carry))
        if norm == 0.0:
            raise DegenerateStateError("Estado MPS nulo en la forma canónica izquierda")
        carry = carry / norm
        log_gamma += math.log(norm)
    scalar = float(carry[0, 0])
    log_gamma += math.log(abs(scalar))
    out = MatrixProductState(tensors, psi.log_scale, psi.sign * math.copysign(1.0, scalar))
    return log_gamma, out


def truncate(psi: MatrixProductState, chi: int) -> MatrixProductState:
    """Truncamiento secuencial de Schmidt a dimensión chi (barrido de derecha a izquierda)"""
    if chi < 1:
        raise ParameterError(f"chi debe ser >= 1, se recibió chi={chi}")
    log_gamma, lcf = left_canonical(psi)
    tensors = [t.copy() for t in lcf.tensors]
    log_scale = lcf.log_scale + log_gamma
    sign = lcf.sign
    for m in range(len(tensors) - 1, -1, -1):
        a = tensors[m]
        c = a.shape[2]
        u, s, vh = svd(np.concatenate([a[0], a[1]], axis=1), full_matrices=False)
        k = max(1, min(chi, int(np.count_nonzero(s > 0.0)), len(s)))
        tensors[m] = np.stack([vh[:k, :c], vh[:k, c:]])
        us = u[:, :k] * s[:k]
        if m > 0:
            tensors[m - 1] = np.einsum("xij,jk->xik", tensors[m - 1], us)
        else:
            scalar = float(us[0, 0])
            if scalar == 0.0:
                raise DegenerateStateError("Estado MPS nulo tras el truncamiento")
            log_scale += math.log(abs(scalar))
            sign *= math.copysign(1.0, scalar)
    return MatrixProductState(tensors, log_scale, sign)


def overlap(bra: MatrixProductState, ket: MatrixProductState) -> Tuple[float, float]:
    """⟨bra|ket⟩ para tensores reales como (signo, log|valor|); log = -inf si es cero"""
    if bra.length != ket.length:
        raise DimensionError(f"Longitudes distintas: {bra.length} y {ket.length}")
    env = np.ones((1, 1))
    log_acc = bra.log_scale + ket.log_scale
    for b, a in zip(bra.tensors, ket.tensors):
        env = np.einsum("xia,ij,xjb->ab", b, env, a)
        norm = np.max(np.abs(env))
        if norm == 0.0:
            return 0.0, -math.inf
        env = env / norm
        log_acc += math.log(norm)
    value = float(env[0, 0])
    if value == 0.0:
        return 0.0, -math.inf
    return bra.sign * ket.sign * math.copysign(1.0, value), log_acc + math.log(abs(value))
