# Decodificador ML exacto para ruido X (evolución de un estado gaussiano fermiónico)

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve, qr

from app.config import settings
from app.qec.errors import (
    DimensionError,
    NumericalInvariantError,
    ParameterError,
    PreconditionError,
    SingularUpdateError,
)
from app.qec.lattice import (
    LogicalClass,
    SurfaceCodeLattice,
    Syndrome,
    canonical_error,
    classify_residual,
    representative,
    syndrome_of,
)
from app.qec.noise import NoiseModel, error_probability
from app.qec.pauli import PauliOperator

from .base import DecodeResult

logger = logging.getLogger(__name__)

DECODER_NAME = "exact"

# Valores negativos de det(M+A) por encima de este umbral se tratan como cero
NEGATIVE_DET_FLOOR = -1e-12


@dataclass
class GaussianState:
    """Matriz de covarianza M (2d x 2d) y log de la norma Γ"""

    M: np.ndarray
    log_gamma: float
    max_defect: float = 0.0

    def defect(self) -> float:
        """‖MMᵀ − I‖_max"""
        return float(np.max(np.abs(self.M @ self.M.T - np.eye(self.M.shape[0]))))


@dataclass
class ColumnRecord:
    column: str
    log_gamma: float
    defect: float
    condition: float


@dataclass
class GaussianTrace:
    """Historial columna a columna de una evaluación de π(fG^X)"""

    d: int
    eps: float
    records: List[ColumnRecord] = field(default_factory=list)
    log_probability: Optional[float] = None

    @property
    def max_defect(self) -> float:
        return max((r.defect for r in self.records), default=0.0)


def edge_weights(lat: SurfaceCodeLattice, f: PauliOperator, eps: float) -> np.ndarray:
    """w_e = ε/(1−ε) fuera de f y (1−ε)/ε dentro de f"""
    if not 0.0 < eps < 1.0:
        raise ParameterError(f"Los pesos requieren 0 < eps < 1, se recibió eps={eps}")
    if f.z_part.any():
        raise PreconditionError("edge_weights requiere un operador de tipo X")
    ratio = eps / (1.0 - eps)
    return np.where(f.x_part == 1, 1.0 / ratio, ratio)


def standard_m0(d: int) -> np.ndarray:
    if d < 1:
        raise ParameterError(f"d debe ser >= 1, se recibió d={d}")
    m0 = np.zeros((2 * d, 2 * d))
    for a in range(d - 1):
        m0[2 * a + 1, 2 * a + 2] = 1.0
    m0[0, 2 * d - 1] = 1.0
    return m0 - m0.T


def _logdet_positive(K: np.ndarray, check_condition: bool = True):
    """log det(K) con K = M + A; det(K) >= 0 para K antisimétrica más diagonal por bloques"""
    condition = float(np.linalg.cond(K)) if check_condition else math.nan
    if check_condition and (not np.isfinite(condition) or condition > settings.COND_LIMIT):
        raise SingularUpdateError(f"(M+A) mal condicionada: cond={condition:.3e}")
    lu, piv = lu_factor(K)
    diag = np.diag(lu)
    swaps = int(np.count_nonzero(piv != np.arange(len(piv))))
    sign = np.prod(np.sign(diag)) * (-1) ** swaps
    log_abs = float(np.sum(np.log(np.abs(diag))))
    if sign <= 0:
        value = -math.exp(log_abs) if sign < 0 else 0.0
        if value > NEGATIVE_DET_FLOOR:
            raise SingularUpdateError(f"det(M+A) numéricamente nulo: {value:.3e}")
        raise NumericalInvariantError(f"det(M+A) negativo: {value:.3e}")
    return log_abs, (lu, piv), condition


def restabilize(M: np.ndarray) -> np.ndarray:
    """Proyecta M sobre las matrices ortogonales antisimétricas vía QR"""
    Q, R = qr(M)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    K = Q * signs[None, :]
    return (K - K.T) / 2.0


def _apply_update(state: GaussianState, A: np.ndarray, B: np.ndarray, log_factor: float):
    K = state.M + A
    log_det, factor, condition = _logdet_positive(K)
    M = A - B @ lu_solve(factor, B)
    M = (M - M.T) / 2.0
    if settings.RESTABILIZE:
        M = restabilize(M)
    new_state = GaussianState(M=M, log_gamma=state.log_gamma + log_factor + 0.5 * log_det)
    defect = new_state.defect()
    new_state.max_defect = max(state.max_defect, defect)
    return new_state, condition


def simulate_horizontal(state: GaussianState, w: np.ndarray):
    """Aplica Ĥ^j con los pesos w de las d aristas de la columna; devuelve (estado, cond)"""
    d = state.M.shape[0] // 2
    w = np.asarray(w, dtype=float)
    if w.shape != (d,):
        raise ParameterError(f"La columna horizontal tiene {d} aristas, llegaron {w.shape}")
    w2 = w * w
    t = (1.0 - w2) / (1.0 + w2)
    s = 2.0 * w / (1.0 + w2)
    A = np.zeros((2 * d, 2 * d))
    idx = np.arange(d)
    A[2 * idx, 2 * idx + 1] = t
    A = A - A.T
    B = np.diag(np.repeat(s, 2))
    log_factor = float(np.sum(np.log((1.0 + w2) / 2.0)))
    return _apply_update(state, A, B, log_factor)


def simulate_vertical(state: GaussianState, w: np.ndarray):
    """Aplica V̂^j con los pesos w de las d−1 aristas de la columna; devuelve (estado, cond)"""
    d = state.M.shape[0] // 2
    w = np.asarray(w, dtype=float)
    if w.shape != (d - 1,):
        raise ParameterError(f"La columna vertical tiene {d - 1} aristas, llegaron {w.shape}")
    w2 = w * w
    t = 2.0 * w / (1.0 + w2)
    s = (1.0 - w2) / (1.0 + w2)
    A = np.zeros((2 * d, 2 * d))
    idx = np.arange(d - 1)
    A[2 * idx + 1, 2 * idx + 2] = t
    A = A - A.T
    B = np.diag(np.concatenate([[1.0], np.repeat(s, 2), [1.0]]))
    log_factor = float(np.sum(np.log(1.0 + w2)))
    return _apply_update(state, A, B, log_factor)


def _in_gx(lat: SurfaceCodeLattice, f: PauliOperator) -> bool:
    if f.z_part.any() or not syndrome_of(lat, f).is_trivial():
        return False
    return classify_residual(lat, f) == LogicalClass.I


class ExactMLDecoder:
    """Decodificador ML exacto para ruido X en O(d⁴)"""

    def __init__(self, lat: SurfaceCodeLattice):
        self.lat = lat
        self.m0 = standard_m0(lat.d)
        self.m0.setflags(write=False)

    def initial_state(self) -> GaussianState:
        return GaussianState(M=self.m0.copy(), log_gamma=(self.lat.d - 1) * math.log(2.0))

    def _boundary_value(self, f: PauliOperator, eps: float) -> float:
        # eps = 0: sólo contribuye g = f; eps = 1: sólo fg = X en todos los qubits
        target = f if eps == 0.0 else f * PauliOperator.x_type(self.lat.n, range(self.lat.n))
        return 0.0 if _in_gx(self.lat, target) else -math.inf

    def trace(self, f: PauliOperator, eps: float) -> GaussianTrace:
        """Evalúa log π(fG^X) registrando Γ y el defecto de ortogonalidad tras cada columna"""
        lat = self.lat
        if f.n != lat.n:
            raise DimensionError(f"El operador actúa sobre {f.n} qubits, la retícula tiene {lat.n}")
        if f.z_part.any():
            raise PreconditionError("coset_probability_x requiere un operador de tipo X")
        result = GaussianTrace(d=lat.d, eps=eps)
        if eps in (0.0, 1.0):
            result.log_probability = self._boundary_value(f, eps)
            return result
        w = edge_weights(lat, f, eps)
        state = self.initial_state()
        d = lat.d
        for j in range(d):
            state, cond = simulate_horizontal(state, w[lat.horizontal_columns[j]])
            result.records.append(ColumnRecord(f"H{j + 1}", state.log_gamma, state.defect(), cond))
            if j < d - 1:
                state, cond = simulate_vertical(state, w[lat.vertical_columns[j]])
                result.records.append(ColumnRecord(f"V{j + 1}", state.log_gamma, state.defect(), cond))
        log_det_final, _, _ = _logdet_positive(state.M + self.m0, check_condition=False)
        log_pi_f = error_probability(NoiseModel.x_noise(eps), f)
        result.log_probability = log_pi_f + 0.5 * (state.log_gamma - math.log(2.0)) + 0.25 * log_det_final
        if result.max_defect > 1e-6:
            logger.warning(f"Defecto de ortogonalidad {result.max_defect:.2e} en d={d}, eps={eps}")
        return result

    def coset_probability_x(self, f: PauliOperator, eps: float) -> float:
        """log π(fG^X)"""
        return self.trace(f, eps).log_probability

    def decode_x(self, s: Syndrome, eps: float) -> DecodeResult:
        lat = self.lat
        if s.plaquette_bits.any():
            raise PreconditionError("decode_x requiere bits de plaqueta nulos (ruido X)")
        f = canonical_error(lat, s)
        try:
            log_probs = {
                LogicalClass.I: self.coset_probability_x(f, eps),
                LogicalClass.X: self.coset_probability_x(representative(lat, f, LogicalClass.X), eps),
            }
        except SingularUpdateError as e:
            logger.warning(f"Fallo numérico en el síndrome {s.to_bitstring()}: {e}")
            return DecodeResult.failure(DECODER_NAME, str(e))
        # Empate -> I
        if log_probs[LogicalClass.X] > log_probs[LogicalClass.I] + settings.TIE_TOLERANCE:
            cls = LogicalClass.X
        else:
            cls = LogicalClass.I
        log_probs[LogicalClass.Y] = -math.inf
        log_probs[LogicalClass.Z] = -math.inf
        return DecodeResult(
            logical_class=cls,
            correction=representative(lat, f, cls),
            decoder=DECODER_NAME,
            log_probs=log_probs,
        )

    def decode(self, s: Syndrome, noise: NoiseModel) -> DecodeResult:
        if not noise.is_x_noise():
            raise ParameterError(f"El decodificador exacto sólo admite ruido X, se recibió {noise.describe()}")
        return self.decode_x(s, noise.eps)


def coset_probability_x(lat: SurfaceCodeLattice, f: PauliOperator, eps: float) -> float:
    return ExactMLDecoder(lat).coset_probability_x(f, eps)


def decode_x(lat: SurfaceCodeLattice, s: Syndrome, eps: float) -> DecodeResult:
    return ExactMLDecoder(lat).decode_x(s, eps)
