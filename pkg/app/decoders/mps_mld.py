# Decodificador ML aproximado por contracción MPS de la red tensorial

import logging
import math
from typing import Dict, Optional, Tuple

from app.config import settings
from app.qec.errors import DegenerateStateError, ParameterError
from app.qec.lattice import (
    LogicalClass,
    SurfaceCodeLattice,
    Syndrome,
    canonical_error,
    classify_residual,
    compose_classes,
    logical_operator,
    pick_class,
)
from app.qec.noise import NoiseModel
from app.qec.pauli import PauliOperator, multiply

from .base import DecodeResult
from .mps import MatrixProductState, apply_mpo, overlap, truncate
from .tensor_network import build_column, column_to_mpo, column_to_mps_first, column_to_mps_last

logger = logging.getLogger(__name__)

DECODER_NAME = "mps"
REPRESENTATIVES = ("canonical", "mwm")


def _to_log(sign: float, log_abs: float, context: str) -> float:
    if sign < 0:
        logger.debug(f"Contracción negativa ({context}): log|valor|={log_abs:.4f}; se toma como 0")
        return -math.inf
    return log_abs


class MPSDecoder:
    """Contracción columna a columna con truncamiento a dimensión de enlace chi"""

    def __init__(self, lat: SurfaceCodeLattice, chi: Optional[int] = None, representative: str = "canonical"):
        chi = settings.DEFAULT_CHI if chi is None else chi
        if chi < 2:
            raise ParameterError(f"chi debe ser >= 2, se recibió chi={chi}")
        if representative not in REPRESENTATIVES:
            raise ParameterError(f"Representante desconocido: {representative!r}")
        self.lat = lat
        self.chi = chi
        self.representative = representative

    def _sweep(self, f: PauliOperator, noise: NoiseModel) -> MatrixProductState:
        """ψ = V̂^{d−1} ⋯ Ĥ² V̂¹ Ĥ¹ con truncamiento tras cada columna"""
        lat = self.lat
        psi = column_to_mps_first(build_column(lat, noise, f, 0))
        for col in range(1, 2 * lat.d - 2):
            op = column_to_mpo(build_column(lat, noise, f, col))
            psi = truncate(apply_mpo(op, psi), self.chi)
        return psi

    def _close(self, psi: MatrixProductState, f: PauliOperator, noise: NoiseModel) -> float:
        last = column_to_mps_last(build_column(self.lat, noise, f, 2 * self.lat.d - 2))
        sign, log_abs = overlap(last, psi)
        return _to_log(sign, log_abs, f"d={self.lat.d}, chi={self.chi}")

    def contract(self, f: PauliOperator, noise: NoiseModel) -> float:
        """Aproximación de log π(fG)"""
        try:
            psi = self._sweep(f, noise)
        except DegenerateStateError as e:
            logger.warning(f"Estado nulo durante la contracción: {e}")
            return -math.inf
        return self._close(psi, f, noise)

    def contract_pair(self, f: PauliOperator, noise: NoiseModel) -> Tuple[float, float]:
        """(log π(fG), log π(f·Z̄·G)) con una sola contracción: Z̄ sólo toca la columna Ĥ^d"""
        try:
            psi = self._sweep(f, noise)
        except DegenerateStateError as e:
            logger.warning(f"Estado nulo durante la contracción: {e}")
            return -math.inf, -math.inf
        return self._close(psi, f, noise), self._close(psi, multiply(f, self.lat.logical_z), noise)

    def _representative(self, s: Syndrome) -> PauliOperator:
        if self.representative == "mwm":
            from .mwm import decode_mwm

            return decode_mwm(self.lat, s).correction
        return canonical_error(self.lat, s)

    def coset_log_probabilities(self, s: Syndrome, noise: NoiseModel) -> Tuple[Dict[LogicalClass, float], PauliOperator]:
        """log π(C_L^s) para las cuatro clases y el representante usado"""
        lat = self.lat
        g = self._representative(s)
        # Clase de g respecto del error canónico f(s)
        base = classify_residual(lat, multiply(g, canonical_error(lat, s)))
        log_i, log_z = self.contract_pair(g, noise)
        log_x, log_y = self.contract_pair(multiply(g, lat.logical_x), noise)
        relative = {LogicalClass.I: log_i, LogicalClass.Z: log_z, LogicalClass.X: log_x, LogicalClass.Y: log_y}
        if max(relative.values()) == -math.inf:
            logger.warning(f"Las cuatro clases dieron -inf para el síndrome {s.to_bitstring()} (d={lat.d}, chi={self.chi})")
        return {compose_classes(base, cls): value for cls, value in relative.items()}, g

    def decode(self, s: Syndrome, noise: NoiseModel) -> DecodeResult:
        lat = self.lat
        log_probs, g = self.coset_log_probabilities(s, noise)
        best = pick_class(log_probs, settings.TIE_TOLERANCE)
        if best is None:
            return DecodeResult.failure(DECODER_NAME, "todas las clases tienen probabilidad nula")
        base = classify_residual(lat, multiply(g, canonical_error(lat, s)))
        correction = multiply(g, logical_operator(lat, compose_classes(base, best)))
        return DecodeResult(logical_class=best, correction=correction, decoder=DECODER_NAME, log_probs=log_probs)


def contract(lat: SurfaceCodeLattice, m: NoiseModel, f: PauliOperator, chi: int) -> float:
    return MPSDecoder(lat, chi).contract(f, m)


def decode(lat: SurfaceCodeLattice, s: Syndrome, m: NoiseModel, chi: int) -> DecodeResult:
    return MPSDecoder(lat, chi).decode(s, m)
