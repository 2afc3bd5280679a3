# Comprobaciones exhaustivas contra el oráculo de fuerza bruta (d=3)

import itertools
import logging
import math
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel

from ..qec.errors import SizeLimitError
from ..qec.lattice import CLASS_ORDER, LogicalClass, Syndrome, build_lattice, canonical_error, logical_operator
from ..qec.noise import ORACLE_MAX_DISTANCE, NoiseModel, OracleGroup, coset_probability_oracle
from ..qec.pauli import multiply
from ..storage.models import DecoderName
from .decoder_service import decoder_service

logger = logging.getLogger(__name__)


class OracleReport(BaseModel):
    d: int
    checks: int = 0
    max_rel_error_exact: float = 0.0
    max_rel_error_mps: float = 0.0
    decision_mismatches: int = 0


def relative_error(log_a: float, log_b: float) -> float:
    """|a/b − 1| a partir de logaritmos; 0 si ambos son cero"""
    if math.isinf(log_a) and math.isinf(log_b):
        return 0.0
    if math.isinf(log_a) or math.isinf(log_b):
        return math.inf
    return abs(math.expm1(log_a - log_b))


def x_syndromes(d: int) -> List[Syndrome]:
    """Todos los síndromes con bits de plaqueta nulos"""
    m = d * (d - 1)
    return [Syndrome(bits, np.zeros(m, dtype=np.uint8)) for bits in itertools.product((0, 1), repeat=m)]


class OracleService:
    def _check_size(self, d: int):
        if d > ORACLE_MAX_DISTANCE:
            raise SizeLimitError(f"Comprobación exhaustiva sólo para d <= {ORACLE_MAX_DISTANCE}")

    def exact_failure_probability(
        self, d: int, eps: float, decoder: DecoderName = DecoderName.MLD_EXACT, chi: Optional[int] = None
    ) -> float:
        """Probabilidad exacta de fallo bajo ruido X enumerando los 2^n patrones de error"""
        self._check_size(d)
        lat = build_lattice(d)
        noise = NoiseModel.x_noise(eps)
        patterns = ((np.arange(2**lat.n)[:, None] >> np.arange(lat.n)[None, :]) & 1).astype(np.int64)
        weights = patterns.sum(axis=1)
        probs = eps**weights * (1.0 - eps) ** (lat.n - weights)
        site_bits = (patterns @ lat.site_matrix.T.astype(np.int64)) % 2
        logical_z = lat.logical_z.z_part.astype(np.int64)
        failure = 0.0
        corrections: Dict[bytes, np.ndarray] = {}
        for k in range(len(patterns)):
            key = site_bits[k].astype(np.uint8).tobytes()
            if key not in corrections:
                s = Syndrome(site_bits[k], np.zeros(len(lat.plaquette_stabilizers), dtype=np.uint8))
                result = decoder_service.decode(decoder, d, noise, s, chi)
                corrections[key] = None if result.failed else result.correction.x_part.astype(np.int64)
            correction = corrections[key]
            if correction is None:
                failure += probs[k]
                continue
            residual = patterns[k] ^ correction
            if int(residual @ logical_z) % 2 == 1:
                failure += probs[k]
        return float(failure)

    def oracle_check(
        self,
        d: int = 3,
        eps_values=(0.05, 0.1, 0.3),
        chi: int = 16,
        mps_samples: int = 64,
        seed: int = 0,
    ) -> OracleReport:
        """Compara los decodificadores exacto y MPS con el oráculo exhaustivo"""
        self._check_size(d)
        lat = build_lattice(d)
        report = OracleReport(d=d)
        exact = decoder_service.get_decoder(DecoderName.MLD_EXACT, d)
        mps = decoder_service.get_decoder(DecoderName.MLD_MPS, d, chi)
        rng = np.random.default_rng(seed)
        m = d * (d - 1)
        for eps in eps_values:
            x_noise = NoiseModel.x_noise(eps)
            for s in x_syndromes(d):
                f = canonical_error(lat, s)
                for cls in (LogicalClass.I, LogicalClass.X):
                    g = multiply(f, logical_operator(lat, cls))
                    value = exact.coset_probability_x(g, eps)
                    oracle = coset_probability_oracle(lat, x_noise, g, OracleGroup.GX_ONLY)
                    report.max_rel_error_exact = max(report.max_rel_error_exact, relative_error(value, oracle))
                    report.checks += 1
            dep = NoiseModel.depolarizing(eps)
            for _ in range(mps_samples):
                s = Syndrome(rng.integers(0, 2, m), rng.integers(0, 2, m))
                f = canonical_error(lat, s)
                values, _ = mps.coset_log_probabilities(s, dep)
                oracle = {
                    cls: coset_probability_oracle(lat, dep, multiply(f, logical_operator(lat, cls)))
                    for cls in CLASS_ORDER
                }
                for cls in CLASS_ORDER:
                    report.max_rel_error_mps = max(report.max_rel_error_mps, relative_error(values[cls], oracle[cls]))
                    report.checks += 1
                if max(CLASS_ORDER, key=lambda c: values[c]) != max(CLASS_ORDER, key=lambda c: oracle[c]):
                    report.decision_mismatches += 1
        logger.info(
            f"Oráculo d={d}: {report.checks} comprobaciones, error relativo máximo "
            f"exacto={report.max_rel_error_exact:.2e}, mps={report.max_rel_error_mps:.2e}"
        )
        return report


oracle_service = OracleService()
