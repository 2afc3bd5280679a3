# Servicio de decodificación

import logging
import math
from typing import Dict, Optional

from ..config import settings
from ..decoders.base import DecodeResult
from ..decoders.gaussian_mld import ExactMLDecoder
from ..decoders.mps_mld import MPSDecoder
from ..decoders.mwm import MWMDecoder
from ..qec.errors import ParameterError
from ..qec.lattice import CLASS_ORDER, LogicalClass, Syndrome, build_lattice, canonical_error, logical_operator
from ..qec.noise import NoiseModel, OracleGroup, coset_probability_oracle
from ..qec.pauli import multiply
from ..storage.models import DecoderName

logger = logging.getLogger(__name__)

COSET_METHODS = ("exact", "mps", "oracle")


class DecoderService:
    """Crea y reutiliza decodificadores por (nombre, d, chi, representante)"""

    def __init__(self):
        self._decoders = {}

    def get_decoder(
        self, name: DecoderName, d: int, chi: Optional[int] = None, representative: str = "canonical"
    ):
        name = DecoderName(name)
        if name == DecoderName.MLD_MPS:
            chi = settings.DEFAULT_CHI if chi is None else chi
        key = (name, d, chi if name == DecoderName.MLD_MPS else None, representative)
        if key not in self._decoders:
            lat = build_lattice(d)
            if name == DecoderName.MLD_EXACT:
                decoder = ExactMLDecoder(lat)
            elif name == DecoderName.MLD_MPS:
                decoder = MPSDecoder(lat, chi=chi, representative=representative)
            else:
                decoder = MWMDecoder(lat)
            self._decoders[key] = decoder
            logger.debug(f"Decodificador creado: {name.value} d={d} chi={chi}")
        return self._decoders[key]

    def decode(
        self,
        name: DecoderName,
        d: int,
        noise: NoiseModel,
        syndrome: Syndrome,
        chi: Optional[int] = None,
        representative: str = "canonical",
    ) -> DecodeResult:
        decoder = self.get_decoder(name, d, chi, representative)
        return decoder.decode(syndrome, noise)

    def coset_log_probabilities(
        self,
        method: str,
        d: int,
        noise: NoiseModel,
        chi: Optional[int] = None,
        syndrome: Optional[Syndrome] = None,
    ) -> Dict[LogicalClass, float]:
        """log π(C_L^s) de las cuatro clases (síndrome trivial por defecto)"""
        lat = build_lattice(d)
        syndrome = syndrome or Syndrome.trivial(d)
        f = canonical_error(lat, syndrome)
        if method == "exact":
            if not noise.is_x_noise():
                raise ParameterError("El método exacto sólo admite ruido X")
            decoder = self.get_decoder(DecoderName.MLD_EXACT, d)
            values = {
                LogicalClass.I: decoder.coset_probability_x(f, noise.eps),
                LogicalClass.X: decoder.coset_probability_x(multiply(f, lat.logical_x), noise.eps),
            }
            # Las clases con Z̄ tienen probabilidad nula bajo ruido X
            values[LogicalClass.Y] = -math.inf
            values[LogicalClass.Z] = -math.inf
        elif method == "mps":
            decoder = self.get_decoder(DecoderName.MLD_MPS, d, chi)
            values, _ = decoder.coset_log_probabilities(syndrome, noise)
        elif method == "oracle":
            values = {
                cls: coset_probability_oracle(lat, noise, multiply(f, logical_operator(lat, cls)), OracleGroup.FULL_G)
                for cls in CLASS_ORDER
            }
        else:
            raise ParameterError(f"Método desconocido: {method!r}; opciones: {COSET_METHODS}")
        return {cls: values[cls] for cls in CLASS_ORDER}

    def clear_cache(self):
        self._decoders.clear()


decoder_service = DecoderService()
