# Resultado común de los decodificadores

import math
from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, field_serializer

from app.qec.lattice import LogicalClass
from app.qec.pauli import PauliOperator


class DecodeResult(BaseModel):
    """Clase lógica elegida, corrección propuesta y log-probabilidades por clase"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    logical_class: Optional[LogicalClass] = None
    correction: Optional[PauliOperator] = None
    decoder: str
    log_probs: Dict[LogicalClass, float] = Field(default_factory=dict)
    failed: bool = False
    message: str = ""

    @classmethod
    def failure(cls, decoder: str, message: str) -> "DecodeResult":
        return cls(decoder=decoder, failed=True, message=message)

    @field_serializer("correction")
    def serialize_correction(self, correction: Optional[PauliOperator]) -> Optional[str]:
        return correction.to_string() if correction is not None else None

    @field_serializer("log_probs")
    def serialize_log_probs(self, log_probs: Dict[LogicalClass, float]) -> Dict[str, Optional[float]]:
        # -inf (probabilidad nula) no es JSON válido
        return {cls.value: (value if math.isfinite(value) else None) for cls, value in log_probs.items()}
