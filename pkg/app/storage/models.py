# Modelos de datos del benchmark

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from app.qec.noise import NoiseModel


class DecoderName(str, Enum):
    MLD_EXACT = "mld_exact"
    MLD_MPS = "mld_mps"
    MWM = "mwm"


class NoiseKind(str, Enum):
    X = "x"
    DEPOLARIZING = "depolarizing"
    CUSTOM = "custom"


class StoppingRule(str, Enum):
    TRIALS = "trials"
    FAILURES = "failures"


class NoiseSpec(BaseModel):
    """Familia de ruido; para "custom" eps_x/eps_y/eps_z son proporciones de cada eps"""

    model: NoiseKind = NoiseKind.X
    eps: Optional[float] = None
    eps_x: float = 0.0
    eps_y: float = 0.0
    eps_z: float = 0.0

    def at(self, eps: float) -> NoiseModel:
        if self.model == NoiseKind.X:
            return NoiseModel.x_noise(eps)
        if self.model == NoiseKind.DEPOLARIZING:
            return NoiseModel.depolarizing(eps)
        total = self.eps_x + self.eps_y + self.eps_z
        if total <= 0:
            raise ValueError("El ruido custom necesita proporciones positivas")
        return NoiseModel.custom(eps * self.eps_x / total, eps * self.eps_y / total, eps * self.eps_z / total)

    def label(self) -> str:
        return self.model.value


class ExperimentConfig(BaseModel):
    decoder: DecoderName
    noise: NoiseSpec = Field(default_factory=NoiseSpec)
    d: List[int]
    eps: List[float] = []
    chi: Optional[int] = None
    representative: str = "canonical"
    trials: int = 1000
    target_failures: Optional[int] = None
    master_seed: int = 0
    output: str = "results/benchmark.csv"

    @model_validator(mode="after")
    def check_compatibility(self):
        if self.decoder == DecoderName.MLD_EXACT and self.noise.model != NoiseKind.X:
            raise ValueError("mld_exact sólo admite ruido X")
        if not self.eps:
            if self.noise.eps is None:
                raise ValueError("Se necesita al menos un valor de eps")
            self.eps = [self.noise.eps]
        if any(d < 3 or d % 2 == 0 for d in self.d):
            raise ValueError(f"Distancias inválidas: {self.d}")
        if self.trials < 1:
            raise ValueError("trials debe ser >= 1")
        if self.decoder == DecoderName.MLD_MPS and self.chi is not None and self.chi < 2:
            raise ValueError("chi debe ser >= 2")
        return self

    @property
    def stopping(self) -> StoppingRule:
        return StoppingRule.FAILURES if self.target_failures else StoppingRule.TRIALS


class TrialRecord(BaseModel):
    trial_index: int
    success: bool
    decoder_failure: bool = False
    valid_correction: bool = True
    logical_class: Optional[str] = None


class RunSummary(BaseModel):
    decoder: str
    noise: str
    d: int
    eps: float
    chi: Optional[int] = None
    trials: int
    failures: int
    p_logical: float
    ci_lo: float
    ci_hi: float
    seed: int
    wall_s: float = 0.0
    decoder_failures: int = 0
    invalid_corrections: int = 0
    stopping: StoppingRule = StoppingRule.TRIALS

    @model_validator(mode="after")
    def check_counts(self):
        if self.failures > self.trials:
            raise ValueError("failures no puede superar trials")
        return self

    def point(self):
        return (self.d, round(self.eps, 12))
