# Modelos de ruido de Pauli i.i.d.

import logging
from enum import Enum
from functools import lru_cache
from typing import Tuple

import numpy as np
from pydantic import BaseModel, model_validator
from scipy.special import logsumexp

from .errors import ParameterError, SizeLimitError
from .lattice import SurfaceCodeLattice, build_lattice
from .pauli import PAULI_CODES, PauliOperator

logger = logging.getLogger(__name__)

ORACLE_MAX_DISTANCE = 3


def _check_components(*components: float):
    if any(c < 0 for c in components) or sum(components) > 1 + 1e-12:
        raise ParameterError(f"Probabilidades de ruido fuera de rango: {components}")


class OracleGroup(str, Enum):
    FULL_G = "full_G"
    GX_ONLY = "GX_only"


class NoiseModel(BaseModel):
    """Canal de Pauli i.i.d. con probabilidades por qubit (eps_x, eps_y, eps_z)

    Construido directamente, un valor fuera de rango lanza pydantic.ValidationError
    (subclase de ValueError). Las fábricas x_noise, depolarizing, custom y parse
    validan antes y lanzan ParameterError.
    """

    eps_x: float = 0.0
    eps_y: float = 0.0
    eps_z: float = 0.0
    label: str = "custom"

    class Config:
        frozen = True

    @model_validator(mode="after")
    def check_probabilities(self):
        components = (self.eps_x, self.eps_y, self.eps_z)
        if any(c < 0 for c in components):
            raise ParameterError(f"Probabilidades negativas: {components}")
        if sum(components) > 1 + 1e-12:
            raise ParameterError(f"eps = {sum(components)} > 1")
        return self

    @property
    def eps(self) -> float:
        return self.eps_x + self.eps_y + self.eps_z

    @classmethod
    def x_noise(cls, eps: float) -> "NoiseModel":
        _check_components(eps)
        return cls(eps_x=eps, label="x")

    @classmethod
    def depolarizing(cls, eps: float) -> "NoiseModel":
        _check_components(eps)
        return cls(eps_x=eps / 3, eps_y=eps / 3, eps_z=eps / 3, label="depolarizing")

    @classmethod
    def custom(cls, eps_x: float, eps_y: float, eps_z: float) -> "NoiseModel":
        _check_components(eps_x, eps_y, eps_z)
        return cls(eps_x=eps_x, eps_y=eps_y, eps_z=eps_z, label="custom")

    @classmethod
    def parse(cls, text: str) -> "NoiseModel":
        """Lee "x:0.05", "dep:0.1" o "custom:ex,ey,ez" """
        kind, _, values = text.strip().partition(":")
        kind = kind.lower()
        try:
            numbers = [float(v) for v in values.split(",") if v.strip()]
        except ValueError:
            raise ParameterError(f"Modelo de ruido inválido: {text!r}") from None
        if kind in ("x", "bitflip") and len(numbers) == 1:
            return cls.x_noise(numbers[0])
        if kind in ("dep", "depolarizing") and len(numbers) == 1:
            return cls.depolarizing(numbers[0])
        if kind == "custom" and len(numbers) == 3:
            return cls.custom(*numbers)
        raise ParameterError(f"Modelo de ruido inválido: {text!r}")

    def is_x_noise(self) -> bool:
        return self.eps_y == 0 and self.eps_z == 0

    def probability_table(self) -> np.ndarray:
        """Probabilidades π₁ indexadas por código de Pauli (I, X, Z, Y)"""
        return np.array([1.0 - self.eps, self.eps_x, self.eps_z, self.eps_y])

    def log_probability_table(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(np.clip(self.probability_table(), 0.0, None))

    def describe(self) -> str:
        return f"{self.label}(eps_x={self.eps_x:g}, eps_y={self.eps_y:g}, eps_z={self.eps_z:g})"


def single_qubit_prob(m: NoiseModel, p: str) -> float:
    try:
        code = PAULI_CODES[p.upper()]
    except KeyError:
        raise ParameterError(f"Pauli de un qubit inválido: {p!r}") from None
    return float(m.probability_table()[code])


def error_probability(m: NoiseModel, f: PauliOperator) -> float:
    """log π(f); -inf si algún factor es cero"""
    return float(m.log_probability_table()[f.codes()].sum())


def sample_error(m: NoiseModel, n: int, rng: np.random.Generator) -> PauliOperator:
    codes = rng.choice(4, size=n, p=np.clip(m.probability_table(), 0.0, 1.0))
    return PauliOperator.from_codes(codes)


@lru_cache(maxsize=8)
def stabilizer_group_elements(d: int, group: OracleGroup) -> Tuple[np.ndarray, np.ndarray]:
    """Todos los elementos del grupo como matrices (x, z) de forma (2^k, n)"""
    group = OracleGroup(group)
    if d > ORACLE_MAX_DISTANCE:
        raise SizeLimitError(f"Enumeración del grupo sólo soportada para d <= {ORACLE_MAX_DISTANCE}")
    lat = build_lattice(d)
    gens = [lat.plaquette_generator(k) for k in range(len(lat.plaquette_stabilizers))]
    if group == OracleGroup.FULL_G:
        gens = [lat.site_generator(k) for k in range(len(lat.site_stabilizers))] + gens
    k = len(gens)
    gx = np.array([g.x_part for g in gens], dtype=np.int64)
    gz = np.array([g.z_part for g in gens], dtype=np.int64)
    coeffs = (np.arange(2**k)[:, None] >> np.arange(k)[None, :]) & 1
    xs = ((coeffs @ gx) % 2).astype(np.uint8)
    zs = ((coeffs @ gz) % 2).astype(np.uint8)
    xs.setflags(write=False)
    zs.setflags(write=False)
    logger.debug(f"Grupo {group.value} para d={d}: {len(xs)} elementos")
    return xs, zs


def coset_probability_oracle(
    lat: SurfaceCodeLattice, m: NoiseModel, f: PauliOperator, group: OracleGroup = OracleGroup.FULL_G
) -> float:
    """log π(fG) por enumeración exhaustiva del grupo"""
    if lat.d > ORACLE_MAX_DISTANCE:
        raise SizeLimitError(f"El oráculo exhaustivo no admite d={lat.d} (máximo {ORACLE_MAX_DISTANCE})")
    xs, zs = stabilizer_group_elements(lat.d, OracleGroup(group))
    codes = (xs ^ f.x_part) + 2 * (zs ^ f.z_part)
    terms = m.log_probability_table()[codes].sum(axis=1)
    return float(logsumexp(terms))
