import math

import pytest
from pydantic import ValidationError

from app.config import settings
from app.qec.errors import ParameterError
from app.services.benchmark_service import (
    PointRunner,
    badness,
    benchmark_service,
    trial_rng,
    wilson_interval,
)
from app.services.oracle_service import oracle_service
from app.storage.models import DecoderName, ExperimentConfig, NoiseKind, RunSummary, StoppingRule


def _config(**kwargs) -> ExperimentConfig:
    values = {"decoder": "mwm", "noise": {"model": "x"}, "d": [3], "eps": [0.1], "trials": 200, "master_seed": 11}
    values.update(kwargs)
    return ExperimentConfig(**values)


def _summary(d=5, eps=0.1, failures=10, trials=100) -> RunSummary:
    return RunSummary(
        decoder="mwm",
        noise="x",
        d=d,
        eps=eps,
        trials=trials,
        failures=failures,
        p_logical=failures / trials,
        ci_lo=0.0,
        ci_hi=1.0,
        seed=0,
    )


def test_trial_rng_is_deterministic():
    a = trial_rng(7, 3).integers(0, 1 << 30, 5)
    b = trial_rng(7, 3).integers(0, 1 << 30, 5)
    c = trial_rng(7, 4).integers(0, 1 << 30, 5)
    assert list(a) == list(b)
    assert list(a) != list(c)


def test_run_trial_is_reproducible():
    config = _config(noise={"model": "depolarizing"}, d=[5], eps=[0.15])
    first = [benchmark_service.run_trial(config, 5, 0.15, k) for k in range(20)]
    second = [benchmark_service.run_trial(config, 5, 0.15, k) for k in range(20)]
    assert first == second


def test_zero_noise_never_fails():
    summary = benchmark_service.run_point(_config(eps=[0.0], trials=50), 3, 0.0)
    assert summary.trials == 50
    assert summary.failures == 0
    assert summary.p_logical == 0.0
    assert summary.ci_lo == 0.0 and summary.ci_hi > 0.0


def test_thread_count_does_not_change_results():
    config = _config(noise={"model": "depolarizing"}, d=[5], eps=[0.12], trials=300)
    serial = benchmark_service.run_point(config, 5, 0.12, threads=1)
    parallel = benchmark_service.run_point(config, 5, 0.12, threads=4)
    assert serial.trials == parallel.trials == 300
    assert serial.failures == parallel.failures


def test_target_failures_stops_at_batch_boundary(monkeypatch):
    monkeypatch.setattr(settings, "BATCH_SIZE", 10)
    config = _config(eps=[0.3], trials=1000, target_failures=5)
    summary = PointRunner(config, 3, 0.3).run()
    assert summary.stopping == StoppingRule.FAILURES
    assert summary.failures >= 5
    assert summary.trials < 1000
    assert summary.trials % 10 == 0


def test_run_experiment_yields_every_point():
    config = _config(d=[3, 5], eps=[0.02, 0.05], trials=20)
    points = [s.point() for s in benchmark_service.run_experiment(config)]
    assert points == [(3, 0.02), (3, 0.05), (5, 0.02), (5, 0.05)]


def test_mps_summary_records_chi():
    config = _config(decoder="mld_mps", noise={"model": "depolarizing"}, chi=4, trials=10)
    summary = benchmark_service.run_point(config, 3, 0.1)
    assert summary.chi == 4
    assert benchmark_service.run_point(_config(trials=10), 3, 0.1).chi is None


def test_exact_decoder_is_optimal_at_distance_3():
    for eps in (0.05, 0.1, 0.2):
        exact = oracle_service.exact_failure_probability(3, eps, DecoderName.MLD_EXACT)
        mwm = oracle_service.exact_failure_probability(3, eps, DecoderName.MWM)
        assert 0.0 < exact <= mwm + 1e-12


@pytest.mark.slow
def test_monte_carlo_matches_exact_failure_probability():
    eps, trials = 0.1, 20000
    expected = oracle_service.exact_failure_probability(3, eps)
    config = _config(decoder="mld_exact", eps=[eps], trials=trials, master_seed=5)
    summary = benchmark_service.run_point(config, 3, eps)
    sigma = math.sqrt(expected * (1 - expected) / trials)
    assert abs(summary.p_logical - expected) <= 4 * sigma
    assert summary.decoder_failures == 0
    assert summary.invalid_corrections == 0


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and 0.0 < hi < 0.05
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert 0.5 - lo == pytest.approx(hi - 0.5)
    assert wilson_interval(100, 100)[1] == 1.0
    assert wilson_interval(0, 0) == (0.0, 1.0)
    narrow = wilson_interval(500, 10000)
    wide = wilson_interval(5, 100)
    assert narrow[1] - narrow[0] < wide[1] - wide[0]


def test_badness():
    assert badness(_summary(failures=10), _summary(failures=10)) == pytest.approx(1.0)
    assert badness(_summary(failures=20), _summary(failures=10)) == pytest.approx(2.0)
    assert math.isnan(badness(_summary(failures=3), _summary(failures=0)))
    with pytest.raises(ParameterError):
        badness(_summary(d=5), _summary(d=7))


def test_experiment_config_validation():
    config = ExperimentConfig(decoder="mld_exact", noise={"model": "x", "eps": 0.1}, d=[3, 5])
    assert config.eps == [0.1]
    assert config.stopping == StoppingRule.TRIALS
    assert config.noise.model == NoiseKind.X
    with pytest.raises(ValidationError):
        ExperimentConfig(decoder="mld_exact", noise={"model": "depolarizing"}, d=[3], eps=[0.1])
    with pytest.raises(ValidationError):
        ExperimentConfig(decoder="mwm", d=[4], eps=[0.1])
    with pytest.raises(ValidationError):
        ExperimentConfig(decoder="mwm", d=[3])
    with pytest.raises(ValidationError):
        ExperimentConfig(decoder="mld_mps", d=[3], eps=[0.1], chi=1)
    with pytest.raises(ValidationError):
        ExperimentConfig(decoder="mwm", d=[3], eps=[0.1], trials=0)


def test_custom_noise_uses_proportions():
    config = ExperimentConfig(
        decoder="mld_mps", noise={"model": "custom", "eps_x": 2, "eps_y": 1, "eps_z": 1}, d=[3], eps=[0.2]
    )
    m = config.noise.at(0.2)
    assert m.eps_x == pytest.approx(0.1)
    assert m.eps_y == pytest.approx(0.05)
    assert m.eps_z == pytest.approx(0.05)


def test_run_summary_rejects_more_failures_than_trials():
    with pytest.raises(ValidationError):
        _summary(failures=11, trials=10)


@pytest.mark.slow
def test_mwm_failure_rate_falls_with_distance():
    eps = 0.05
    config = _config(d=[3, 5, 7], eps=[eps], trials=3000, master_seed=3)
    runs = list(benchmark_service.run_experiment(config))
    rates = [r.p_logical for r in runs]
    assert rates[0] > rates[1] > rates[2]
    assert runs[2].ci_hi < runs[0].ci_lo
    assert all(r.invalid_corrections == 0 for r in runs)


@pytest.mark.slow
def test_mps_failure_rate_falls_below_threshold():
    config = _config(decoder="mld_mps", noise={"model": "depolarizing"}, d=[3, 5, 7], eps=[0.10], chi=6, trials=2000)
    runs = list(benchmark_service.run_experiment(config))
    assert runs[0].p_logical > runs[1].p_logical > runs[2].p_logical
    assert all(r.decoder_failures == 0 for r in runs)


@pytest.mark.slow
def test_matching_badness_under_depolarizing_noise():
    d, eps = 7, 0.09
    common = dict(noise={"model": "depolarizing"}, d=[d], eps=[eps], trials=3000, master_seed=9)
    mwm = benchmark_service.run_point(_config(**common), d, eps)
    mps = benchmark_service.run_point(_config(decoder="mld_mps", chi=6, **common), d, eps)
    assert badness(mwm, mps) >= 2.0
    assert mps.ci_hi < mwm.ci_lo


@pytest.mark.slow
def test_matching_badness_under_x_noise():
    d, eps = 7, 0.08
    common = dict(d=[d], eps=[eps], trials=3000, master_seed=4)
    mwm = benchmark_service.run_point(_config(**common), d, eps)
    exact = benchmark_service.run_point(_config(decoder="mld_exact", **common), d, eps)
    assert 0.8 <= badness(mwm, exact) <= 3.0


@pytest.mark.slow
def test_failure_rate_settles_as_chi_grows():
    d, eps = 5, 0.12
    rates = {}
    for chi in (2, 4, 6):
        config = _config(decoder="mld_mps", noise={"model": "depolarizing"}, d=[d], eps=[eps], chi=chi, trials=2000)
        rates[chi] = benchmark_service.run_point(config, d, eps).p_logical
    assert rates[2] >= rates[6] - 0.003
    assert abs(rates[4] - rates[6]) <= abs(rates[2] - rates[6]) + 0.003


def test_decode_cache_is_bounded(monkeypatch):
    config = _config(noise={"model": "depolarizing"}, d=[5], eps=[0.15], trials=200)
    unbounded = PointRunner(config, 5, 0.15).run(threads=4)
    monkeypatch.setattr(settings, "DECODE_CACHE_SIZE", 8)
    runner = PointRunner(config, 5, 0.15)
    bounded = runner.run(threads=4)
    assert len(runner._cache) <= 8
    assert bounded.failures == unbounded.failures
    assert bounded.trials == unbounded.trials
