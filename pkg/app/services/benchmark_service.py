# Benchmark Monte Carlo

import logging
import math
import threading
import time
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from typing import Iterator, List, Optional, Tuple

import numpy as np
from scipy.stats import norm

from ..config import settings
from ..decoders.base import DecodeResult
from ..qec.errors import DecoderError, ParameterError
from ..qec.lattice import LogicalClass, build_lattice, classify_residual, syndrome_of
from ..qec.noise import NoiseModel, sample_error
from ..qec.pauli import multiply
from ..storage.models import DecoderName, ExperimentConfig, RunSummary, TrialRecord
from .decoder_service import decoder_service

logger = logging.getLogger(__name__)


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Flujo aleatorio propio de cada ensayo, independiente del orden de ejecución"""
    return np.random.default_rng(np.random.SeedSequence(entropy=master_seed, spawn_key=(trial_index,)))


def wilson_interval(failures: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    if trials <= 0:
        return 0.0, 1.0
    z = float(norm.ppf(1.0 - (1.0 - confidence) / 2.0))
    p = failures / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, min(p, center - half)), min(1.0, max(p, center + half))


def badness(target: RunSummary, baseline: RunSummary) -> float:
    """Cociente p_logical(target) / p_logical(baseline)"""
    if target.point() != baseline.point():
        raise ParameterError(f"Puntos distintos: {target.point()} vs {baseline.point()}")
    if baseline.p_logical == 0:
        logger.warning(f"p_logical de referencia nula en d={baseline.d}, eps={baseline.eps}; badness indefinida")
        return math.nan
    return target.p_logical / baseline.p_logical


class PointRunner:
    """Ejecuta los ensayos de un punto (d, eps) con caché de decodificaciones por síndrome"""

    def __init__(self, config: ExperimentConfig, d: int, eps: float):
        self.config = config
        self.d = d
        self.eps = eps
        self.lat = build_lattice(d)
        self.noise: NoiseModel = config.noise.at(eps)
        self.decoder = decoder_service.get_decoder(config.decoder, d, config.chi, config.representative)
        self._cache: "OrderedDict[bytes, DecodeResult]" = OrderedDict()
        self._cache_lock = threading.Lock()

    def _decode(self, syndrome) -> DecodeResult:
        key = syndrome.key()
        with self._cache_lock:
            result = self._cache.get(key)
            if result is not None:
                self._cache.move_to_end(key)
                return result
        # La decodificación corre fuera del candado; dos hilos pueden repetir el mismo síndrome
        try:
            result = self.decoder.decode(syndrome, self.noise)
        except DecoderError as e:
            logger.warning(f"Fallo del decodificador en d={self.d}, eps={self.eps}: {e}")
            result = DecodeResult.failure(self.config.decoder.value, str(e))
        with self._cache_lock:
            self._cache[key] = result
            # LRU acotado por DECODE_CACHE_SIZE
            while len(self._cache) > settings.DECODE_CACHE_SIZE:
                self._cache.popitem(last=False)
        return result

    def run_trial(self, trial_index: int) -> TrialRecord:
        rng = trial_rng(self.config.master_seed, trial_index)
        error = sample_error(self.noise, self.lat.n, rng)
        syndrome = syndrome_of(self.lat, error)
        result = self._decode(syndrome)
        if result.failed or result.correction is None:
            return TrialRecord(trial_index=trial_index, success=False, decoder_failure=True)
        valid = syndrome_of(self.lat, result.correction) == syndrome
        if not valid:
            return TrialRecord(trial_index=trial_index, success=False, valid_correction=False)
        residual_class = classify_residual(self.lat, multiply(error, result.correction))
        return TrialRecord(
            trial_index=trial_index,
            success=residual_class == LogicalClass.I,
            logical_class=residual_class.value,
        )

    def run(self, threads: Optional[int] = None) -> RunSummary:
        threads = threads or settings.DECODER_THREADS
        budget = self.config.trials
        target = self.config.target_failures
        started = time.perf_counter()
        records: List[TrialRecord] = []
        failures = 0
        next_index = 0
        with ThreadPoolExecutor(max_workers=threads) as pool:
            while next_index < budget:
                batch = range(next_index, min(next_index + settings.BATCH_SIZE, budget))
                batch_records = list(pool.map(self.run_trial, batch))
                records.extend(batch_records)
                failures += sum(1 for r in batch_records if not r.success)
                next_index = batch.stop
                # La regla de parada sólo se evalúa en fronteras de lote
                if target and failures >= target:
                    break
        trials = len(records)
        ci_lo, ci_hi = wilson_interval(failures, trials)
        summary = RunSummary(
            decoder=self.config.decoder.value,
            noise=self.config.noise.label(),
            d=self.d,
            eps=self.eps,
            chi=(self.config.chi or settings.DEFAULT_CHI) if self.config.decoder == DecoderName.MLD_MPS else None,
            trials=trials,
            failures=failures,
            p_logical=failures / trials if trials else 0.0,
            ci_lo=ci_lo,
            ci_hi=ci_hi,
            seed=self.config.master_seed,
            wall_s=time.perf_counter() - started,
            decoder_failures=sum(1 for r in records if r.decoder_failure),
            invalid_corrections=sum(1 for r in records if not r.valid_correction),
            stopping=self.config.stopping,
        )
        if summary.invalid_corrections:
            logger.error(f"{summary.invalid_corrections} correcciones con síndrome distinto en d={self.d}, eps={self.eps}")
        logger.info(
            f"{summary.decoder} d={self.d} eps={self.eps}: {failures}/{trials} fallos "
            f"(p={summary.p_logical:.4g}, IC=[{ci_lo:.4g}, {ci_hi:.4g}])"
        )
        return summary


class BenchmarkService:
    def run_trial(self, config: ExperimentConfig, d: int, eps: float, trial_index: int) -> TrialRecord:
        return PointRunner(config, d, eps).run_trial(trial_index)

    def run_point(self, config: ExperimentConfig, d: int, eps: float, threads: Optional[int] = None) -> RunSummary:
        return PointRunner(config, d, eps).run(threads)

    def run_experiment(self, config: ExperimentConfig, threads: Optional[int] = None) -> Iterator[RunSummary]:
        """Un RunSummary por cada punto (d, eps), en orden"""
        for d in config.d:
            for eps in config.eps:
                yield self.run_point(config, d, eps, threads)


benchmark_service = BenchmarkService()
