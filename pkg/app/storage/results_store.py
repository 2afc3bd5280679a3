# Resultados del benchmark en CSV (pandas) con un JSON de configuración al lado

import json
import logging
from pathlib import Path
from typing import List, Optional

import pandas as pd

from ..config import settings
from .models import ExperimentConfig, RunSummary

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "decoder",
    "noise",
    "d",
    "eps",
    "chi",
    "trials",
    "failures",
    "p_logical",
    "ci_lo",
    "ci_hi",
    "seed",
    "wall_s",
]


class ResultsStore:
    """Escribe y lee filas RunSummary; el sidecar guarda la configuración y los contadores de diagnóstico"""

    def __init__(self, results_dir: Optional[str] = None):
        self.results_dir = Path(results_dir or settings.RESULTS_DIR)

    def _resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() or p.parent != Path(".") else self.results_dir / p

    @staticmethod
    def sidecar_path(csv_path: Path) -> Path:
        return csv_path.with_suffix(".config.json")

    def to_frame(self, summaries: List[RunSummary]) -> pd.DataFrame:
        rows = [s.model_dump(include=set(CSV_COLUMNS)) for s in summaries]
        return pd.DataFrame(rows, columns=CSV_COLUMNS)

    def write(self, path: str, summaries: List[RunSummary], config: Optional[ExperimentConfig] = None) -> Path:
        csv_path = self._resolve(path)
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame(summaries).to_csv(csv_path, index=False)
        sidecar = {
            "config": config.model_dump(mode="json") if config else None,
            "diagnostics": [
                {
                    "d": s.d,
                    "eps": s.eps,
                    "decoder_failures": s.decoder_failures,
                    "invalid_corrections": s.invalid_corrections,
                    "stopping": s.stopping.value,
                }
                for s in summaries
            ],
        }
        with open(self.sidecar_path(csv_path), "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=2)
        logger.info(f"{len(summaries)} filas escritas en {csv_path}")
        return csv_path

    def load(self, path: str) -> List[RunSummary]:
        csv_path = self._resolve(path)
        frame = pd.read_csv(csv_path)
        missing = [c for c in CSV_COLUMNS if c not in frame.columns]
        if missing:
            raise ValueError(f"Columnas ausentes en {csv_path}: {missing}")
        frame = frame.astype(object).where(pd.notna(frame), None)
        summaries = []
        for record in frame.to_dict(orient="records"):
            if record.get("chi") is not None:
                record["chi"] = int(record["chi"])
            summaries.append(RunSummary(**{k: record[k] for k in CSV_COLUMNS}))
        return summaries


results_store = ResultsStore()
