# Línea de comandos

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from .config import settings
from .qec.errors import DecoderError
from .qec.lattice import CLASS_ORDER, LogicalClass, Syndrome
from .qec.noise import NoiseModel
from .services.benchmark_service import badness, benchmark_service
from .services.decoder_service import COSET_METHODS, decoder_service
from .services.oracle_service import oracle_service
from .storage.models import DecoderName, ExperimentConfig
from .storage.results_store import results_store

logger = logging.getLogger(__name__)


def _read_syndrome(d: int, value: str) -> Syndrome:
    path = Path(value)
    if path.is_file():
        value = path.read_text(encoding="utf-8")
    return Syndrome.from_bitstring(d, value)


def _log10(value: float) -> str:
    return "-inf" if value == -math.inf else f"{value / math.log(10):.6f}"


def cmd_decode(args) -> int:
    noise = NoiseModel.parse(args.noise)
    syndrome = _read_syndrome(args.d, args.syndrome)
    result = decoder_service.decode(
        DecoderName(args.decoder), args.d, noise, syndrome, args.chi, args.representative
    )
    if result.failed:
        print(f"failure: {result.message}")
        return 1
    print(f"class: {result.logical_class.value}")
    print(f"correction: {result.correction.to_string()}")
    return 0


def cmd_coset(args) -> int:
    noise = NoiseModel.parse(args.noise)
    syndrome = _read_syndrome(args.d, args.syndrome) if args.syndrome else None
    values = decoder_service.coset_log_probabilities(args.method, args.d, noise, args.chi, syndrome)
    classes = [LogicalClass(c) for c in args.classes] if args.classes else list(CLASS_ORDER)
    for cls in classes:
        value = values[cls]
        linear = math.exp(value) if value > -math.inf else 0.0
        print(f"{cls.value}\tlog10={_log10(value)}\tvalue={linear:.6e}")
    return 0


def cmd_benchmark(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        config = ExperimentConfig(**json.load(fh))
    if args.output:
        config.output = args.output
    summaries = []
    for summary in benchmark_service.run_experiment(config, threads=args.threads):
        summaries.append(summary)
        print(
            f"{summary.decoder},{summary.noise},{summary.d},{summary.eps},{summary.chi},"
            f"{summary.trials},{summary.failures},{summary.p_logical:.6g}"
        )
    path = results_store.write(config.output, summaries, config)
    print(f"results: {path}")
    return 0


def cmd_badness(args) -> int:
    targets = {s.point(): s for s in results_store.load(args.target)}
    baselines = {s.point(): s for s in results_store.load(args.baseline)}
    common = sorted(set(targets) & set(baselines))
    if not common:
        logger.error("No hay puntos (d, eps) comunes entre los dos archivos")
        return 1
    for point in common:
        print(f"d={point[0]}\teps={point[1]}\tbadness={badness(targets[point], baselines[point]):.4g}")
    return 0


def cmd_oracle_check(args) -> int:
    report = oracle_service.oracle_check(args.d, tuple(args.eps), args.chi, args.samples, args.seed)
    print(report.model_dump_json(indent=2))
    ok = report.max_rel_error_exact <= args.tolerance and report.max_rel_error_mps <= args.tolerance
    return 0 if ok else 1


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port, reload=settings.DEBUG, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="surface-decoders", description="Decodificadores del código de superficie")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", help="Decodifica un síndrome")
    p.add_argument("--decoder", choices=[d.value for d in DecoderName], required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--noise", required=True, help='"x:0.05", "dep:0.1" o "custom:ex,ey,ez"')
    p.add_argument("--chi", type=int, default=None)
    p.add_argument("--representative", choices=["canonical", "mwm"], default="canonical")
    p.add_argument("--syndrome", required=True, help="Cadena de bits o archivo que la contiene")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("coset", help="Probabilidades de las cuatro clases")
    p.add_argument("--method", choices=COSET_METHODS, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--noise", required=True)
    p.add_argument("--chi", type=int, default=None)
    p.add_argument("--class", dest="classes", action="append", choices=[c.value for c in CLASS_ORDER])
    p.add_argument("--syndrome", default=None)
    p.set_defaults(func=cmd_coset)

    p = sub.add_parser("benchmark", help="Benchmark Monte Carlo desde un JSON de configuración")
    p.add_argument("--config", required=True)
    p.add_argument("--output", default=None)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("badness", help="Cociente de tasas lógicas entre dos CSV")
    p.add_argument("--target", required=True)
    p.add_argument("--baseline", required=True)
    p.set_defaults(func=cmd_badness)

    p = sub.add_parser("oracle-check", help="Equivalencia con el oráculo exhaustivo")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--eps", type=float, nargs="+", default=[0.05, 0.1, 0.3])
    p.add_argument("--chi", type=int, default=16)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("serve", help="Arranca la API HTTP")
    p.add_argument("--host", default=settings.API_HOST)
    p.add_argument("--port", type=int, default=settings.API_PORT)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DecoderError, ValidationError, ValueError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
