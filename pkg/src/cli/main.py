"""
Punto de entrada de línea de comandos.

Uso:
    python -m src.cli fit --config experimento.toml --alpha "0,pi/3,pi/2" --threads 4
    python -m src.cli verify --out output/aceptacion
    python -m src.cli spectrum --print-config
"""
import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from src import __version__
from src.cli.acceptance import cmd_verify
from src.cli.commands import (
    CommandResult,
    cmd_beamcheck,
    cmd_fit,
    cmd_lengths,
    cmd_predict,
    cmd_spectrum,
    cmd_trace,
)
from src.cli.config import ExperimentConfig, load_config
from src.utils.errors import ConfigError, WaveTraceError
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

COMMANDS: Dict[str, Callable[[ExperimentConfig], CommandResult]] = {
    "spectrum": cmd_spectrum,
    "trace": cmd_trace,
    "predict": cmd_predict,
    "fit": cmd_fit,
    "beamcheck": cmd_beamcheck,
    "lengths": cmd_lengths,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavetrace",
        description="Laboratorio de trazas de ondas con flujo magnético",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=sorted(COMMANDS), help="Subcomando a ejecutar")
    parser.add_argument("--config", type=Path, default=None, help="Archivo TOML de configuración")
    parser.add_argument("--out", type=Path, default=None, help="Directorio de salida")
    parser.add_argument("--threads", type=int, default=None, help="Hilos de cálculo")
    parser.add_argument("--cutoff", type=float, default=None, help="Frecuencia de corte K")
    parser.add_argument("--alpha", type=str, default=None, help="Flujo o barrido: '0,pi/3,pi/2'")
    parser.add_argument("--ngon", type=int, default=None, help="Lados de la órbita")
    parser.add_argument("--criteria", type=str, default=None, help="Criterios de aceptación: '1,7,8'")
    parser.add_argument(
        "--print-config",
        action="store_true",
        help="Imprime la configuración resuelta y termina",
    )
    return parser


def _criteria(text: Optional[str]) -> Optional[List[int]]:
    if not text:
        return None
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise ConfigError(f"Criterios inválidos: {text!r}") from e
    if any(not 1 <= v <= 8 for v in values):
        raise ConfigError(f"Los criterios van de 1 a 8: {values}")
    return values


def run(argv: Optional[List[str]] = None) -> int:
    """
    Ejecuta un subcomando y devuelve el código de salida.

    Códigos: 0 éxito, 2 configuración, 3 fallo numérico, 4 aceptación.
    """
    args = build_parser().parse_args(argv)
    try:
        config = load_config(
            args.config,
            {
                "out": args.out,
                "threads": args.threads,
                "K": args.cutoff,
                "alpha": args.alpha,
                "ngon": args.ngon,
            },
        )
        if args.print_config:
            print(config.to_json())
            return 0

        logger.info(f"▶ {args.command} ({config.kind})")
        if args.command == "verify":
            result = cmd_verify(config, _criteria(args.criteria))
        else:
            result = COMMANDS[args.command](config)
        logger.info(f"✅ {result.name} completado → {result.path}")
        return 0
    except WaveTraceError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return e.exit_code


def main() -> None:
    sys.exit(run())
