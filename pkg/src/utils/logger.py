"""
Logging del laboratorio: formato estructurado, banners de fase y cronómetro.
"""
import logging
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

from src.config import settings

LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
BANNER_WIDTH = 70


def _default_log_file() -> Optional[Path]:
    return settings.logs_dir / "wavetrace.log" if settings.log_to_file else None


def setup_logger(
    name: str,
    log_file: Optional[Path] = None,
    level: Optional[str] = None,
) -> logging.Logger:
    """
    Logger del módulo ``name`` con salida a stderr y archivo opcional.

    Los CSV de algunos comandos pueden ir a stdout, por eso la consola del
    log es stderr. Sin ``log_file`` explícito se usa ``logs/wavetrace.log``
    cuando ``settings.log_to_file`` está activo.

    Args:
        name: Nombre del logger (usualmente __name__)
        log_file: Archivo de log opcional
        level: Nivel (DEBUG, INFO, WARNING, ERROR); por defecto ``settings.log_level``

    Returns:
        Logger configurado

    Example:
        >>> logger = setup_logger(__name__)
        >>> logger.info("Calculando espectro")
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level or settings.log_level))

    if logger.handlers:
        return logger

    formatter = logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT)
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]

    target = log_file or _default_log_file()
    if target is not None:
        target.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(target, encoding="utf-8"))

    for handler in handlers:
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    return logger


def log_banner(logger: logging.Logger, title: str, icon: str = "🚀") -> None:
    """Escribe un título de fase entre dos líneas de '='."""
    logger.info("=" * BANNER_WIDTH)
    logger.info(f"{icon} {title}")
    logger.info("=" * BANNER_WIDTH)


@contextmanager
def log_duration(logger: logging.Logger, label: str) -> Iterator[None]:
    """
    Mide y registra la duración de un bloque.

    Example:
        >>> with log_duration(logger, "espectro K=80"):
        ...     spectrum = disk_flux_spectrum(problem, 80.0)
    """
    start = time.perf_counter()
    try:
        yield
    finally:
        logger.info(f"⏱ {label}: {time.perf_counter() - start:.2f} s")
