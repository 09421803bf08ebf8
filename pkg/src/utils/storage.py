"""
Persistencia de resultados en CSV con cabecera de procedencia.
Los archivos se escriben primero en un temporal y se mueven al destino,
nunca queda un CSV a medio escribir.
"""
import hashlib
import json
import os
import tempfile
from io import StringIO
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd

from src import __version__
from src.config import settings
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

FLOAT_FORMAT = "%.17g"


def config_digest(config: Dict[str, Any]) -> str:
    """SHA-256 de la configuración serializada de forma canónica."""
    payload = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class ResultStore:
    """
    Almacén de tablas de resultados.

    Cada CSV empieza con líneas ``#`` que registran versión del paquete,
    hash de la configuración y la configuración resuelta en JSON.
    """

    def __init__(self, output_dir: Optional[Path] = None):
        """Inicializa el almacén sobre un directorio de salida."""
        self.output_dir = Path(output_dir) if output_dir else settings.output_dir
        logger.debug(f"ResultStore inicializado en {self.output_dir}")

    def header_lines(
        self, config: Optional[Dict[str, Any]], extra: Optional[Dict[str, Any]] = None
    ) -> list:
        """Construye las líneas de cabecera de procedencia."""
        config = config or {}
        lines = [
            f"# version: {__version__}",
            f"# config_sha256: {config_digest(config)}",
            f"# config: {json.dumps(config, sort_keys=True, default=str)}",
        ]
        for key, value in (extra or {}).items():
            lines.append(f"# {key}: {value}")
        return lines

    def render(
        self,
        df: pd.DataFrame,
        config: Optional[Dict[str, Any]] = None,
        extra: Optional[Dict[str, Any]] = None,
    ) -> str:
        """Serializa un DataFrame con cabecera como texto CSV."""
        buffer = StringIO()
        buffer.write("\n".join(self.header_lines(config, extra)) + "\n")
        df.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return buffer.getvalue()

    def write_frame(
        self,
        df: pd.DataFrame,
        name: str,
        config: Optional[Dict[str, Any]] = None,
        extra: Optional[Dict[str, Any]] = None,
    ) -> Path:
        """
        Escribe un DataFrame como CSV de forma atómica.

        Args:
            df: Tabla de resultados
            name: Nombre del archivo (con o sin .csv)
            config: Configuración resuelta que se incrusta en la cabecera
            extra: Pares clave/valor adicionales para la cabecera

        Returns:
            Ruta del archivo escrito

        Example:
            >>> store = ResultStore(Path("output"))
            >>> store.write_frame(spectrum.to_frame(), "spectrum", config)
        """
        self.output_dir.mkdir(parents=True, exist_ok=True)
        target = self.output_dir / (name if name.endswith(".csv") else f"{name}.csv")
        text = self.render(df, config, extra)

        tmp_file = tempfile.NamedTemporaryFile(
            mode="w",
            delete=False,
            suffix=".csv.tmp",
            dir=self.output_dir,
            encoding="utf-8",
            newline="",
        )
        tmp_path = tmp_file.name
        try:
            with tmp_file:
                tmp_file.write(text)
            os.replace(tmp_path, target)
        finally:
            try:
                if os.path.exists(tmp_path):
                    os.unlink(tmp_path)
            except OSError as e:
                logger.warning(f"No se pudo eliminar archivo temporal: {e}")

        logger.info(f"✓ {target.name}: {len(df):,} filas escritas")
        return target

    @staticmethod
    def read_frame(path: Union[str, Path]) -> pd.DataFrame:
        """Lee un CSV de resultados ignorando las líneas de cabecera."""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Archivo de resultados no encontrado: {path}")
        return pd.read_csv(path, comment="#")

    @staticmethod
    def read_header(path: Union[str, Path]) -> Dict[str, str]:
        """Devuelve los pares clave/valor de la cabecera de procedencia."""
        header: Dict[str, str] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.startswith("#"):
                    break
                key, _, value = line[1:].strip().partition(":")
                header[key.strip()] = value.strip()
        return header
