"""
Tests del almacén de resultados CSV con cabecera de procedencia.
"""
import pandas as pd
import pytest

from src import __version__
from src.utils.storage import ResultStore, config_digest


@pytest.fixture
def frame():
    return pd.DataFrame({"lambda": [5.783185962946784, 14.681970642123893], "m": [0, 1], "n": [1, 1]})


def test_round_trip_preserves_floats(output_dir, frame):
    store = ResultStore(output_dir)
    path = store.write_frame(frame, "spectrum", {"K": 20.0})
    assert path == output_dir / "spectrum.csv"
    pd.testing.assert_frame_equal(ResultStore.read_frame(path), frame)


def test_header_records_version_and_digest(output_dir, frame):
    config = {"K": 20.0, "alpha": [0.0]}
    path = ResultStore(output_dir).write_frame(frame, "spectrum.csv", config, {"count": 2})
    header = ResultStore.read_header(path)
    assert header["version"] == __version__
    assert header["config_sha256"] == config_digest(config)
    assert header["count"] == "2"


def test_digest_ignores_key_order():
    assert config_digest({"a": 1, "b": [1, 2]}) == config_digest({"b": [1, 2], "a": 1})
    assert config_digest({"a": 1}) != config_digest({"a": 2})


def test_writes_are_byte_identical_and_leave_no_temporaries(output_dir, frame):
    store = ResultStore(output_dir)
    first = store.write_frame(frame, "a", {"K": 1}).read_bytes()
    second = store.write_frame(frame, "a", {"K": 1}).read_bytes()
    assert first == second
    assert not list(output_dir.glob("*.tmp"))


def test_read_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        ResultStore.read_frame(tmp_path / "nada.csv")
