"""
Fixtures compartidas: órbita triangular, espectros pequeños y redes del toro.
"""
import math

import pytest

from src.billiards.geometry import Geometry, ngon_orbit
from src.billiards.rays import trace_ray
from src.spectra.disk import DiskFluxProblem, disk_flux_spectrum
from src.spectra.lattice import Lattice


@pytest.fixture
def triangle_orbit():
    """Triángulo inscrito en R = 1 con z = (0, ½), η = (1, 0)."""
    return ngon_orbit(3, 1.0, math.pi / 6, "cw")


@pytest.fixture
def triangle_path(triangle_orbit):
    spec, z, eta = triangle_orbit
    return trace_ray(z, eta, spec.length, Geometry(1.0))


@pytest.fixture(scope="session")
def disk_spectrum_k20():
    """Disco unidad sin flujo hasta K = 20."""
    return disk_flux_spectrum(DiskFluxProblem(alpha=0.0), 20.0, threads=1)


@pytest.fixture
def generic_lattice():
    return Lattice.from_vectors((1.0, 0.0), (0.31, 1.07))


@pytest.fixture
def square_lattice():
    return Lattice.from_vectors((1.0, 0.0), (0.0, 1.0))


@pytest.fixture
def output_dir(tmp_path):
    out = tmp_path / "output"
    out.mkdir()
    return out
