"""
Configuración de pytest y fixtures para los tests del Laboratorio de Localización.
"""

from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from app.core.v1.grid import make_grid
from app.core.v1.states import Bump, Gaussian, build_state
from tests.utils import TestDataGenerator


ROOT = Path(__file__).resolve().parent.parent
BUNDLED_CONFIG = ROOT / "configs" / "all-experiments.json"


@pytest.fixture(scope="session")
def api_client():
    """Cliente de pruebas para la aplicación FastAPI."""
    from main import app

    with TestClient(app) as client:
        yield client


@pytest.fixture(scope="session")
def bundled_config_path() -> Path:
    """Ruta de la configuración incluida con todos los experimentos."""
    return BUNDLED_CONFIG


@pytest.fixture(scope="session")
def standard_grid():
    """Malla [-32, 32) con 1024 puntos (dx = 1/16)."""
    return make_grid(-32.0, 32.0, 1024)


@pytest.fixture(scope="session")
def fine_grid():
    """Malla [-32, 32) con 4096 puntos (dx = 1/64)."""
    return make_grid(-32.0, 32.0, 4096)


@pytest.fixture(scope="session")
def gaussian_state(standard_grid):
    """Gaussiana centrada, en reposo, sigma = 1."""
    return build_state(Gaussian(x0=0.0, p0=0.0, sigma=1.0), standard_grid)


@pytest.fixture(scope="session")
def moving_gaussian(standard_grid):
    """Gaussiana desplazada con momento p0 = 1.5."""
    return build_state(Gaussian(x0=-2.0, p0=1.5, sigma=1.0), standard_grid)


@pytest.fixture(scope="session")
def bump_state(standard_grid):
    """Bump de soporte compacto [-1, 1]."""
    return build_state(Bump(center=0.0, radius=1.0), standard_grid)


@pytest.fixture
def e1_config_file(tmp_path) -> Path:
    """Archivo de configuración con un único experimento E1 rápido."""
    return TestDataGenerator.write_config(tmp_path, TestDataGenerator.small_config())
