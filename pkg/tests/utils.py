"""
Utilidades auxiliares para los tests del Laboratorio de Localización.
"""

import copy
from pathlib import Path
from typing import Any, Dict, List, Optional

import orjson

from app.core.v1.config_loader import parse_config
from app.core.v1.experiment_schema import ExperimentSpec


class TestDataGenerator:
    """Generador de configuraciones de prueba."""

    __test__ = False

    SMALL_GRID = {"x_min": -32.0, "x_max": 32.0, "n_points": 1024}

    @staticmethod
    def e1_experiment(label: Optional[str] = None) -> Dict[str, Any]:
        """Experimento E1 con tiempos de muestreo donde la dispersión es evidente."""
        experiment = {
            "id": "E1",
            "state": {"kind": "Bump", "center": 0.0, "radius": 1.0},
            "propagator": {"scheme": "ExactFree"},
            "sample_times": [0.0, 0.5, 1.0],
            "analysis": {"support_radius": 1.0, "margin": 1.0, "mass_floor": 1e-12},
        }
        if label is not None:
            experiment["label"] = label
        return experiment

    @staticmethod
    def small_config(experiments: Optional[List[Dict[str, Any]]] = None) -> Dict[str, Any]:
        """Configuración completa con la malla pequeña compartida."""
        if experiments is None:
            experiments = [TestDataGenerator.e1_experiment()]
        return {"grid": copy.deepcopy(TestDataGenerator.SMALL_GRID), "experiments": experiments}

    @staticmethod
    def write_config(directory: Path, document: Dict[str, Any], name: str = "config.json") -> Path:
        """Escribir una configuración como JSON indentado."""
        path = Path(directory) / name
        path.write_bytes(orjson.dumps(document, option=orjson.OPT_INDENT_2))
        return path

    @staticmethod
    def resolved_specs(document: Dict[str, Any]) -> List[ExperimentSpec]:
        """Validar una configuración y devolver los experimentos con la malla resuelta."""
        text = orjson.dumps(document, option=orjson.OPT_INDENT_2).decode()
        return parse_config(text, "<test>").resolved()


class ConfigHelpers:
    """Ayudas para leer la configuración incluida."""

    @staticmethod
    def bundled_spec(path: Path, experiment_id: str) -> ExperimentSpec:
        """Experimento de la configuración incluida, con su malla resuelta."""
        document = orjson.loads(Path(path).read_bytes())
        for spec in TestDataGenerator.resolved_specs(document):
            if spec.id == experiment_id:
                return spec
        raise KeyError(experiment_id)
