"""
Tests de la interfaz de línea de comandos: run, list y sweep.
"""

import orjson
import pandas as pd
import pytest
from click.testing import CliRunner

from app.cli.v1.commands import EXIT_CONFIG, EXIT_OK, _parse_values, cli
from app.core.v1.exceptions import ConfigurationException
from app.core.v1.reporting import CSV_COLUMNS
from tests.utils import TestDataGenerator


@pytest.fixture
def runner():
    """Runner de click."""
    return CliRunner()


@pytest.mark.unit
class TestListCommand:
    """Tests del comando list."""

    def test_list_text(self, runner):
        """Test del listado en texto: una línea por experimento."""
        result = runner.invoke(cli, ["list"])

        assert result.exit_code == EXIT_OK
        lines = result.output.strip().splitlines()
        assert len(lines) == 7
        assert lines[0].startswith("E1  ")
        assert "(exploratory)" in lines[5]

    def test_list_json(self, runner):
        """Test del listado en JSON."""
        result = runner.invoke(cli, ["list", "--json"])

        assert result.exit_code == EXIT_OK
        registry = orjson.loads(result.output)
        assert [item["id"] for item in registry] == ["E1", "E2", "E3", "E4", "E5", "E6", "E7"]
        assert set(registry[0]) == {"id", "title", "claim", "reference", "exploratory"}

    def test_version(self, runner):
        """Test de la opción de versión."""
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "loclab" in result.output


@pytest.mark.integration
class TestRunCommand:
    """Tests del comando run."""

    def test_run_writes_outputs(self, runner, e1_config_file, tmp_path):
        """Test que run escribe CSV, JSON, SVG y el manifiesto."""
        out_dir = tmp_path / "out"
        result = runner.invoke(cli, ["run", str(e1_config_file), "-o", str(out_dir)])

        assert result.exit_code == EXIT_OK, result.output
        for name in ("E1.csv", "E1.json", "E1_density.svg", "E1_norms.svg", "manifest.json"):
            assert (out_dir / name).is_file()

        frame = pd.read_csv(out_dir / "E1.csv")
        assert list(frame.columns) == CSV_COLUMNS
        assert list(frame["t"]) == [0.0, 0.5, 1.0]

        manifest = orjson.loads((out_dir / "manifest.json").read_bytes())
        assert manifest["verdicts"] == {"E1": "pass"}
        assert "E1.csv" in manifest["files"]["E1"]
        assert len(manifest["resolved_specs"]) == 1

    def test_run_is_deterministic(self, runner, e1_config_file, tmp_path):
        """Test que dos corridas producen CSV y JSON idénticos."""
        first, second = tmp_path / "first", tmp_path / "second"
        runner.invoke(cli, ["run", str(e1_config_file), "-o", str(first)])
        runner.invoke(cli, ["run", str(e1_config_file), "-o", str(second)])

        for name in ("E1.csv", "E1.json"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    @pytest.mark.edge_case
    def test_bad_config_exit_code(self, runner, tmp_path):
        """Test que una configuración inválida termina con código 2."""
        path = tmp_path / "bad.json"
        path.write_text('{"grid": {"x_min": 1.0, "x_max": -1.0, "n_points": 1024}}', encoding="utf-8")

        result = runner.invoke(cli, ["run", str(path), "-o", str(tmp_path / "out")])
        assert result.exit_code == EXIT_CONFIG

    @pytest.mark.edge_case
    def test_missing_config_exit_code(self, runner, tmp_path):
        """Test que un archivo inexistente termina con código 2."""
        result = runner.invoke(cli, ["run", str(tmp_path / "none.json"), "-o", str(tmp_path / "out")])
        assert result.exit_code == EXIT_CONFIG

    @pytest.mark.edge_case
    def test_empty_experiment_list(self, runner, tmp_path):
        """Test que una configuración sin experimentos escribe solo el manifiesto."""
        path = TestDataGenerator.write_config(tmp_path, TestDataGenerator.small_config([]))
        out_dir = tmp_path / "out"

        result = runner.invoke(cli, ["run", str(path), "-o", str(out_dir)])

        assert result.exit_code == EXIT_OK
        assert sorted(item.name for item in out_dir.iterdir()) == ["manifest.json"]

    @pytest.mark.edge_case
    def test_runtime_configuration_error(self, runner, tmp_path):
        """Test que un error de configuración en ejecución termina con código 2."""
        document = TestDataGenerator.small_config([
            {"id": "E6", "state": {"kind": "Gaussian", "sigma": 1.0}, "sample_times": [1.0]},
        ])
        path = TestDataGenerator.write_config(tmp_path, document)

        result = runner.invoke(cli, ["run", str(path), "-o", str(tmp_path / "out")])
        assert result.exit_code == EXIT_CONFIG


@pytest.mark.integration
class TestSweepCommand:
    """Tests del comando sweep."""

    def test_sweep_margin(self, runner, e1_config_file, tmp_path):
        """Test de un barrido sobre el margen de E1."""
        out_dir = tmp_path / "sweep"
        result = runner.invoke(cli, [
            "sweep", str(e1_config_file), "--param", "analysis.margin",
            "--values", "1.0,2.0", "-o", str(out_dir),
        ])

        assert result.exit_code == EXIT_OK, result.output
        frame = pd.read_csv(out_dir / "sweep.csv")
        assert list(frame["value"]) == [1.0, 2.0]
        assert list(frame["verdict"]) == ["pass", "pass"]
        assert frame["convergence"].iloc[1] == 0.0
        assert (out_dir / "sweep_0.json").is_file()
        assert (out_dir / "manifest.json").is_file()

    @pytest.mark.edge_case
    def test_unknown_parameter(self, runner, e1_config_file, tmp_path):
        """Test que un parámetro desconocido termina con código 2."""
        result = runner.invoke(cli, [
            "sweep", str(e1_config_file), "--param", "analysis.nothing",
            "--values", "1", "-o", str(tmp_path / "sweep"),
        ])
        assert result.exit_code == EXIT_CONFIG

    @pytest.mark.edge_case
    def test_unknown_experiment(self, runner, e1_config_file, tmp_path):
        """Test que un experimento ausente termina con código 2."""
        result = runner.invoke(cli, [
            "sweep", str(e1_config_file), "--param", "analysis.margin",
            "--values", "1", "--experiment", "E4", "-o", str(tmp_path / "sweep"),
        ])
        assert result.exit_code == EXIT_CONFIG


@pytest.mark.unit
class TestParseValues:
    """Tests del análisis de valores de barrido."""

    def test_numbers(self):
        """Test de enteros y flotantes separados por comas."""
        assert _parse_values("1, 2.5,1e-3") == [1, 2.5, 1e-3]

    @pytest.mark.edge_case
    @pytest.mark.parametrize("values", ["", " , ", "a,b", "true", "[1]"])
    def test_invalid_values(self, values):
        """Test de valores vacíos o no numéricos."""
        with pytest.raises(ConfigurationException):
            _parse_values(values)
