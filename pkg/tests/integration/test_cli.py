"""
Integration tests for the nshopf command line.
"""

import io
import json

import pandas as pd
import pytest
from click.testing import CliRunner

from nonsmooth_hopf import __version__
from nonsmooth_hopf.cli.main import cli
from nonsmooth_hopf.utils.exceptions import EXIT_NUMERICAL, EXIT_SCHEMA

pytestmark = pytest.mark.integration

BRANCH_ARGS = ["--mu-min", "-0.01", "--mu-max", "-0.004", "--mu-count", "3"]


@pytest.fixture
def runner():
    return CliRunner()


def error_of(result):
    """The error JSON on the last stderr line."""
    return json.loads(result.stderr.strip().splitlines()[-1])


class TestCoeffs:
    """Test the coeffs and averaged commands."""

    def test_zero_nonlinearity(self, runner, fixtures_dir):
        """Test that a linear system reports zeros on stdout."""
        result = runner.invoke(cli, ["coeffs", "-i", str(fixtures_dir / "zero.json")])
        assert result.exit_code == 0, result.stderr
        report = json.loads(result.stdout)
        assert report["kind"] == "planar-nf"
        assert "zero nonlinearity" in report["flags"]
        assert all(entry["value"] == 0.0 for entry in report["coefficients"].values())

    def test_subcritical(self, runner, fixtures_dir):
        """Test sigma_hash of the subcritical fixture."""
        result = runner.invoke(cli, ["coeffs", "-i", str(fixtures_dir / "subcritical.json")])
        assert result.exit_code == 0, result.stderr
        coefficients = json.loads(result.stdout)["coefficients"]
        assert coefficients["sigma_hash"]["value"] == pytest.approx(4.0)
        assert coefficients["sigma_hash"]["abs_diff"] < 1e-8

    def test_output_file(self, runner, fixtures_dir, tmp_path):
        """Test that --output keeps the artifact off stdout."""
        target = tmp_path / "report.json"
        result = runner.invoke(cli, ["coeffs", "-i", str(fixtures_dir / "system3d.json"), "-o", str(target)])
        assert result.exit_code == 0, result.stderr
        assert result.stdout == ""
        assert json.loads(target.read_text())["kind"] == "3d"

    def test_averaged(self, runner, fixtures_dir):
        """Test the averaged radial equation of the subcritical fixture."""
        result = runner.invoke(cli, ["averaged", "-i", str(fixtures_dir / "subcritical.json")])
        assert result.exit_code == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["max_rel_diff"] < 1e-8
        assert payload["equilibrium"] == 0.0

    def test_averaged_general_slopes(self, runner, tmp_path):
        """Test that a descriptor with general slopes is averaged."""
        slopes = [[-1.0, 5.0]] + [[-1.0, 1.0]] * 7
        path = tmp_path / "slopes.json"
        path.write_text(json.dumps({
            "kind": "planar-nf",
            "mu": -0.01,
            "quad": {"a": [[1.0, 0.0], [0.0, 0.0]], "b": [[0.0, 0.0], [0.0, 1.0]], "slopes": slopes},
        }))
        result = runner.invoke(cli, ["averaged", "-i", str(path)])
        assert result.exit_code == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["max_rel_diff"] < 1e-8
        assert payload["equilibrium"] > 0.0

    def test_averaged_general_linear(self, runner, fixtures_dir):
        """Test that averaging a general linear part is a numerical-class error."""
        result = runner.invoke(cli, ["averaged", "-i", str(fixtures_dir / "planar_general.json")])
        assert result.exit_code == EXIT_NUMERICAL
        assert error_of(result)["error"] == "ModelError"


class TestErrors:
    """Test error JSON and exit codes."""

    @pytest.mark.parametrize("name", ["invalid_kind.json", "not_hopf.json"])
    def test_bad_descriptor(self, runner, fixtures_dir, name):
        """Test that descriptor problems exit with the schema code."""
        result = runner.invoke(cli, ["coeffs", "-i", str(fixtures_dir / name)])
        assert result.exit_code == EXIT_SCHEMA
        assert result.stdout == ""
        error = error_of(result)
        assert set(error) == {"error", "message", "details", "exit_code"}
        assert error["exit_code"] == EXIT_SCHEMA

    def test_missing_file(self, runner, tmp_path):
        """Test a descriptor path that does not exist."""
        result = runner.invoke(cli, ["coeffs", "-i", str(tmp_path / "absent.json")])
        assert result.exit_code == EXIT_SCHEMA
        assert error_of(result)["error"] == "DescriptorError"

    def test_shimmy_descriptor_elsewhere(self, runner, fixtures_dir):
        """Test that coeffs refuses a shimmy descriptor."""
        result = runner.invoke(cli, ["coeffs", "-i", str(fixtures_dir / "shimmy.json")])
        assert result.exit_code == EXIT_SCHEMA

    def test_short_grid(self, runner, fixtures_dir):
        """Test that a grid of fewer than two values is refused."""
        result = runner.invoke(
            cli, ["branch", "-i", str(fixtures_dir / "subcritical.json"), "--mu-count", "1"]
        )
        assert result.exit_code == EXIT_SCHEMA
        assert error_of(result)["details"] == {"mu_count": 1}

    def test_reversed_grid(self, runner, fixtures_dir):
        """Test that mu-min above mu-max is refused."""
        result = runner.invoke(
            cli, ["diagram", "-i", str(fixtures_dir / "subcritical.json"), "--mu-min", "0.1", "--mu-max", "-0.1"]
        )
        assert result.exit_code == EXIT_SCHEMA

    def test_bad_tolerance(self, runner, fixtures_dir):
        """Test that a nonpositive rtol is a configuration error."""
        result = runner.invoke(
            cli, ["branch", "-i", str(fixtures_dir / "subcritical.json"), *BRANCH_ARGS, "--rtol", "0"]
        )
        assert result.exit_code == EXIT_SCHEMA


class TestShimmy:
    """Test the shimmy command."""

    def test_verdict(self, runner, fixtures_dir):
        """Test that the analysis decides a transversal verdict."""
        result = runner.invoke(cli, ["shimmy", "-i", str(fixtures_dir / "shimmy.json")])
        assert result.exit_code == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["verdict"] in ("supercritical", "subcritical")
        assert payload["branch_slope"] is not None

    def test_negated_tyre(self, runner, fixtures_dir, tmp_path):
        """Test that negating c4 reverses the verdict."""
        c = json.loads((fixtures_dir / "shimmy.json").read_text())["c"]
        flipped = tmp_path / "flipped.json"
        flipped.write_text(json.dumps({"kind": "shimmy", "c": c[:3] + [-c[3]] + c[4:]}))

        original = runner.invoke(cli, ["shimmy", "-i", str(fixtures_dir / "shimmy.json")])
        negated = runner.invoke(cli, ["shimmy", "-i", str(flipped)])
        assert negated.exit_code == 0, negated.stderr
        verdicts = {json.loads(original.stdout)["verdict"], json.loads(negated.stdout)["verdict"]}
        assert verdicts == {"supercritical", "subcritical"}

    def test_vertical(self, runner, fixtures_dir):
        """Test that a vanishing tyre term gives a vertical branch."""
        result = runner.invoke(cli, ["shimmy", "-i", str(fixtures_dir / "shimmy_vertical.json")])
        assert result.exit_code == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["verdict"] == "vertical"
        assert payload["branch_slope"] is None

    def test_wrong_kind(self, runner, fixtures_dir):
        """Test that a planar descriptor is refused."""
        result = runner.invoke(cli, ["shimmy", "-i", str(fixtures_dir / "subcritical.json")])
        assert result.exit_code == EXIT_SCHEMA
        assert error_of(result)["details"] == {"kind": "planar-nf"}


class TestBranch:
    """Test branch continuation output."""

    def test_csv_with_prediction(self, runner, fixtures_dir, tmp_path):
        """Test the CSV artifact and its prediction sibling."""
        target = tmp_path / "branch.csv"
        result = runner.invoke(cli, ["branch", "-i", str(fixtures_dir / "subcritical.json"), *BRANCH_ARGS, "-o", str(target)])
        assert result.exit_code == 0, result.stderr

        frame = pd.read_csv(target)
        assert list(frame.columns[:6]) == ["mu", "r0", "period", "floquet", "stability", "u0"]
        assert len(frame) == 3
        assert (frame["rel_err"] < 0.05).all()
        assert set(frame["stability"]) == {"unstable"}

        summary = json.loads((tmp_path / "branch.prediction.json").read_text())
        assert summary["kind"] == "subcritical"
        assert summary["prediction"]["kind"] == "subcritical"
        assert summary["failures"] == []

    def test_deterministic(self, runner, fixtures_dir):
        """Test that two runs print identical CSV."""
        args = ["branch", "-i", str(fixtures_dir / "subcritical.json"), *BRANCH_ARGS]
        first = runner.invoke(cli, args)
        second = runner.invoke(cli, args)
        assert first.exit_code == 0, first.stderr
        assert first.stdout == second.stdout
        assert first.stdout.splitlines()[0].startswith("mu,r0,period,floquet,stability,u0")

    def test_json_format(self, runner, fixtures_dir):
        """Test the single-document JSON output."""
        result = runner.invoke(
            cli, ["branch", "-i", str(fixtures_dir / "subcritical.json"), *BRANCH_ARGS, "--format", "json"]
        )
        assert result.exit_code == 0, result.stderr
        payload = json.loads(result.stdout)
        assert len(payload["points"]) == 3
        assert abs(payload["predicted_slope"]) == pytest.approx(abs(payload["slope"]), rel=0.05)

    def test_diagram(self, runner, fixtures_dir):
        """Test the diagram columns, with NaN on the side without orbits."""
        result = runner.invoke(
            cli,
            ["diagram", "-i", str(fixtures_dir / "subcritical.json"), "--mu-min", "-0.01", "--mu-max", "0.01", "--mu-count", "4"],
        )
        assert result.exit_code == 0, result.stderr
        frame = pd.read_csv(io.StringIO(result.stdout))
        assert list(frame.columns) == ["mu", "r0_numeric", "r0_predicted", "rel_err"]
        negative, positive = frame[frame["mu"] < 0], frame[frame["mu"] > 0]
        assert negative["r0_numeric"].notna().all()
        assert positive["r0_numeric"].isna().all()
        assert positive["r0_predicted"].isna().all()


class TestInfo:
    """Test the informational commands."""

    def test_version(self, runner):
        """Test the version banner."""
        result = runner.invoke(cli, ["version"])
        assert result.exit_code == 0
        assert f"nonsmooth-hopf v{__version__}" in result.stdout

    def test_info(self, runner):
        """Test that the active configuration is shown."""
        result = runner.invoke(cli, ["info"])
        assert result.exit_code == 0
        assert "Gauss-Legendre order" in result.stdout

    def test_config_file(self, runner, tmp_path):
        """Test that --config feeds the info panel."""
        config = tmp_path / "config.yaml"
        config.write_text("quadrature:\n  order: 12\n")
        result = runner.invoke(cli, ["--config", str(config), "info"])
        assert result.exit_code == 0, result.stderr
        assert "Gauss-Legendre order: 12" in result.stdout
