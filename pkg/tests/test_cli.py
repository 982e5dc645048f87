import json

import numpy as np
import pytest
from click.testing import CliRunner

from maxdiv.cli import main

from helpers import THREE_SPECIES, THREE_SPECIES_MAGNITUDE

THREE_SPECIES_CSV = "1,0.4,0.4\n0.4,1,0.9\n0.4,0.9,1\n"
NONSYM_CSV = "1,0.5\n0,1\n"
PATH4_GRAPH = "4\n1 2\n2 3\n3 4\n"


@pytest.fixture
def runner():
    return CliRunner()


def _write(tmp_path, name, text):
    f = tmp_path / name
    f.write_text(text)
    return str(f)


class TestDiversityCommand:
    def test_value(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", "1,0\n0,1\n")
        a = _write(tmp_path, "p.csv", "0.5,0.5\n")
        result = runner.invoke(main, ["diversity", "--matrix", m, "--abundances", a, "-q", "2"])
        assert result.exit_code == 0
        assert "D_2 = 2" in result.output

    def test_multiple_orders_and_inf(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", THREE_SPECIES_CSV)
        a = _write(tmp_path, "p.csv", "0.5,0.25,0.25\n")
        result = runner.invoke(
            main, ["diversity", "--matrix", m, "--abundances", a, "-q", "0", "-q", "inf"]
        )
        assert result.exit_code == 0
        assert result.output.count("D_") == 2

    def test_nonsymmetric_allowed_here(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", NONSYM_CSV)
        a = _write(tmp_path, "p.csv", "0.5,0.5\n")
        result = runner.invoke(main, ["diversity", "--matrix", m, "--abundances", a, "-q", "2"])
        assert result.exit_code == 0
        assert "1.6" in result.output

    def test_bad_abundances_exit_2(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", "1,0\n0,1\n")
        a = _write(tmp_path, "p.csv", "0.5,0.6\n")
        result = runner.invoke(main, ["diversity", "--matrix", m, "--abundances", a, "-q", "1"])
        assert result.exit_code == 2


class TestProfileCommand:
    def test_constant_profile(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", "1,0\n0,1\n")
        a = _write(tmp_path, "p.csv", "0.5,0.5\n")
        result = runner.invoke(main, ["profile", "--matrix", m, "--abundances", a])
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "q,value"
        assert lines[-1].startswith("inf,")
        for line in lines[1:]:
            assert float(line.split(",")[1]) == pytest.approx(2.0, abs=1e-12)

    def test_custom_orders_and_file_output(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", THREE_SPECIES_CSV)
        a = _write(tmp_path, "p.csv", "0.5,0.25,0.25\n")
        out = tmp_path / "prof.csv"
        result = runner.invoke(
            main,
            ["profile", "--matrix", m, "--abundances", a, "--orders", "0,1,2,inf", "-o", str(out)],
        )
        assert result.exit_code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "q,value"
        assert len(lines) == 5
        assert lines[-1].startswith("inf,")
        assert out.read_text().endswith("\n")


class TestMaximizeCommand:
    def test_three_species(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", THREE_SPECIES_CSV)
        result = runner.invoke(main, ["maximize", "--matrix", m])
        assert result.exit_code == 0
        assert "dmax: 1.4557" in result.output
        assert "0.478261, 0.26087, 0.26087" in result.output
        assert "unique maximizer: yes" in result.output

    def test_json_is_bit_exact(self, runner, tmp_path):
        from maxdiv import SimilarityMatrix, maximize

        m = _write(tmp_path, "z.csv", THREE_SPECIES_CSV)
        result = runner.invoke(main, ["maximize", "--matrix", m, "--json"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        lib = maximize(SimilarityMatrix(THREE_SPECIES))
        assert payload["dmax"] == lib.dmax
        assert payload["sample_maximizer"] == list(lib.sample_maximizer.probs)
        assert payload["winners"][0]["support"] == [1, 2, 3]

    def test_families_flag(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", "1,1,0,0\n1,1,1,0\n0,1,1,1\n0,0,1,1\n")
        result = runner.invoke(main, ["maximize", "--matrix", m, "--method", "exhaustive", "--families"])
        assert result.exit_code == 0
        assert "kernel direction" in result.output
        assert "support {1,3}" in result.output

    def test_nonsymmetric_exit_3(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", NONSYM_CSV)
        result = runner.invoke(main, ["maximize", "--matrix", m])
        assert result.exit_code == 3
        assert "symmetric" in result.output

    def test_cap_exit_3(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", "\n".join(",".join("1" if i == j else "0" for j in range(8)) for i in range(8)))
        result = runner.invoke(
            main, ["maximize", "--matrix", m, "--method", "exhaustive", "--cap", "7"]
        )
        assert result.exit_code == 3

    def test_method_fast_success(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", THREE_SPECIES_CSV)
        result = runner.invoke(main, ["maximize", "--matrix", m, "--method", "fast"])
        assert result.exit_code == 0
        assert "method: ultrametric" in result.output

    def test_method_fast_unavailable_exit_3(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", "1,1,0\n1,1,1\n0,1,1\n")
        result = runner.invoke(main, ["maximize", "--matrix", m, "--method", "fast"])
        assert result.exit_code == 3

    def test_missing_file_exit_2(self, runner):
        result = runner.invoke(main, ["maximize", "--matrix", "/nonexistent.csv"])
        assert result.exit_code == 2


class TestDiagnoseCommand:
    def test_three_species(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", THREE_SPECIES_CSV)
        result = runner.invoke(main, ["diagnose", "--matrix", m])
        assert result.exit_code == 0
        assert "ultrametric: yes" in result.output
        assert "positive definite: yes" in result.output
        assert "full-support maximizer exists: yes" in result.output

    def test_json(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", "1,1\n1,1\n")
        result = runner.invoke(main, ["diagnose", "--matrix", m, "--json"])
        payload = json.loads(result.output)
        assert payload["positive_semidefinite"] is True
        assert payload["positive_definite"] is False
        assert payload["full_support_maximizer_exists"] is True
        assert payload["all_maximizers_full_support"] is False


class TestGraphCommands:
    def test_alpha_four_path(self, runner, tmp_path):
        g = _write(tmp_path, "g.txt", PATH4_GRAPH)
        result = runner.invoke(main, ["graph", "alpha", "--graph", g])
        assert result.exit_code == 0
        assert result.output.strip() == "2"

    def test_capacity_triangle(self, runner, tmp_path):
        g = _write(tmp_path, "g.txt", "3\n1 2\n1 3\n2 3\n")
        result = runner.invoke(main, ["graph", "capacity", "--graph", g])
        assert result.exit_code == 0
        assert "capacity: 0.666667" in result.output

    def test_entropy(self, runner, tmp_path):
        f = _write(tmp_path, "d.csv", "0,1,2,3\n1,0,1,2\n2,1,0,1\n3,2,1,0\n")
        result = runner.invoke(main, ["graph", "entropy", "--metric", f, "--epsilon", "1"])
        assert result.exit_code == 0
        assert "N(d, eps)   = 2" in result.output
        assert "Dmax(Z^eps) = 2" in result.output
        assert "N(d, eps/2) = 4" in result.output

    def test_bad_graph_exit_2(self, runner, tmp_path):
        g = _write(tmp_path, "g.txt", "3\n1 9\n")
        result = runner.invoke(main, ["graph", "alpha", "--graph", g])
        assert result.exit_code == 2

    def test_nonpositive_epsilon_exit_2(self, runner, tmp_path):
        f = _write(tmp_path, "d.csv", "0,1\n1,0\n")
        result = runner.invoke(main, ["graph", "entropy", "--metric", f, "--epsilon", "0"])
        assert result.exit_code == 2


class TestPrecision:
    def test_precision_flag(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", THREE_SPECIES_CSV)
        result = runner.invoke(main, ["--precision", "12", "maximize", "--matrix", m])
        assert "1.45569620253" in result.output

    def test_precision_env(self, runner, tmp_path):
        m = _write(tmp_path, "z.csv", THREE_SPECIES_CSV)
        result = runner.invoke(main, ["maximize", "--matrix", m], env={"MAXDIV_PRECISION": "3"})
        assert "dmax: 1.46" in result.output
