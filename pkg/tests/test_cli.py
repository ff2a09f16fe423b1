import json
import os

import pytest
from typer.testing import CliRunner

from pellforms.cli import app

from .conftest import EXAMPLE_ROOT_24, EXAMPLE_TRUNCATIONS

EXAMPLE_ARGS = ["448", "672", "560", "280", "84", "14", "1"]


@pytest.fixture
def runner():
    return CliRunner()


def _payload(result):
    return json.loads(result.stdout)


class TestApproxRoot:
    def test_example_trace(self, runner):
        result = runner.invoke(app, ["approx-root", "--trace", *EXAMPLE_ARGS])
        assert result.exit_code == 0
        for i, value in enumerate(EXAMPLE_TRUNCATIONS, start=1):
            assert f"m={i}: {value} ~" in result.stdout
        assert "m=2: 899/2" in result.stdout
        assert f"root: {EXAMPLE_ROOT_24}" in result.stdout

    def test_json(self, runner):
        result = runner.invoke(app, ["approx-root", "--digits", "10", "--json", "2", "1"])
        assert result.exit_code == 0
        payload = _payload(result)
        assert payload["command"] == "approx-root"
        assert payload["exit_code"] == 0
        assert payload["result"]["decimal"] == "2.4142135623"
        assert payload["result"]["trace"] == []

    def test_no_dominant_root(self, runner):
        result = runner.invoke(app, ["approx-root", "--digits", "10", "--max-iter", "50", "--", "0", "-1"])
        assert result.exit_code == 1
        assert "error:" in result.output

    def test_zero_trailing_coefficient(self, runner):
        result = runner.invoke(app, ["approx-root", "1", "0"])
        assert result.exit_code == 2


class TestFormCommands:
    def test_norm(self, runner):
        result = runner.invoke(app, ["form", "norm", "(3, 4, [5, 3, 2])"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "1"

    def test_minpoly(self, runner):
        result = runner.invoke(app, ["form", "minpoly", "(2, 2, [1, 1])"])
        assert result.stdout.strip() == "x^2 = 2x + 1"

    def test_inverse(self, runner):
        result = runner.invoke(app, ["form", "inv", "(2, 2, [1, 1])"])
        assert result.stdout.strip() == "(2, 2, [-1, 1])"

    def test_eval(self, runner):
        result = runner.invoke(app, ["form", "eval", "(7, 129, [64, 32, 16, 8, 4, 2, 1])", "--digits", "26"])
        assert result.exit_code == 0
        assert result.stdout.strip().startswith("449.4977765335923528701530207")

    def test_field_mismatch(self, runner):
        result = runner.invoke(app, ["form", "mul", "(2, 2, [1, 1])", "(2, 3, [1, 1])"])
        assert result.exit_code == 2

    def test_zero_norm_json(self, runner):
        result = runner.invoke(app, ["form", "conj", "(2, 4, [2, -1])", "--json"])
        assert result.exit_code == 2
        assert "error" in _payload(result)


class TestPellCommands:
    def test_family(self, runner):
        result = runner.invoke(app, ["pell", "family", "--degree", "5", "--branch", "1", "--json"])
        assert result.exit_code == 0
        assert _payload(result)["result"]["m"] == "-4"

    def test_verify(self, runner):
        result = runner.invoke(app, ["pell", "verify", "--degree", "3", "--branch", "1", "--k", "2", "--r", "6"])
        assert result.exit_code == 0
        assert "verdict: verified" in result.stdout

    def test_erratum_warns(self, runner):
        args = ["pell", "verify", "--degree", "3", "--branch", "rational_c", "--k", "2", "--r", "1"]
        result = runner.invoke(app, args)
        assert result.exit_code == 0
        assert "warning:" in result.stdout
        assert runner.invoke(app, args + ["--strict"]).exit_code == 1

    def test_degree_nine_readings(self, runner):
        result = runner.invoke(app, ["pell", "verify", "--degree", "9", "--branch", "2",
                                     "--k", "2", "--r", "1", "--json"])
        assert result.exit_code == 0
        readings = _payload(result)["result"]["readings"]
        assert readings["inverse"]["status"] == "verified"

    def test_grid(self, runner, tmp_path):
        result = runner.invoke(app, ["pell", "grid", "--degree", "3", "--kmax", "2", "--rmax", "2",
                                     "--workers", "2", "--save", "--json"])
        assert result.exit_code == 0
        payload = _payload(result)["result"]
        assert len(payload["records"]) == 24
        assert os.path.exists(payload["saved"]["jsonl"])
        assert str(tmp_path) in payload["saved"]["csv"]

    def test_search(self, runner):
        result = runner.invoke(app, ["pell", "search", "--m", "7", "--kbound", "5", "--json"])
        assert result.exit_code == 0
        assert _payload(result)["result"]["solution"]["coords"] == ["505", "264", "138"]

    @pytest.mark.slow
    def test_gig(self, runner):
        result = runner.invoke(app, ["pell", "gig"])
        assert result.exit_code == 0
        assert "s2: 1200 digits, match" in result.stdout

    def test_triangle(self, runner):
        result = runner.invoke(app, ["pell", "triangle"])
        assert result.exit_code == 0
        assert "mismatch" not in result.stdout

    def test_freeterms(self, runner):
        result = runner.invoke(app, ["pell", "freeterms"])
        assert result.exit_code == 0
        assert "order 4: 42 = 42 ok" in result.stdout

    def test_f1(self, runner):
        result = runner.invoke(app, ["pell", "f1", "--n", "4", "--m", "2", "--variant", "plus_even"])
        assert result.exit_code == 0
        assert "norm = -1 (expected -1)" in result.stdout

    def test_f1_degenerate(self, runner):
        result = runner.invoke(app, ["pell", "f1", "--n", "3", "--m", "1", "--variant", "minus"])
        assert result.exit_code == 2


class TestPper:
    def test_rows_with_check(self, runner):
        result = runner.invoke(app, ["pper", "--check", "2", "3,5"])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[0] == "25"
        assert "definitional: 25 (agrees)" in result.stdout

    def test_ddet_from_file(self, runner, tmp_path):
        path = tmp_path / "matrix.txt"
        path.write_text("2\n3 5\n")
        result = runner.invoke(app, ["pper", "--file", str(path), "--mode", "ddet", "--json"])
        assert _payload(result)["result"]["value"] == "-5"

    def test_bad_mode(self, runner):
        assert runner.invoke(app, ["pper", "--mode", "perm", "1"]).exit_code == 2

    def test_ragged_rows(self, runner):
        assert runner.invoke(app, ["pper", "1", "2"]).exit_code == 2
