"""End-to-end CLI tests via Click's CliRunner."""

import json
import math

from click.testing import CliRunner

from tasepkit import __version__
from tasepkit.cli import main
from tasepkit.core.fcore import f_n
from tasepkit.core.params import ConvergenceError, ModelParams


def _json(runner, args):
    result = runner.invoke(main, args)
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


def test_verbs_registered():
    assert set(main.commands) == {
        "green",
        "ggf",
        "boundary",
        "current",
        "simulate",
        "airy",
        "presets",
    }


def test_version():
    result = CliRunner().invoke(main, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


# -- green and ggf ------------------------------------------------------------


def test_green_at_time_zero():
    data = _json(CliRunner(), ["green", "--y", "0", "--t", "0", "--json"])
    assert data["command"] == "green"
    assert data["rows"] == [{"x": "0", "y": "0", "t": 0, "G": "1/1"}]
    assert data["total"] == "1/1"


def test_green_with_oracle_column():
    data = _json(
        CliRunner(),
        ["green", "--y", "0,-1", "--t", "3", "--oracle", "--json"],
    )
    assert data["columns"] == ["x", "y", "t", "G", "oracle"]
    assert len(data["rows"]) > 1
    assert all(row["G"] == row["oracle"] for row in data["rows"])
    assert data["total"] == "1/1"


def test_ggf_single_particle():
    half = ModelParams(p="1/2")
    data = _json(
        CliRunner(), ["ggf", "--final", "3:5", "--initial", "0:0", "--json"]
    )
    want = f_n(0, 3, 5, half)
    assert data["rows"][0]["GGF"] == f"{want.numerator}/{want.denominator}"


def test_config_file_with_flag_override(write_config):
    path = write_config({"command": "ggf", "p": "1/3"})
    data = _json(
        CliRunner(),
        [
            "ggf",
            "--config",
            str(path),
            "--p",
            "1/4",
            "--final",
            "1:1",
            "--initial",
            "0:0",
            "--json",
        ],
    )
    assert data["config"]["p"] == "1/4"
    assert data["rows"][0]["GGF"] == "1/4"


def test_bad_points_exit_2():
    result = CliRunner().invoke(
        main, ["ggf", "--final", "3-5", "--initial", "0:0"]
    )
    assert result.exit_code == 2


# -- boundary -----------------------------------------------------------------


def test_boundary_fixed_time_normalization():
    data = _json(
        CliRunner(),
        [
            "boundary",
            "--kind",
            "time",
            "--at",
            "3",
            "-N",
            "2",
            "--t-max",
            "3",
            "--json",
        ],
    )
    assert data["normalization"] == "1/1"
    assert all(row["t_last"] <= 3 for row in data["rows"])


# -- current ------------------------------------------------------------------


def test_current_grid_matches_negative_binomial():
    data = _json(
        CliRunner(),
        [
            "current",
            "--mode",
            "float",
            "-N",
            "1",
            "--x",
            "2",
            "--labels",
            "1",
            "--thresholds",
            "6",
            "--grid",
            "--json",
        ],
    )
    rows = data["rows"]
    assert [row["thresholds"] for row in rows] == [str(b) for b in range(1, 7)]
    for row in rows:
        a = int(row["thresholds"])
        want = sum(
            0.5 ** (t + 1) * math.comb(t, 2) for t in range(2, a + 1)
        )
        assert abs(float(row["probability"]) - want) < 1e-8


def test_current_mc_column_matches_probability():
    data = _json(
        CliRunner(),
        [
            "current",
            "--mode",
            "float",
            "-N",
            "1",
            "--x",
            "2",
            "--labels",
            "1",
            "--thresholds",
            "3",
            "--mc",
            "--trials",
            "4000",
            "--seed",
            "7",
            "--json",
        ],
    )
    assert "mc" in data["columns"]
    assert data["censored"] == 0
    assert data["t_cap"] > 3
    row = data["rows"][0]
    exact = 0.3125
    assert abs(float(row["probability"]) - exact) < 1e-8
    se = math.sqrt(exact * (1 - exact) / 4000)
    assert abs(float(row["mc"]) - exact) < 4 * se


def test_current_mc_threshold_at_cap_exit_2():
    result = CliRunner().invoke(
        main,
        [
            "current",
            "-N",
            "1",
            "--x",
            "0",
            "--labels",
            "1",
            "--thresholds",
            "5",
            "--mc",
            "--trials",
            "50",
            "--t-cap",
            "5",
        ],
    )
    assert result.exit_code == 2


def test_current_from_preset():
    data = _json(
        CliRunner(), ["current", "--preset", "negative-binomial", "--json"]
    )
    want = sum(0.5 ** (t + 1) * math.comb(t, 2) for t in range(2, 11))
    assert abs(float(data["rows"][0]["probability"]) - want) < 1e-8
    assert data["config"]["id"] == "negative-binomial"


def test_preset_for_another_command_exit_2():
    result = CliRunner().invoke(
        main,
        [
            "ggf",
            "--preset",
            "negative-binomial",
            "--final",
            "1:1",
            "--initial",
            "0:0",
        ],
    )
    assert result.exit_code == 2


def test_unknown_preset_exit_2():
    result = CliRunner().invoke(
        main, ["current", "--preset", "no-such-preset"]
    )
    assert result.exit_code == 2


def test_bad_p_exit_2():
    result = CliRunner().invoke(
        main, ["green", "--p", "3/2", "--y", "0", "--t", "1"]
    )
    assert result.exit_code == 2


def test_convergence_failure_exit_3(monkeypatch):
    def fail(*args, **kwargs):
        raise ConvergenceError("horizon did not stabilise")

    monkeypatch.setattr("tasepkit.cli.joint_current_prob", fail)
    result = CliRunner().invoke(
        main,
        [
            "current",
            "-N",
            "1",
            "--x",
            "0",
            "--labels",
            "1",
            "--thresholds",
            "3",
        ],
    )
    assert result.exit_code == 3


# -- simulate -----------------------------------------------------------------


def test_simulate_output_is_reproducible(tmp_path):
    runner = CliRunner()
    args = [
        "simulate",
        "-N",
        "2",
        "--x",
        "0",
        "--trials",
        "300",
        "--seed",
        "3",
        "--t-cap",
        "80",
    ]
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for target in (first, second):
        result = runner.invoke(main, args + ["--output", str(target)])
        assert result.exit_code == 0, result.output
    assert first.read_bytes() == second.read_bytes()
    side_a = json.loads((tmp_path / "a.csv.json").read_text())
    side_b = json.loads((tmp_path / "b.csv.json").read_text())
    assert side_a == side_b
    assert side_a["columns"] == first.read_text().splitlines()[0].split(",")
    assert side_a["config"]["seed"] == 3


def test_simulate_histogram():
    data = _json(
        CliRunner(),
        [
            "simulate",
            "-N",
            "1",
            "--x",
            "1",
            "--trials",
            "200",
            "--seed",
            "1",
            "--histogram",
            "--json",
        ],
    )
    assert sum(row["count"] for row in data["rows"]) == data["kept"]
    assert all(row["t"] >= 1 for row in data["rows"])


# -- schema and presets -------------------------------------------------------


def test_schema_lists_columns():
    data = _json(CliRunner(), ["simulate", "--schema", "--json"])
    assert set(data) == {"simulate", "simulate-histogram"}
    assert "relative_error" in data["simulate"]


def test_presets_listing():
    data = _json(CliRunner(), ["presets", "--json"])
    ids = {entry["id"] for entry in data}
    assert {"negative-binomial", "hydrodynamics"} <= ids
