"""Tests for run presets and run-configuration validation."""

from fractions import Fraction

import pytest

from tasepkit.core.params import ParameterError
from tasepkit.presets import (
    RunConfig,
    list_preset_ids,
    load_config_file,
    load_preset,
    validate_run_config,
)

PRESET_IDS = [
    "airy-convergence",
    "fredholm-vs-mc",
    "hydrodynamics",
    "negative-binomial",
]


def test_list_preset_ids():
    ids = list_preset_ids()
    for pid in PRESET_IDS:
        assert pid in ids
    assert ids == sorted(ids)


@pytest.mark.parametrize("preset_id", PRESET_IDS)
def test_every_preset_loads(preset_id):
    cfg = load_preset(preset_id)
    assert cfg.id == preset_id
    assert cfg.command is not None
    assert 0 < cfg.p < 1
    assert len(cfg.labels) == len(cfg.thresholds)


def test_negative_binomial_preset():
    cfg = load_preset("negative-binomial")
    assert cfg.p == Fraction(1, 2)
    assert cfg.mode == "float"
    assert cfg.params.mode == "float"
    assert (cfg.n_particles, cfg.x) == (1, 2)
    assert cfg.labels == [1] and cfg.thresholds == [10]


def test_unknown_preset():
    with pytest.raises(KeyError, match="Available"):
        load_preset("no-such-preset")


# -- validation ---------------------------------------------------------------


def test_valid_minimal_config():
    assert validate_run_config({"p": "1/3"}) == []
    assert validate_run_config({"p": 0.25, "mode": "float"}) == []


@pytest.mark.parametrize(
    "data,fragment",
    [
        ({}, "missing required key: 'p'"),
        ({"p": "1/2", "mode": "fast"}, "'mode'"),
        ({"p": "3/2"}, "0 < p < 1"),
        ({"p": "half"}, "Cannot parse"),
        ({"p": "1/2", "command": "plot"}, "'command'"),
        (
            {"p": "1/2", "labels": [1, 2], "thresholds": [4]},
            "differ in length",
        ),
        ({"p": "1/2", "labels": [1], "thresholds": [0]}, "positive"),
        ({"p": "1/2", "points": [[0.0, 0.0, 1.0]]}, "'points'"),
        ({"p": "1/2", "n_particles": 0}, "'n_particles'"),
        ({"p": "1/2", "trials": "many"}, "'trials' must be an integer"),
        ({"p": "1/2", "stab_tol": -1.0}, "'stab_tol' must be positive"),
    ],
)
def test_invalid_configs(data, fragment):
    errors = validate_run_config(data)
    assert any(fragment in e for e in errors), errors


def test_non_mapping_config():
    assert validate_run_config(["p", 0.5]) == ["config must be a mapping/dict"]


# -- RunConfig ----------------------------------------------------------------


def test_from_dict_coerces_types():
    cfg = RunConfig.from_dict(
        {
            "p": 0.3,
            "labels": [1, 3],
            "thresholds": [5, 9],
            "points": [[0, 0, 1, 0]],
            "gamma": 2,
            "unknown": "ignored",
        }
    )
    assert cfg.p == Fraction(3, 10)
    assert cfg.points == [[0.0, 0.0, 1.0, 0.0]]
    assert isinstance(cfg.gamma, float)


def test_to_dict_writes_p_as_fraction():
    data = RunConfig(p=Fraction(2, 3)).to_dict()
    assert data["p"] == "2/3"
    assert data["mode"] == "exact"


def test_merged_ignores_none():
    cfg = RunConfig(p=Fraction(1, 3), seed=7)
    out = cfg.merged({"p": "1/4", "seed": None, "trials": 50})
    assert out.p == Fraction(1, 4)
    assert out.seed == 7
    assert out.trials == 50
    assert cfg.p == Fraction(1, 3)


# -- config files -------------------------------------------------------------


def test_load_config_file(write_config):
    path = write_config(
        {
            "command": "current",
            "p": "2/3",
            "n_particles": 3,
            "x": 1,
            "labels": [2],
            "thresholds": [7],
        }
    )
    cfg = load_config_file(path)
    assert cfg.p == Fraction(2, 3)
    assert cfg.labels == [2]
    assert cfg.id is None


def test_load_config_file_reports_every_error(write_config):
    path = write_config({"p": 2, "mode": "fast"})
    with pytest.raises(ParameterError) as excinfo:
        load_config_file(path)
    message = str(excinfo.value)
    assert "'mode'" in message
    assert "0 < p < 1" in message
