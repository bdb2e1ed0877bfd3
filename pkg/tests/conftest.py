"""Shared fixtures for the tasepkit tests."""

from fractions import Fraction
from pathlib import Path

import pytest
import yaml

from tasepkit.core.params import ModelParams

P_VALUES = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))


@pytest.fixture
def make_params():
    """Return a factory for model parameters.

    Usage::

        params = make_params("1/3")            # exact
        fparams = make_params(0.5, "float")
    """

    def _factory(p="1/2", mode: str = "exact") -> ModelParams:
        return ModelParams(p=p, mode=mode)

    return _factory


@pytest.fixture(params=P_VALUES, ids=lambda p: f"p={p}")
def params(request):
    """Exact parameters for each of the reference hopping probabilities."""
    return ModelParams(p=request.param)


@pytest.fixture
def half():
    return ModelParams(p=Fraction(1, 2))


@pytest.fixture
def write_config(tmp_path):
    """Return a factory that writes a YAML run config and returns its path."""
    counter = {"n": 0}

    def _factory(data: dict) -> Path:
        counter["n"] += 1
        path = tmp_path / f"run{counter['n']}.yaml"
        path.write_text(
            yaml.safe_dump(data, sort_keys=False), encoding="utf-8"
        )
        return path

    return _factory
