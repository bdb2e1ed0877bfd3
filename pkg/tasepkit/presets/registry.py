"""Discovery and loading of run presets.

Presets live as ``*.yaml`` files under ``tasepkit/data/presets/``. The stem
of each filename is the preset id (e.g. ``hydrodynamics.yaml`` ->
``hydrodynamics``).
"""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path

import yaml

from ..core.params import ParameterError
from .schema import RunConfig, validate_run_config


def _presets_dir() -> Path:
    """Return the directory that holds packaged presets."""
    return Path(str(files("tasepkit"))) / "data" / "presets"


def preset_path(preset_id: str) -> Path:
    """Return the filesystem path for a preset id (may not exist)."""
    return _presets_dir() / f"{preset_id}.yaml"


def list_preset_ids() -> list[str]:
    """Return sorted ids of all available presets."""
    directory = _presets_dir()
    if not directory.exists():
        return []
    return sorted(p.stem for p in directory.glob("*.yaml"))


def _read_yaml(path: Path) -> dict:
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def _parse(data: dict, origin: str) -> RunConfig:
    errors = validate_run_config(data)
    if errors:
        joined = "\n  - ".join(errors)
        raise ParameterError(f"Invalid run config {origin}:\n  - {joined}")
    return RunConfig.from_dict(data)


def load_preset(preset_id: str) -> RunConfig:
    """Load and parse a preset by id.

    Raises:
        KeyError: if no preset with that id exists.
        ParameterError: if the preset fails schema validation.
    """
    path = preset_path(preset_id)
    if not path.exists():
        raise KeyError(
            f"Unknown preset '{preset_id}'. "
            f"Available: {', '.join(list_preset_ids()) or '(none)'}"
        )
    return _parse(_read_yaml(path), f"'{preset_id}'")


def load_config_file(path: Path) -> RunConfig:
    """Load a user run configuration from a YAML file.

    Raises:
        ParameterError: if the file fails schema validation.
    """
    return _parse(_read_yaml(Path(path)), str(path))
