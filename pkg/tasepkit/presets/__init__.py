"""Run presets: packaged YAML configurations for the reference experiments.

See :mod:`tasepkit.presets.schema` for the documented schema and
:mod:`tasepkit.presets.registry` for discovery/loading.
"""

from .registry import (
    list_preset_ids,
    load_config_file,
    load_preset,
    preset_path,
)
from .schema import RunConfig, validate_run_config

__all__ = [
    "RunConfig",
    "validate_run_config",
    "list_preset_ids",
    "load_preset",
    "load_config_file",
    "preset_path",
]
