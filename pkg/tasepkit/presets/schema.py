"""Schema for run configurations and packaged presets.

A run configuration YAML is parsed into a :class:`RunConfig`. The
:func:`validate_run_config` function checks a raw dict against the schema
and returns a list of human-readable error strings (empty list == valid).
Presets and ``--config`` files go through the same path.

Schema (top-level keys)
-----------------------
``id`` (str, presets only)
    Preset identifier, matches the YAML filename stem.
``description`` (str, optional)
    One line on what the run reproduces.
``command`` (str, optional)
    Subcommand the preset targets: ``green`` | ``ggf`` | ``boundary`` |
    ``current`` | ``simulate`` | ``airy``.
``p`` (number or ``"a/b"`` string, required)
    Hopping probability, 0 < p < 1.
``mode`` (``exact`` | ``float``)
    Arithmetic mode, default ``exact``.
``n_particles``, ``x``, ``t``, ``t_cap`` (int, optional)
    Particle number, boundary site, time, Monte Carlo time cap.
``labels``, ``thresholds`` (list of int, optional)
    Particle labels n_1 < ... < n_m and jump-off thresholds a_1..a_m.
``trials``, ``seed``, ``threads`` (int)
    Monte Carlo size, seed and worker count.
``gamma`` (number)
    Ratio (x + N) / L for the scaling and hydrodynamics runs.
``scales`` (list of int), ``points`` (list of [u1, s1, u2, s2])
    Scale parameters L and rescaled kernel arguments for ``airy``.
``tail_tol``, ``stab_tol`` (number), ``binomial_cap`` (int)
    Numerical tolerances and the exact binomial cache size.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction
from typing import Any, Optional

from ..core.params import ModelParams, ParameterError, parse_probability

VALID_COMMANDS = {"green", "ggf", "boundary", "current", "simulate", "airy"}
VALID_MODES = {"exact", "float"}

_INT_KEYS = ("n_particles", "x", "t", "t_cap", "trials", "seed", "threads")
_FLOAT_KEYS = ("gamma", "tail_tol", "stab_tol")


@dataclass
class RunConfig:
    """Resolved parameters of one CLI run."""

    id: Optional[str] = None
    description: Optional[str] = None
    command: Optional[str] = None
    p: Fraction = Fraction(1, 2)
    mode: str = "exact"
    n_particles: Optional[int] = None
    x: Optional[int] = None
    t: Optional[int] = None
    t_cap: Optional[int] = None
    labels: list[int] = field(default_factory=list)
    thresholds: list[int] = field(default_factory=list)
    trials: int = 10_000
    seed: int = 0
    threads: int = 1
    gamma: float = 1.0
    scales: list[int] = field(default_factory=list)
    points: list[list[float]] = field(default_factory=list)
    tail_tol: float = 1e-12
    stab_tol: float = 1e-8
    binomial_cap: int = 512

    @property
    def params(self) -> ModelParams:
        return ModelParams(p=self.p, mode=self.mode)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        """Build a :class:`RunConfig` from a raw YAML dict.

        Assumes the dict has already passed :func:`validate_run_config`.
        Unknown keys are ignored.
        """
        known = {f.name for f in fields(cls)}
        kwargs = {k: v for k, v in data.items() if k in known}
        if "p" in kwargs:
            kwargs["p"] = parse_probability(kwargs["p"])
        for key in ("labels", "thresholds", "scales"):
            if key in kwargs:
                kwargs[key] = [int(v) for v in kwargs[key] or []]
        if "points" in kwargs:
            kwargs["points"] = [
                [float(v) for v in pt] for pt in kwargs["points"] or []
            ]
        for key in _FLOAT_KEYS:
            if kwargs.get(key) is not None:
                kwargs[key] = float(kwargs[key])
        return cls(**kwargs)

    def merged(self, overrides: dict[str, Any]) -> "RunConfig":
        """Copy with every non-None override applied."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        if "p" in changes:
            changes["p"] = parse_probability(changes["p"])
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["p"] = f"{self.p.numerator}/{self.p.denominator}"
        return data


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def validate_run_config(data: Any) -> list[str]:
    """Validate a raw run-configuration dict against the schema.

    Returns a list of error strings. An empty list means it is valid.
    """
    errors: list[str] = []

    if not isinstance(data, dict):
        return ["config must be a mapping/dict"]

    if "p" not in data:
        errors.append("missing required key: 'p'")
    else:
        try:
            p = parse_probability(data["p"])
        except ParameterError as exc:
            errors.append(str(exc))
        else:
            if not 0 < p < 1:
                errors.append(f"'p' must satisfy 0 < p < 1, got {p}")

    if data.get("mode", "exact") not in VALID_MODES:
        errors.append(
            f"'mode' must be one of {sorted(VALID_MODES)}, "
            f"got {data.get('mode')!r}"
        )
    command = data.get("command")
    if command is not None and command not in VALID_COMMANDS:
        errors.append(
            f"'command' must be one of {sorted(VALID_COMMANDS)}, "
            f"got {command!r}"
        )

    for key in _INT_KEYS + ("binomial_cap",):
        if data.get(key) is not None and not _is_int(data[key]):
            errors.append(f"'{key}' must be an integer")
    for key in _FLOAT_KEYS:
        if data.get(key) is not None and not _is_number(data[key]):
            errors.append(f"'{key}' must be a number")
    for key in ("tail_tol", "stab_tol"):
        value = data.get(key)
        if _is_number(value) and value <= 0:
            errors.append(f"'{key}' must be positive")

    n = data.get("n_particles")
    if _is_int(n) and n < 1:
        errors.append(f"'n_particles' must be >= 1, got {n}")
    for key in ("trials", "threads", "t_cap"):
        value = data.get(key)
        if _is_int(value) and value < 1:
            errors.append(f"'{key}' must be >= 1, got {value}")

    for key in ("labels", "thresholds", "scales"):
        value = data.get(key)
        if value is None:
            continue
        if not isinstance(value, list) or not all(_is_int(v) for v in value):
            errors.append(f"'{key}' must be a list of integers")
    labels = data.get("labels") or []
    thresholds = data.get("thresholds") or []
    if isinstance(labels, list) and isinstance(thresholds, list):
        if len(labels) != len(thresholds):
            errors.append("'labels' and 'thresholds' differ in length")
        if any(_is_int(a) and a <= 0 for a in thresholds):
            errors.append("'thresholds' must be positive")

    points = data.get("points")
    if points is not None:
        ok = isinstance(points, list) and all(
            isinstance(pt, list)
            and len(pt) == 4
            and all(_is_number(v) for v in pt)
            for pt in points
        )
        if not ok:
            errors.append("'points' must be a list of [u1, s1, u2, s2]")

    return errors
