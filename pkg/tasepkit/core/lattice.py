"""Particle and space-time configurations on the integer lattice.

Particle 1 is the rightmost one: coordinates satisfy x_1 > x_2 > ... > x_N.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Sequence

from .params import TasepError


class ConfigurationError(TasepError, ValueError):
    """Raised for malformed or inadmissible configurations."""


@dataclass(frozen=True)
class ParticleConfig:
    """Strictly decreasing particle coordinates (a point of Z^N_>)."""

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(int(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if any(a <= b for a, b in zip(coords, coords[1:])):
            raise ConfigurationError(
                f"coordinates must be strictly decreasing, got {coords}"
            )

    @classmethod
    def of(cls, *coords: int) -> "ParticleConfig":
        return cls(tuple(coords))

    @classmethod
    def step(cls, n: int) -> "ParticleConfig":
        """Step initial condition x_i = 1 - i, i = 1..n."""
        return cls(tuple(1 - i for i in range(1, n + 1)))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coords)

    def __getitem__(self, i: int) -> int:
        return self.coords[i]


@dataclass(frozen=True)
class SpaceTimeConfig:
    """N indexed lattice points (x_i, t_i), not necessarily admissible."""

    points: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pts = tuple((int(x), int(t)) for x, t in self.points)
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, *points: tuple[int, int]) -> "SpaceTimeConfig":
        return cls(tuple(points))

    @classmethod
    def equal_time(cls, coords: Iterable[int], t: int) -> "SpaceTimeConfig":
        return cls(tuple((x, t) for x in coords))

    @property
    def xs(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.points)

    @property
    def ts(self) -> tuple[int, ...]:
        return tuple(t for _, t in self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.points)

    def __getitem__(self, i: int) -> tuple[int, int]:
        return self.points[i]

    def to_dict(self) -> dict[str, Any]:
        return {"points": [list(pt) for pt in self.points]}


def is_admissible(config: SpaceTimeConfig | Sequence[tuple[int, int]]) -> bool:
    """True iff x strictly decreases and t weakly increases along the index."""
    pts = list(config)
    for (x1, t1), (x2, t2) in zip(pts, pts[1:]):
        if x1 <= x2 or t1 > t2:
            return False
    return True


def require_same_size(a: Sequence[Any], b: Sequence[Any]) -> int:
    if len(a) != len(b):
        raise ConfigurationError(
            f"dimension mismatch: {len(a)} vs {len(b)} particles"
        )
    return len(a)
