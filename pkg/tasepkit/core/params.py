"""Model parameters and the scalar arithmetic shared by every module.

Two arithmetic modes are supported. ``exact`` carries every probability as a
:class:`fractions.Fraction`; ``float`` carries IEEE doubles. All public
functions take a :class:`ModelParams` and return scalars in its mode.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, float]

VALID_MODES = {"exact", "float"}


class TasepError(Exception):
    """Base class for all tasepkit errors."""


class ParameterError(TasepError, ValueError):
    """Raised when model or run parameters are out of range."""


class ConvergenceError(TasepError):
    """Raised when a truncation or quadrature fails to stabilise."""

    def __init__(self, errors: list[str] | str):
        self.errors = [errors] if isinstance(errors, str) else list(errors)
        super().__init__("; ".join(self.errors))


def parse_probability(value: Any) -> Fraction:
    """Parse ``value`` (Fraction, int, float or ``"a/b"`` string) exactly.

    Floats are converted through their shortest decimal repr so that
    ``0.3`` becomes ``3/10`` rather than the binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParameterError(f"p must be a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"Cannot parse p={value!r}: {exc}")
    raise ParameterError(f"p must be a number, got {type(value).__name__}")


@dataclass(frozen=True)
class ModelParams:
    """Hopping probability and arithmetic mode.

    ``p`` is always stored exactly; :attr:`prob` returns it in the active
    mode. The deterministic limits p=0 and p=1 are excluded.
    """

    p: Fraction
    mode: str = "exact"

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", parse_probability(self.p))
        if self.mode not in VALID_MODES:
            raise ParameterError(
                f"mode must be one of {sorted(VALID_MODES)}, got {self.mode!r}"
            )
        if not 0 < self.p < 1:
            raise ParameterError(f"p must satisfy 0 < p < 1, got {self.p}")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def prob(self) -> Scalar:
        """Hopping probability p in the active mode."""
        return self.scalar(self.p)

    @property
    def qprob(self) -> Scalar:
        """Staying probability q = 1 - p in the active mode."""
        return self.scalar(1 - self.p)

    @property
    def q(self) -> Fraction:
        return 1 - self.p

    def scalar(self, value: Union[int, Fraction, float]) -> Scalar:
        """Convert ``value`` to the active arithmetic mode."""
        if self.exact:
            if isinstance(value, float):
                raise ParameterError(
                    "float value passed to an exact-mode computation"
                )
            return Fraction(value)
        return float(value)

    @property
    def zero(self) -> Scalar:
        return self.scalar(0)

    @property
    def one(self) -> Scalar:
        return self.scalar(1)

    def as_float(self) -> "ModelParams":
        """Return a copy of these parameters in float mode."""
        return ModelParams(p=self.p, mode="float")

    def as_exact(self) -> "ModelParams":
        return ModelParams(p=self.p, mode="exact")

    def to_dict(self) -> dict[str, Any]:
        p = f"{self.p.numerator}/{self.p.denominator}"
        return {"p": p, "mode": self.mode}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ModelParams":
        if "p" not in data:
            raise ParameterError("missing required key 'p'")
        return cls(p=data["p"], mode=data.get("mode", "exact"))
