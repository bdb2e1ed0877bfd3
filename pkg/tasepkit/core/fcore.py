"""The special functions F_n(x, t) and F~_n(x, t).

Both are defined by contour integrals around the origin whose integrands are
Laurent polynomials (integer t), so every value is a finite coefficient
extraction:

    F~_n(x, t) = [w^(t-x)] (p + q w)^t (1 - w)^(-n)

for any integer t (negative powers are expanded as series around w = 0), and
F_n(x, t) = F~_n(x, t) for t >= 0, 0 for t < 0.

Nothing in here uses quadrature; values are exact Fractions in exact mode.
"""

from __future__ import annotations

import logging
import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .params import ModelParams, ParameterError, Scalar

logger = logging.getLogger(__name__)

DEFAULT_BINOMIAL_CAP = 512


class BinomialTable:
    """Memoized Pascal rows up to ``cap``; larger arguments use math.comb.

    Reads are lock-free once a row exists; growth is serialized.
    """

    def __init__(self, cap: int = DEFAULT_BINOMIAL_CAP):
        self.cap = cap
        self._rows: list[list[int]] = [[1]]
        self._lock = threading.Lock()

    def _grow(self, a: int) -> None:
        with self._lock:
            while len(self._rows) <= a:
                prev = self._rows[-1]
                row = [1]
                row.extend(prev[i] + prev[i + 1] for i in range(len(prev) - 1))
                row.append(1)
                self._rows.append(row)

    def __call__(self, a: int, b: int) -> int:
        if b < 0 or b > a:
            return 0
        if a > self.cap:
            return math.comb(a, b)
        if a >= len(self._rows):
            self._grow(a)
        return self._rows[a][b]


_table = BinomialTable()


def set_binomial_cap(cap: int) -> None:
    """Replace the shared Pascal-row cache with one capped at ``cap``."""
    global _table
    if cap < 0:
        raise ParameterError(f"binomial cap must be >= 0, got {cap}")
    _table = BinomialTable(cap)
    logger.debug(f"binomial cache cap set to {cap}")


def binomial(a: int, b: int) -> int:
    """Generalized binomial coefficient C(a, b) for integer a, b.

    C(a, b) = 0 for b < 0; for a < 0 the falling-factorial convention
    C(a, b) = (-1)^b C(b - a - 1, b) is used.
    """
    if b < 0:
        return 0
    if a >= 0:
        return _table(a, b)
    sign = -1 if b % 2 else 1
    return sign * _table(b - a - 1, b)


def series(
    a: Scalar, b: Scalar, e: int, count: int, params: ModelParams
) -> list[Scalar]:
    """First ``count`` Taylor coefficients of (a + b w)^e around w = 0.

    ``e`` may be negative; ``a`` must be nonzero.
    """
    return list(_series(a, b, e, count, params))


@lru_cache(maxsize=4096)
def _series(
    a: Scalar, b: Scalar, e: int, count: int, params: ModelParams
) -> tuple[Scalar, ...]:
    if count <= 0:
        return ()
    if a == 0:
        raise ParameterError("series expansion needs a nonzero constant term")
    ratio = b / a
    c = a**e if e >= 0 else params.one / a ** (-e)
    out = [c]
    for j in range(count - 1):
        if e >= 0 and j >= e:
            out.extend([params.zero] * (count - 1 - j))
            break
        c = c * params.scalar(Fraction(e - j, j + 1)) * ratio
        out.append(c)
    return tuple(out)


def coefficient(
    factors: Sequence[tuple[Scalar, Scalar, int]],
    power: int,
    params: ModelParams,
) -> Scalar:
    """[w^power] of the product of (a_k + b_k w)^(e_k) over ``factors``."""
    if power < 0:
        return params.zero
    if not factors:
        return params.one if power == 0 else params.zero
    size = power + 1
    expansions = [_series(a, b, e, size, params) for a, b, e in factors]
    acc = expansions[0]
    for nxt in expansions[1:-1]:
        acc = [
            sum((acc[i] * nxt[k - i] for i in range(k + 1)), params.zero)
            for k in range(size)
        ]
    if len(expansions) == 1:
        return acc[power]
    last = expansions[-1]
    return sum((acc[i] * last[power - i] for i in range(size)), params.zero)


@lru_cache(maxsize=1 << 16)
def _f_tilde(n: int, x: int, t: int, params: ModelParams) -> Scalar:
    p, q = params.prob, params.qprob
    return coefficient(
        [(p, q, t), (params.one, -params.one, -n)], t - x, params
    )


def f_tilde(n: int, x: int, t: int, params: ModelParams) -> Scalar:
    """F~_n(x, t) for any integers n, x, t."""
    return _f_tilde(n, x, t, params)


def f_n(n: int, x: int, t: int, params: ModelParams) -> Scalar:
    """F_n(x, t): equals F~_n(x, t) for t >= 0 and vanishes for t < 0.

    Examples:
        F_0(0, 1) = q, F_0(1, 1) = p, F_0(x, 0) = delta_{x,0}.
    """
    if t < 0:
        return params.zero
    return _f_tilde(n, x, t, params)
