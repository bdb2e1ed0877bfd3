"""The signed determinantal process on auxiliary time variables.

An auxiliary configuration T has N levels; level n holds n integer times
tau^n_n < ... < tau^n_1, all at least the window floor x. Its weight is

    prod_{n=0}^{N-1} det[phi(tau^n_i, tau^{n+1}_j)] * det[Psi_i(tau^N_{N-j})]

where row n+1 of the n-th phi block belongs to a reservoir variable that
is below every time (so its entries are all p). With this convention the
normalisation constant is one: pinning tau^k_1 = t_k and summing the rest
out gives p^N times the generalized Green function of the jump-off
configuration ((x+N-1, t_1), ..., (x, t_N)) from the step initial
condition.

Psi_k and Phi_j do not depend on the level n, only on X = x + N. Both are
computed exactly by residues; a numerical contour route exists to check
the integral representations.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from ..core.fcore import binomial, coefficient, f_tilde
from ..core.green import ggf_det
from ..core.lattice import ConfigurationError, SpaceTimeConfig
from ..core.linalg import det
from ..core.params import ConvergenceError, ModelParams, Scalar
from .contour import (
    inner_circle,
    integrate,
    integrate_double,
    outer_circle,
)

logger = logging.getLogger(__name__)

RESERVOIR = None
ROUTES_PSI = {"exact", "contour"}
ROUTES_KERNEL = {"sum", "contour"}
DEFAULT_TAIL_TOL = 1e-12
MAX_TERMS = 200_000


# -- building blocks ---------------------------------------------------


def phi(z: Optional[int], y: int, params: ModelParams) -> Scalar:
    """phi(z, y) = p if y >= z else 0; ``z=None`` is the reservoir."""
    if z is RESERVOIR or y >= z:
        return params.prob
    return params.zero


def phi_conv(
    n1: int, n2: int, tau1: int, tau2: int, params: ModelParams
) -> Scalar:
    """(n2 - n1)-fold convolution of phi, zero unless n2 > n1."""
    delta = n2 - n1
    if delta <= 0 or tau2 < tau1:
        return params.zero
    return params.prob**delta * binomial(tau2 - tau1 + delta - 1, delta - 1)


def phi_conv_residue(
    n1: int, n2: int, tau1: int, tau2: int, params: ModelParams
) -> Scalar:
    """phi_conv from the residues at z = 0 and z = 1 of its contour form."""
    delta = n2 - n1
    if delta <= 0:
        return params.zero
    p, q, one = params.prob, params.qprob, params.one
    e = tau1 - tau2 - 1
    at_zero = coefficient(
        [(-one, one, -delta), (p, q, e)], e + 1 - delta, params
    )
    at_one = coefficient(
        [(one, one, delta - 2 - e), (one, q, e)], delta - 1, params
    )
    return p * (at_zero + at_one)


def psi_residues(
    k: int, tau: int, big_x: int, params: ModelParams
) -> tuple[Scalar, Scalar]:
    """Residues of the Psi_k integrand at w = 0 and w = 1."""
    p, q, one = params.prob, params.qprob, params.one
    m = big_x - k - 2
    at_zero = coefficient([(p, q, tau), (-one, one, k)], tau - m - 1, params)
    if k >= 0:
        return at_zero, params.zero
    at_one = coefficient([(one, q, tau), (one, one, m - tau)], -k - 1, params)
    return at_zero, at_one


@lru_cache(maxsize=1 << 16)
def _psi_exact(k: int, tau: int, big_x: int, params: ModelParams) -> Scalar:
    if tau >= 0:
        # residue at infinity: every term is positive when k < 0
        return coefficient(
            [(params.qprob, params.prob, tau), (params.one, -params.one, k)],
            big_x - 1,
            params,
        )
    at_zero, at_one = psi_residues(k, tau, big_x, params)
    return at_zero + at_one


def _psi_contour(k: int, tau: int, big_x: int, params: ModelParams) -> float:
    p = float(params.p)
    q = 1.0 - p

    def integrand(w: np.ndarray) -> np.ndarray:
        return (q + p / w) ** tau * (w - 1.0) ** k * w ** (big_x - k - 2)

    return integrate(integrand, outer_circle(p)).real


def _check_level(n: int, big_n: int) -> None:
    if not 0 <= n <= big_n:
        raise ConfigurationError(f"level n={n} outside 0..{big_n}")


def psi(
    n: int,
    k: int,
    tau: int,
    x: int,
    big_n: int,
    params: ModelParams,
    route: str = "exact",
) -> Scalar:
    """Psi^n_k(tau) for the boundary at x with N particles.

    The ``contour`` route always returns a float.

    Raises:
        ConvergenceError: if the contour quadrature does not settle.
    """
    _check_level(n, big_n)
    if route not in ROUTES_PSI:
        raise ConfigurationError(f"unknown psi route {route!r}")
    if route == "contour":
        return _psi_contour(k, tau, x + big_n, params)
    return _psi_exact(k, tau, x + big_n, params)


@lru_cache(maxsize=1 << 16)
def _phi_cap(j: int, tau: int, big_x: int, params: ModelParams) -> Scalar:
    if j < 0:
        return params.zero
    one = params.one
    value = coefficient(
        [(one, params.qprob, -tau - 1), (one, one, tau + j - big_x)], j, params
    )
    return params.prob * value


def phi_cap(
    n: int, j: int, tau: int, x: int, big_n: int, params: ModelParams
) -> Scalar:
    """Phi^n_j(tau): degree-j polynomial in tau, dual to Psi^n_j.

    Phi^n_0 = p and Phi^n_j = 0 for j < 0.
    """
    _check_level(n, big_n)
    if j >= n:
        raise ConfigurationError(f"Phi^{n}_{j} needs j < n")
    return _phi_cap(j, tau, x + big_n, params)


def orthogonality_sum(
    i: int,
    j: int,
    n: int,
    x: int,
    big_n: int,
    params: ModelParams,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> float:
    """Sum over tau >= x of Phi^n_i(tau) Psi^n_j(tau); equals delta_ij.

    Summed in floating point. Terms decay like q^tau times a polynomial,
    so the tail is bounded by a geometric series once the observed ratio
    of consecutive terms settles below one.

    Raises:
        ConvergenceError: if the tail does not drop below ``tail_tol``.
    """
    fparams = params.as_float()
    # terms grow before they decay; never stop inside the bulk
    warmup = x + int(4 * (abs(x) + big_n + n + 1) / float(params.p))
    total = 0.0
    prev = None
    settled = 0
    for tau in range(x, x + MAX_TERMS):
        term = float(phi_cap(n, i, tau, x, big_n, fparams)) * float(
            psi(n, j, tau, x, big_n, fparams)
        )
        total += term
        if prev and tau > warmup:
            ratio = abs(term / prev)
            if ratio < 1.0 and abs(term) * ratio / (1.0 - ratio) < tail_tol:
                settled += 1
                if settled >= 3:
                    return total
            else:
                settled = 0
        prev = term if term != 0 else prev
    raise ConvergenceError(
        f"orthogonality sum ({i},{j}) did not converge in {MAX_TERMS} terms"
    )


# -- auxiliary configurations -------------------------------------------


@dataclass(frozen=True)
class AuxConfig:
    """Levels (tau^n_1, ..., tau^n_n) for n = 1..N, decreasing in i."""

    levels: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        levels = tuple(tuple(int(t) for t in lvl) for lvl in self.levels)
        object.__setattr__(self, "levels", levels)
        for n, lvl in enumerate(levels, start=1):
            if len(lvl) != n:
                raise ConfigurationError(
                    f"level {n} must hold {n} times, got {len(lvl)}"
                )
            if any(a <= b for a, b in zip(lvl, lvl[1:])):
                raise ConfigurationError(
                    f"level {n} times must be strictly ordered, got {lvl}"
                )

    @property
    def size(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> tuple[int, ...]:
        """Level n (1-based); level 0 is empty."""
        return self.levels[n - 1] if n >= 1 else ()

    def floor(self) -> int:
        return min(t for lvl in self.levels for t in lvl)

    def contains(self, n: int, tau: int) -> bool:
        return tau in self.level(n)

    def in_domain(self) -> bool:
        """Interlacing tau^{n+1}_{i+1} < tau^n_i <= tau^{n+1}_i everywhere."""
        return all(
            interlaces(self.level(n), self.level(n + 1))
            for n in range(1, self.size)
        )


def interlaces(upper: Sequence[int], lower: Sequence[int]) -> bool:
    """Horizontal-strip condition between levels n and n + 1."""
    if len(lower) != len(upper) + 1:
        return False
    return all(
        lower[i + 1] < upper[i] <= lower[i] for i in range(len(upper))
    )


def jacobi_trudi_det(
    upper: Sequence[int], lower: Sequence[int], params: ModelParams
) -> Scalar:
    """det[phi(tau^n_i, tau^{n+1}_j)] with the reservoir as last row."""
    size = len(lower)
    if len(upper) != size - 1:
        raise ConfigurationError("levels must differ in size by one")
    rows: list[Optional[int]] = list(upper) + [RESERVOIR]
    matrix = [[phi(z, y, params) for y in lower] for z in rows]
    return det(matrix, params)


def measure_weight(
    config: AuxConfig, x: int, big_n: int, params: ModelParams
) -> Scalar:
    """Weight of an auxiliary configuration (normalisation constant one)."""
    if config.size != big_n:
        raise ConfigurationError(
            f"configuration has {config.size} levels, expected {big_n}"
        )
    if config.floor() < x:
        raise ConfigurationError(f"times below the window floor {x}")
    weight = params.one
    for n in range(big_n):
        block = jacobi_trudi_det(config.level(n), config.level(n + 1), params)
        if block == 0:
            return params.zero
        weight *= block
    top = config.level(big_n)
    matrix = [
        [_psi_n(i, top[big_n - 1 - j], x, big_n, params) for j in range(big_n)]
        for i in range(big_n)
    ]
    return weight * det(matrix, params)


def _psi_n(
    k: int, tau: int, x: int, big_n: int, params: ModelParams
) -> Scalar:
    """Psi^N_k(t) = (-1)^k F~_{-k}(x + N - k - 1, t)."""
    value = f_tilde(-k, x + big_n - k - 1, tau, params)
    return -value if k % 2 else value


def iter_aux_configs(
    pinned: Sequence[int], x: int
) -> Iterator[AuxConfig]:
    """All configurations with tau^n_1 = pinned[n-1] and floor x.

    Within a level every time lies below the pinned one, so the set is
    finite.
    """
    per_level = []
    for n, top in enumerate(pinned, start=1):
        rests = [
            (top,) + tuple(sorted(rest, reverse=True))
            for rest in itertools.combinations(range(x, top), n - 1)
        ]
        per_level.append(rests)
    for levels in itertools.product(*per_level):
        yield AuxConfig(tuple(levels))


def jump_off_config(
    times: Sequence[int], x: int
) -> tuple[SpaceTimeConfig, SpaceTimeConfig]:
    """Final and step-initial configurations for jump-off times t_1..t_N."""
    big_n = len(times)
    final = SpaceTimeConfig(
        tuple((x + big_n - i, t) for i, t in enumerate(times, start=1))
    )
    initial = SpaceTimeConfig(tuple((1 - i, 0) for i in range(1, big_n + 1)))
    return final, initial


def sasamoto_sum(
    times: Sequence[int], x: int, params: ModelParams
) -> Scalar:
    """(-p)^{N(N-1)/2} sum over the interlacing domain of det[F~ ...].

    Equals the generalized Green function of :func:`jump_off_config`.
    """
    big_n = len(times)
    total = params.zero
    for config in iter_aux_configs(times, x):
        if not config.in_domain():
            continue
        top = config.level(big_n)
        matrix = [
            [
                f_tilde(-big_n + 1 + i, x + i, top[j], params)
                for j in range(big_n)
            ]
            for i in range(big_n)
        ]
        total += det(matrix, params)
    sign = -1 if (big_n * (big_n - 1) // 2) % 2 else 1
    return sign * params.prob ** (big_n * (big_n - 1) // 2) * total


def normalization_constant(
    big_n: int, x: int, params: ModelParams, max_time: int
) -> Scalar:
    """Z_N such that the pinned marginal equals p^N times the GGF.

    Every weakly increasing t with max(x, 1) <= t_1 and t_N <= max_time
    and a nonzero GGF is checked.

    Raises:
        ConvergenceError: if the ratio depends on the configuration.
    """
    exact = params.as_exact()
    ratios = set()
    start = max(x, 1)
    for times in itertools.combinations_with_replacement(
        range(start, max_time + 1), big_n
    ):
        final, initial = jump_off_config(times, x)
        green = ggf_det(final, initial, exact, strict=False)
        if green == 0:
            continue
        weights = (
            measure_weight(c, x, big_n, exact)
            for c in iter_aux_configs(times, x)
        )
        marginal = sum(weights, exact.zero)
        ratios.add(marginal / (exact.prob**big_n * green))
    if len(ratios) != 1:
        raise ConvergenceError(
            f"normalisation ratio is not constant: {sorted(ratios)}"
        )
    value = ratios.pop()
    logger.info(f"Z_{big_n} = {value} at x={x}")
    return 1 / value


# -- kernel -----------------------------------------------------------------


@dataclass(frozen=True)
class KernelIndex:
    """Index (particle label n, time tau) of the correlation kernel."""

    n: int
    tau: int


def _check_index(idx: KernelIndex, x: int, big_n: int) -> None:
    if not 1 <= idx.n <= big_n:
        raise ConfigurationError(f"label n={idx.n} outside 1..{big_n}")
    if idx.tau < x:
        raise ConfigurationError(f"time {idx.tau} below the floor {x}")


def _kernel_sum(
    n1: int, tau1: int, n2: int, tau2: int, big_x: int, params: ModelParams
) -> Scalar:
    total = -phi_conv(n1, n2, tau1, tau2, params)
    for k in range(1, n2 + 1):
        total += _psi_exact(n1 - k, tau1, big_x, params) * _phi_cap(
            n2 - k, tau2, big_x, params
        )
    return total


def _kernel_contour(
    n1: int, tau1: int, n2: int, tau2: int, big_x: int, params: ModelParams
) -> float:
    p = float(params.p)
    q = 1.0 - p

    def double(v: np.ndarray, w: np.ndarray) -> np.ndarray:
        num = (q + p / w) ** tau1 * ((w - 1.0) / w) ** n1 * (w / v) ** big_x
        den = (q + p / v) ** (tau2 + 1) * ((v - 1.0) / v) ** n2 * (w - v)
        return num / (den * v * w)

    value = p * integrate_double(double, outer_circle(p), inner_circle(p))
    if n2 > n1:

        def single(z: np.ndarray) -> np.ndarray:
            return (
                ((z - 1.0) / z) ** (n1 - n2)
                * (q + p / z) ** (tau1 - tau2 - 1)
                / z**2
            )

        value -= p * integrate(single, outer_circle(p))
    return value.real


def kernel(
    a: KernelIndex,
    b: KernelIndex,
    x: int,
    big_n: int,
    params: ModelParams,
    route: str = "sum",
) -> Scalar:
    """Correlation kernel K(n1, tau1; n2, tau2).

    The ``sum`` route combines exact Psi and Phi; ``contour`` integrates the
    double contour representation numerically and returns a float.

    Raises:
        ConvergenceError: if the contour route does not reach 1e-8.
    """
    _check_index(a, x, big_n)
    _check_index(b, x, big_n)
    if route not in ROUTES_KERNEL:
        raise ConfigurationError(f"unknown kernel route {route!r}")
    if route == "contour":
        return _kernel_contour(a.n, a.tau, b.n, b.tau, x + big_n, params)
    return _kernel_sum(a.n, a.tau, b.n, b.tau, x + big_n, params)
