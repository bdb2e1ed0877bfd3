"""KPZ scaling of the correlation kernel near the Airy_2 limit.

With scale L, particle labels n = floor(L + u L^{2/3}) and times
tau = floor(L omega(1 + u L^{-1/3}) + L^{1/3} s), the conjugated kernel
L^{1/3} K~ approaches kappa_t K_Airy2(kappa_h u, kappa_t s; ...). The
saddle functions are

    f_nu(w) = omega(nu) g(w) + nu h(w) + gamma ln w,
    g(w) = ln(q + p/w),  h(w) = ln(1 - 1/w),

with a double critical point at w_0 = 1 + sqrt(nu / (q gamma)).
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..core.params import ConvergenceError, ModelParams, ParameterError
from ..kernel.detprocess import KernelIndex, kernel
from .airy import airy2_kernel
from .hydro import omega_nu

logger = logging.getLogger(__name__)

TW_GUE_MEAN = -1.7710868074
CRITICAL_TOL = 1e-10


@dataclass(frozen=True)
class ScalingContext:
    """Scaling parameters; nu = 1 unless testing nu-independence."""

    params: ModelParams
    gamma: float = 1.0
    nu: float = 1.0

    def __post_init__(self) -> None:
        if self.gamma <= 0 or self.nu <= 0:
            raise ParameterError("gamma and nu must be positive")

    @property
    def p(self) -> float:
        return float(self.params.p)

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def omega(self) -> float:
        return omega_nu(self.nu, self.gamma, self.params)

    @property
    def w0(self) -> float:
        return 1.0 + math.sqrt(self.nu / (self.q * self.gamma))

    @property
    def w0_prime(self) -> float:
        """d w_0 / d nu."""
        return 1.0 / (2.0 * math.sqrt(self.nu * self.q * self.gamma))

    # saddle functions and their derivatives ----------------------------

    def g(self, w: float) -> float:
        return math.log(self.q + self.p / w)

    def h(self, w: float) -> float:
        return math.log(1.0 - 1.0 / w)

    def f(self, w: float) -> float:
        """Saddle function f_nu on the real axis, w > 1."""
        return (
            self.omega * self.g(w)
            + self.nu * self.h(w)
            + self.gamma * math.log(w)
        )

    def g_derivative(self, w: float, order: int) -> float:
        p, q = self.p, self.q
        c = q * w + p
        if order == 1:
            return -1.0 / w + q / c
        if order == 2:
            return 1.0 / w**2 - q**2 / c**2
        if order == 3:
            return -2.0 / w**3 + 2.0 * q**3 / c**3
        raise ValueError(order)

    def h_derivative(self, w: float, order: int) -> float:
        if order == 1:
            return 1.0 / (w - 1.0) - 1.0 / w
        if order == 2:
            return -1.0 / (w - 1.0) ** 2 + 1.0 / w**2
        if order == 3:
            return 2.0 / (w - 1.0) ** 3 - 2.0 / w**3
        raise ValueError(order)

    def f_derivative(self, w: float, order: int) -> float:
        log_w = {1: 1.0 / w, 2: -1.0 / w**2, 3: 2.0 / w**3}[order]
        return (
            self.omega * self.g_derivative(w, order)
            + self.nu * self.h_derivative(w, order)
            + self.gamma * log_w
        )

    # scaling constants ------------------------------------------------------

    @property
    def kappa_h(self) -> float:
        """w_0'(nu) f'''(w_0)^{1/3} / 2^{1/3}."""
        root = self.f_derivative(self.w0, 3) ** (1 / 3)
        return self.w0_prime * root / 2 ** (1 / 3)

    @property
    def kappa_t(self) -> float:
        """-2^{1/3} g'(w_0) / f'''(w_0)^{1/3}."""
        root = self.f_derivative(self.w0, 3) ** (1 / 3)
        return -(2 ** (1 / 3)) * self.g_derivative(self.w0, 1) / root

    def kappa_h_closed(self) -> float:
        p, q, g, nu = self.p, self.q, self.gamma, self.nu
        return (nu ** (-2 / 3) * q ** (1 / 6) * g ** (1 / 3)) / (
            2
            * (math.sqrt(nu) + math.sqrt(g * q)) ** (1 / 3)
            * (math.sqrt(g) + math.sqrt(nu * q)) ** (1 / 3)
        )

    def kappa_t_closed(self) -> float:
        p, q, g, nu = self.p, self.q, self.gamma, self.nu
        return (p * nu ** (1 / 6) * q ** (-1 / 6) * g ** (1 / 6)) / (
            (math.sqrt(nu) + math.sqrt(g * q)) ** (2 / 3)
            * (math.sqrt(g) + math.sqrt(nu * q)) ** (2 / 3)
        )

    def with_nu(self, nu: float) -> "ScalingContext":
        return ScalingContext(self.params, self.gamma, nu)


def scaling_constants(ctx: ScalingContext) -> tuple[float, float, float]:
    """(w_0, kappa_h, kappa_t) after checking f'(w_0) = f''(w_0) = 0.

    Raises:
        ConvergenceError: if w_0 is not a double critical point.
    """
    w0 = ctx.w0
    residuals = [abs(ctx.f_derivative(w0, k)) for k in (1, 2)]
    if max(residuals) > CRITICAL_TOL:
        raise ConvergenceError(
            f"w_0={w0} is not a double critical point: {residuals}"
        )
    return w0, ctx.kappa_h, ctx.kappa_t


@dataclass(frozen=True)
class ScaledPoint:
    """Lattice point (n, tau) of a rescaled (u, s) pair at scale L."""

    n: int
    tau: int
    u_eff: float
    s_eff: float


def scaled_point(
    L: int, u: float, s: float, ctx: ScalingContext
) -> ScaledPoint:
    """Floor the scaled label and time; report the effective (u, s)."""
    n = math.floor(L + u * L ** (2 / 3))
    nu_i = 1.0 + u * L ** (-1 / 3)
    tau = math.floor(
        L * omega_nu(nu_i, ctx.gamma, ctx.params) + L ** (1 / 3) * s
    )
    u_eff = (n - L) / L ** (2 / 3)
    s_eff = (tau - L * omega_nu(n / L, ctx.gamma, ctx.params)) / L ** (1 / 3)
    return ScaledPoint(n, tau, u_eff, s_eff)


def _exponent(
    pt: ScaledPoint, big_x: int, L: int, ctx: ScalingContext
) -> float:
    """tau g(w_i) + n h(w_i) + X ln w_i at w_i = w_0(n / L)."""
    w = ctx.with_nu(pt.n / L).w0
    return pt.tau * ctx.g(w) + pt.n * ctx.h(w) + big_x * math.log(w)


def _log_abs(value: Fraction) -> tuple[int, float]:
    if value == 0:
        return 0, -math.inf
    sign = 1 if value > 0 else -1
    return sign, math.log(abs(value.numerator)) - math.log(value.denominator)


def rescaled_kernel(
    L: int,
    u1: float,
    s1: float,
    u2: float,
    s2: float,
    ctx: ScalingContext,
) -> tuple[float, float]:
    """L^{1/3} times the conjugated kernel and its Airy_2 limit.

    The kernel is evaluated exactly and the conjugation is applied on
    the log scale. The limit is evaluated at the effective (u, s) of the
    floored lattice points.
    """
    exact = ctx.params.as_exact()
    a = scaled_point(L, u1, s1, ctx)
    b = scaled_point(L, u2, s2, ctx)
    big_x = math.floor(ctx.gamma * L)
    big_n = max(a.n, b.n)
    x = big_x - big_n
    value = kernel(
        KernelIndex(a.n, a.tau), KernelIndex(b.n, b.tau), x, big_n, exact
    )
    sign, log_abs = _log_abs(value)
    shift = _exponent(a, big_x, L, ctx) - _exponent(b, big_x, L, ctx)
    scaled = 0.0
    if sign != 0:
        scaled = sign * math.exp(log_abs - shift + math.log(L) / 3)
    limit = ctx.kappa_t * airy2_kernel(
        ctx.kappa_h * a.u_eff,
        ctx.kappa_t * a.s_eff,
        ctx.kappa_h * b.u_eff,
        ctx.kappa_t * b.s_eff,
    )
    return scaled, limit


@dataclass
class ConvergenceRow:
    L: int
    u1: float
    s1: float
    u2: float
    s2: float
    value: float
    limit: float

    @property
    def deviation(self) -> float:
        return abs(self.value - self.limit)

    def to_dict(self) -> dict[str, float]:
        return {
            "L": self.L,
            "u1": self.u1,
            "s1": self.s1,
            "u2": self.u2,
            "s2": self.s2,
            "value": self.value,
            "limit": self.limit,
            "deviation": self.deviation,
        }


def convergence_table(
    points: Sequence[tuple[float, float, float, float]],
    scales: Sequence[int],
    ctx: ScalingContext,
    threads: int = 1,
) -> list[ConvergenceRow]:
    """Rescaled kernel against its limit for every point and scale."""
    jobs = [(L, pt) for pt in points for L in scales]

    def run(
        job: tuple[int, tuple[float, float, float, float]],
    ) -> ConvergenceRow:
        L, (u1, s1, u2, s2) = job
        value, limit = rescaled_kernel(L, u1, s1, u2, s2, ctx)
        logger.debug(f"L={L} ({u1},{s1};{u2},{s2}): {value} vs {limit}")
        return ConvergenceRow(L, u1, s1, u2, s2, value, limit)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, jobs))
    return [run(job) for job in jobs]


def mean_jump_off_estimate(
    nu: float,
    gamma: float,
    L: int,
    params: ModelParams,
    tw_mean: Optional[float] = TW_GUE_MEAN,
) -> float:
    """Expected t_n / L for n = nu L including the Tracy-Widom mean shift.

    t_n is approximately L omega(nu) + L^{1/3} chi / kappa_t(nu) with chi
    GUE Tracy-Widom distributed; ``tw_mean=None`` drops the correction.
    """
    base = omega_nu(nu, gamma, params)
    if tw_mean is None:
        return base
    ctx = ScalingContext(params, gamma, nu)
    return base + L ** (-2 / 3) * tw_mean / ctx.kappa_t_closed()
