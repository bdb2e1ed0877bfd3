"""Airy function, the extended Airy_2 kernel and Johansson's Gaussian form."""

from __future__ import annotations

import logging
import math

from scipy import integrate, special

from ..core.params import ConvergenceError, ParameterError

logger = logging.getLogger(__name__)

AI_C1 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
AI_C2 = 1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))
SERIES_RADIUS = 6.0
SUPPORTED = 20.0
QUAD_TOL = 1e-8


def _airy_series(z: float) -> float:
    z3 = z**3
    f_term, g_term = 1.0, z
    f_sum, g_sum = f_term, g_term
    k = 0
    while True:
        f_term *= z3 / ((3 * k + 2) * (3 * k + 3))
        g_term *= z3 / ((3 * k + 3) * (3 * k + 4))
        f_sum += f_term
        g_sum += g_term
        k += 1
        if abs(f_term) + abs(g_term) < 1e-18 * (abs(f_sum) + abs(g_sum)):
            break
    return AI_C1 * f_sum - AI_C2 * g_sum


def airy_ai(z: float) -> float:
    """Ai(z) for |z| <= 20: Maclaurin series near the origin, scipy beyond."""
    if abs(z) > SUPPORTED:
        raise ParameterError(f"Ai supported for |z| <= {SUPPORTED}, got {z}")
    if abs(z) <= SERIES_RADIUS:
        return _airy_series(z)
    return float(special.airy(z)[0])


def _ai(z: float) -> float:
    return float(special.airy(z)[0])


def _quad(func, lo: float, hi: float) -> float:
    value, err = integrate.quad(func, lo, hi, limit=1000, epsabs=1e-12)
    if err > QUAD_TOL:
        raise ConvergenceError(
            f"quadrature error {err:.2e} exceeds {QUAD_TOL} on [{lo}, {hi}]"
        )
    return value


def _negative_cut(delta: float) -> float:
    # e^{-40} is far below the quadrature tolerance
    return max(40.0, 40.0 / delta)


def airy_kernel_diagonal(zeta: float) -> float:
    """Stationary Airy kernel on the diagonal: Ai'(z)^2 - z Ai(z)^2."""
    ai, aip, _, _ = special.airy(zeta)
    return float(aip * aip - zeta * ai * ai)


def airy2_kernel(xi1: float, zeta1: float, xi2: float, zeta2: float) -> float:
    """Extended Airy kernel K(xi1, zeta1; xi2, zeta2).

    For xi2 <= xi1 the integral runs over [0, inf); otherwise it is minus
    the integral over (-inf, 0].
    """
    delta = xi2 - xi1

    def integrand(lam: float) -> float:
        return math.exp(lam * delta) * _ai(lam + zeta1) * _ai(lam + zeta2)

    if delta <= 0:
        return _quad(integrand, 0.0, math.inf)
    return -_quad(integrand, -_negative_cut(delta), 0.0)


def johansson_gaussian(
    tau: float, tau_p: float, xi: float, xi_p: float
) -> float:
    """Gaussian closed form of the full-line Airy integral, tau' > tau."""
    d = tau_p - tau
    if d <= 0:
        raise ParameterError("Johansson's formula needs tau' > tau")
    exponent = (
        -((xi - xi_p) ** 2) / (4.0 * d) - d * (xi + xi_p) / 2.0 + d**3 / 12.0
    )
    return math.exp(exponent) / math.sqrt(4.0 * math.pi * d)


def johansson_integral(
    tau: float, tau_p: float, xi: float, xi_p: float
) -> float:
    """Integral of e^{-lambda (tau - tau')} Ai(xi + l) Ai(xi' + l) over R."""
    d = tau_p - tau

    def integrand(lam: float) -> float:
        return math.exp(lam * d) * _ai(xi + lam) * _ai(xi_p + lam)

    return _quad(integrand, -_negative_cut(d), 0.0) + _quad(
        integrand, 0.0, math.inf
    )
