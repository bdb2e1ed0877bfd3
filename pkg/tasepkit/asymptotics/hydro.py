"""Hydrodynamic limit: stationary current, density profile, exit times."""

from __future__ import annotations

import logging
import math

from ..core.params import ModelParams, ParameterError

logger = logging.getLogger(__name__)


def current(rho: float, params: ModelParams) -> float:
    """Stationary current j(rho) = p rho (1 - rho) / (1 - p rho)."""
    if not 0.0 <= rho <= 1.0:
        raise ParameterError(f"density must lie in [0, 1], got {rho}")
    p = float(params.p)
    return p * rho * (1.0 - rho) / (1.0 - p * rho)


def density_profile(x_over_t: float, params: ModelParams) -> float:
    """Macroscopic density from the step initial condition at speed x/t."""
    p = float(params.p)
    q = 1.0 - p
    if x_over_t < p / (p - 1.0):
        return 1.0
    if x_over_t >= p:
        return 0.0
    return (1.0 - math.sqrt(q / (1.0 - x_over_t))) / p


def continuity_residual(
    x: float, t: float, params: ModelParams, h: float = 1e-3
) -> float:
    """Central-difference residual of d(rho)/dt + d(j)/dx at (x, t)."""

    def rho(xx: float, tt: float) -> float:
        return density_profile(xx / tt, params)

    drho_dt = (rho(x, t + h) - rho(x, t - h)) / (2 * h)
    dj_dx = (
        current(rho(x + h, t), params) - current(rho(x - h, t), params)
    ) / (2 * h)
    return drho_dt + dj_dx


def omega_nu(nu: float, gamma: float, params: ModelParams) -> float:
    """Most probable exit time per unit scale of particle n = nu L.

    omega(nu) = (sqrt(q nu) + sqrt(gamma))^2 / p with gamma = (x + N) / L.
    """
    if nu < 0 or gamma < 0:
        raise ParameterError("nu and gamma must be non-negative")
    p = float(params.p)
    return (math.sqrt((1.0 - p) * nu) + math.sqrt(gamma)) ** 2 / p


def omega_nu_derivative(nu: float, gamma: float, params: ModelParams) -> float:
    """d omega / d nu; non-negative, infinite at nu = 0."""
    p = float(params.p)
    q = 1.0 - p
    if nu == 0:
        return math.inf
    return (math.sqrt(q * nu) + math.sqrt(gamma)) * math.sqrt(q / nu) / p
