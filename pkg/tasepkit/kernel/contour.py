"""Trapezoidal quadrature on circles in the complex plane.

For an integrand analytic in an annulus around the circle the trapezoidal
rule converges geometrically in the node count, so nodes are doubled until
two successive estimates agree.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..core.params import ConvergenceError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
MIN_NODES = 64
MAX_NODES = 1 << 14


@dataclass(frozen=True)
class Circle:
    """Anticlockwise circle |w - center| = radius."""

    center: complex
    radius: float

    def nodes(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        """Return nodes w_k and the weights dw/(2 pi i) of an m-point rule."""
        theta = 2.0 * np.pi * np.arange(m) / m
        e = np.exp(1j * theta)
        w = self.center + self.radius * e
        # dw = i r e^{i theta} d theta; divided by 2 pi i and times 2 pi / m
        return w, self.radius * e / m

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) < self.radius


def outer_circle(p: float) -> Circle:
    """Circle enclosing 0 and 1 but not the pole at w = -p/q.

    Centered at 1/2 with radius 1/2 + p/(2q), half way between 1 and the
    distance to -p/q.
    """
    q = 1.0 - p
    return Circle(0.5, 0.5 + p / (2.0 * q))


def inner_circle(p: float) -> Circle:
    """Small circle around 1 lying strictly inside :func:`outer_circle`."""
    q = 1.0 - p
    return Circle(1.0, min(0.5, p / (4.0 * q)))


def integrate(
    integrand: Callable[[np.ndarray], np.ndarray],
    circle: Circle,
    *,
    tol: float = DEFAULT_TOL,
    min_nodes: int = MIN_NODES,
    max_nodes: int = MAX_NODES,
) -> complex:
    """(1 / 2 pi i) times the contour integral of ``integrand`` on ``circle``.

    ``integrand`` is evaluated on a numpy array of nodes.

    Raises:
        ConvergenceError: if doubling reaches ``max_nodes`` without two
            estimates within ``tol`` of each other.
    """
    m = min_nodes
    w, dw = circle.nodes(m)
    prev = complex(np.sum(integrand(w) * dw))
    while m < max_nodes:
        m *= 2
        w, dw = circle.nodes(m)
        est = complex(np.sum(integrand(w) * dw))
        if abs(est - prev) < tol:
            logger.debug(f"contour integral converged with {m} nodes")
            return est
        prev = est
    raise ConvergenceError(
        f"trapezoidal rule did not converge to {tol} with {max_nodes} nodes"
    )


def integrate_double(
    integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
    outer: Circle,
    inner: Circle,
    *,
    tol: float = DEFAULT_TOL,
    min_nodes: int = MIN_NODES,
    max_nodes: int = 1 << 11,
) -> complex:
    """Iterated integral: ``inner`` variable v, ``outer`` variable w.

    ``integrand(v, w)`` receives broadcastable arrays (v as a column, w as
    a row) and both rules are refined together.
    """
    def estimate(m: int) -> complex:
        w, dw = outer.nodes(m)
        v, dv = inner.nodes(m)
        values = integrand(v[:, None], w[None, :])
        return complex(dv @ values @ dw)

    m = min_nodes
    prev = estimate(m)
    while m < max_nodes:
        m *= 2
        est = estimate(m)
        if abs(est - prev) < tol:
            logger.debug(f"double contour integral converged with {m} nodes")
            return est
        prev = est
    raise ConvergenceError(
        f"double trapezoidal rule did not converge to {tol} "
        f"with {max_nodes} nodes"
    )
