"""Joint distribution of jump-off times as a Fredholm determinant.

For N particles started from the step configuration, the probability that
particles n_1 < ... < n_m leave sites x + N - n_i no later than a_i is

    det(1 - chi_a K chi_a)

on {n_1, ..., n_m} x Z_{>= x}, chi_a(n_i)(tau) = 1(tau > a_i). The kernel
decays geometrically in tau, so the index set is cut at a horizon that is
doubled until the determinant stabilises.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from ..core.linalg import bareiss_det, lu_det
from ..core.params import (
    ConvergenceError,
    ModelParams,
    ParameterError,
    Scalar,
)
from .detprocess import KernelIndex, kernel

logger = logging.getLogger(__name__)

DEFAULT_STAB_TOL = 1e-8
DEFAULT_MAX_DOUBLINGS = 8


@dataclass(frozen=True)
class CurrentQuery:
    """Labels n_1 < ... < n_m with thresholds a_1..a_m at boundary x."""

    labels: tuple[int, ...]
    thresholds: tuple[int, ...]
    x: int
    n_particles: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(int(n) for n in self.labels))
        object.__setattr__(
            self, "thresholds", tuple(int(a) for a in self.thresholds)
        )
        errors = validate_query(self)
        if errors:
            raise ParameterError("; ".join(errors))

    @property
    def big_x(self) -> int:
        return self.x + self.n_particles

    def to_dict(self) -> dict[str, Any]:
        return {
            "labels": list(self.labels),
            "thresholds": list(self.thresholds),
            "x": self.x,
            "n_particles": self.n_particles,
        }


def validate_query(query: CurrentQuery) -> list[str]:
    """Return a list of problems with ``query`` (empty list means valid)."""
    errors = []
    big_n = query.n_particles
    if big_n < 1:
        errors.append(f"N must be >= 1, got {big_n}")
    if not query.labels:
        errors.append("at least one particle label is required")
    if len(query.labels) != len(query.thresholds):
        errors.append("labels and thresholds must have the same length")
    if len(query.labels) > big_n:
        errors.append(f"at most N={big_n} labels allowed")
    if any(a >= b for a, b in zip(query.labels, query.labels[1:])):
        errors.append(f"labels must increase strictly, got {query.labels}")
    if any(not 1 <= n <= big_n for n in query.labels):
        errors.append(f"labels must lie in 1..{big_n}")
    if query.x < 1 - big_n:
        errors.append(f"x must be >= 1 - N, got {query.x}")
    return errors


@dataclass
class TruncationPolicy:
    """Horizon doubling rule for :func:`joint_current_prob`.

    ``beta`` conjugates the kernel by beta^(tau - tau'); ``"auto"`` picks
    1/sqrt(q), which balances the q^tau decay of Psi against Phi.
    """

    horizon: Optional[int] = None
    stab_tol: float = DEFAULT_STAB_TOL
    max_doublings: int = DEFAULT_MAX_DOUBLINGS
    beta: Optional[float | str] = "auto"
    history: list[tuple[int, float]] = field(default_factory=list)

    def initial_horizon(self, query: CurrentQuery, params: ModelParams) -> int:
        if self.horizon is not None:
            return self.horizon
        return max(query.thresholds) + 4 * math.ceil(
            query.big_x / float(params.p)
        )

    def resolved_beta(self, params: ModelParams) -> float:
        if self.beta is None:
            return 1.0
        if self.beta == "auto":
            return 1.0 / math.sqrt(float(params.q))
        return float(self.beta)


def index_set(query: CurrentQuery, horizon: int) -> list[KernelIndex]:
    """Indices (n_i, tau) with max(a_i, x - 1) < tau <= horizon."""
    out = []
    for n, a in zip(query.labels, query.thresholds):
        start = max(a, query.x - 1) + 1
        out.extend(KernelIndex(n, tau) for tau in range(start, horizon + 1))
    return out


def kernel_matrix(
    query: CurrentQuery,
    horizon: int,
    params: ModelParams,
    beta: float = 1.0,
) -> list[list[Scalar]]:
    """chi_a K chi_a on the truncated index set, conjugated by beta."""
    indices = index_set(query, horizon)
    rows = []
    for a in indices:
        row = []
        for b in indices:
            value = kernel(a, b, query.x, query.n_particles, params)
            if beta != 1.0:
                value = value * beta ** (a.tau - b.tau)
            row.append(value)
        rows.append(row)
    return rows


def fredholm_det(
    query: CurrentQuery,
    horizon: int,
    params: ModelParams,
    beta: float = 1.0,
) -> Scalar:
    """det(1 - chi K chi) on the index set cut at ``horizon``."""
    matrix = kernel_matrix(query, horizon, params, beta)
    size = len(matrix)
    if params.exact:
        shifted = [
            [(1 if i == j else 0) - matrix[i][j] for j in range(size)]
            for i in range(size)
        ]
        return bareiss_det(shifted)
    arr = np.eye(size) - np.asarray(matrix, dtype=float)
    return lu_det(arr)


def joint_current_prob(
    query: CurrentQuery,
    params: ModelParams,
    policy: Optional[TruncationPolicy] = None,
) -> tuple[float, float]:
    """Joint CDF P(t_{n_1} <= a_1, ..., t_{n_m} <= a_m) and an error estimate.

    The horizon starts at max(a) + 4 ceil((x + N) / p) and doubles until two
    successive changes are below ``policy.stab_tol``; the error estimate
    is the last change.

    Raises:
        ConvergenceError: if the horizon does not stabilise.
    """
    policy = policy or TruncationPolicy()
    fparams = params.as_float()
    beta = policy.resolved_beta(fparams)
    horizon = policy.initial_horizon(query, fparams)
    prev = float(fredholm_det(query, horizon, fparams, beta))
    policy.history = [(horizon, prev)]
    calm = 0
    last_delta = math.inf
    for _ in range(policy.max_doublings):
        horizon *= 2
        value = float(fredholm_det(query, horizon, fparams, beta))
        policy.history.append((horizon, value))
        delta = abs(value - prev)
        logger.debug(f"horizon {horizon}: P={value:.12g} delta={delta:.3g}")
        calm = calm + 1 if delta < policy.stab_tol else 0
        prev = value
        last_delta = delta
        if calm >= 2:
            return value, delta
    raise ConvergenceError(
        [
            f"horizon doubling did not stabilise after {policy.max_doublings} "
            f"doublings",
            f"last change {last_delta:.3g} at horizon {horizon}",
        ]
    )


def inclusion_exclusion_check(
    query: CurrentQuery,
    order_cap: int,
    window: int,
    params: ModelParams,
) -> Scalar:
    """Partial sum over subsets S, |S| <= order_cap, of (-1)^|S| det(M_S).

    M is chi K chi on the index set cut at ``window``. At order_cap equal to
    the index-set size the series terminates and equals
    :func:`fredholm_det` exactly.
    """
    matrix = kernel_matrix(query, window, params)
    size = len(matrix)
    total = params.one
    for order in range(1, min(order_cap, size) + 1):
        sign = -1 if order % 2 else 1
        for subset in itertools.combinations(range(size), order):
            minor = [[matrix[i][j] for j in subset] for i in subset]
            value = (
                bareiss_det(minor) if params.exact else lu_det(minor)
            )
            total += sign * value
    return total


def cdf_table(
    queries: Sequence[CurrentQuery],
    params: ModelParams,
    policy: Optional[TruncationPolicy] = None,
) -> list[tuple[CurrentQuery, float, float]]:
    """Evaluate several queries with one policy."""
    out = []
    for query in queries:
        local = TruncationPolicy(
            horizon=None if policy is None else policy.horizon,
            stab_tol=DEFAULT_STAB_TOL if policy is None else policy.stab_tol,
            max_doublings=(
                DEFAULT_MAX_DOUBLINGS
                if policy is None
                else policy.max_doublings
            ),
            beta="auto" if policy is None else policy.beta,
        )
        prob, err = joint_current_prob(query, params, local)
        out.append((query, prob, err))
    return out
