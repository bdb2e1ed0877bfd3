"""Green functions of the backward-sequential TASEP.

``green_det`` is the equal-time transition probability G_t(x | y) and
``ggf_det`` its generalized version between admissible space-time
configurations, each particle carrying its own start and end time. Both are
N x N determinants of the F-functions in :mod:`tasepkit.core.fcore`.
"""

from __future__ import annotations

import itertools
import logging
from typing import Iterator, Optional, Sequence

from .fcore import f_n
from .lattice import (
    ConfigurationError,
    ParticleConfig,
    SpaceTimeConfig,
    is_admissible,
    require_same_size,
)
from .linalg import det
from .params import ModelParams, Scalar

logger = logging.getLogger(__name__)


def _theta(k: int, l: Optional[int], params: ModelParams) -> Scalar:
    """Single-particle one-step factor.

    ``l is None`` means no particle ahead.
    """
    if k == 1:
        return params.prob
    if k == 0:
        if l == 1:
            return params.one
        return params.qprob
    return params.zero


def one_step_prob(
    to: ParticleConfig, frm: ParticleConfig, params: ModelParams
) -> Scalar:
    """P_1(to | frm): probability of one backward-sequential sweep.

    Particle i sees the already-updated position of particle i-1, so a
    particle directly behind one that stayed is blocked and stays with
    probability 1.
    """
    require_same_size(to, frm)
    weight = params.one
    for i, (x, y) in enumerate(zip(to, frm)):
        ahead = None if i == 0 else to[i - 1] - y
        weight *= _theta(x - y, ahead, params)
        if weight == 0:
            return params.zero
    return weight


def green_det(
    x: ParticleConfig, y: ParticleConfig, t: int, params: ModelParams
) -> Scalar:
    """G_t(x | y) = det[F_{j-i}(x_i - y_j, t)]."""
    n = require_same_size(x, y)
    if t < 0:
        raise ConfigurationError(f"time must be >= 0, got {t}")
    matrix = [
        [f_n(j - i, x[i] - y[j], t, params) for j in range(n)]
        for i in range(n)
    ]
    return det(matrix, params)


def reachable_configs(y: ParticleConfig, t: int) -> Iterator[ParticleConfig]:
    """Every strictly decreasing x with y_i <= x_i <= y_i + t.

    Finite superset of the support of G_t(. | y); iteration order is
    lexicographic in (x_1, ..., x_N).
    """
    ranges = [range(c, c + t + 1) for c in y]
    for coords in itertools.product(*ranges):
        if all(a > b for a, b in zip(coords, coords[1:])):
            yield ParticleConfig(coords)


def green_normalization(
    y: ParticleConfig, t: int, params: ModelParams
) -> Scalar:
    """Sum of G_t(x | y) over the reachable set; equals one."""
    return sum(
        (green_det(x, y, t, params) for x in reachable_configs(y, t)),
        params.zero,
    )


def _check_pair(
    final: SpaceTimeConfig, initial: SpaceTimeConfig, strict: bool
) -> int:
    n = require_same_size(final, initial)
    errors = []
    if not is_admissible(final):
        errors.append(f"final configuration {final.points} is not admissible")
    if not is_admissible(initial):
        errors.append(
            f"initial configuration {initial.points} is not admissible"
        )
    for i, ((x, t), (x0, t0)) in enumerate(zip(final, initial), start=1):
        if t > t0:
            continue
        if not strict and t == t0 and x == x0:
            continue
        errors.append(f"particle {i}: end time {t} must exceed start {t0}")
    if errors:
        raise ConfigurationError("; ".join(errors))
    return n


def ggf_det(
    final: SpaceTimeConfig,
    initial: SpaceTimeConfig,
    params: ModelParams,
    *,
    strict: bool = True,
) -> Scalar:
    """Generalized Green function det[F_{j-i}(x_i - x0_j, t_i - t0_j)].

    Both configurations must be admissible with t_i > t0_i. With
    ``strict=False`` a particle may also have zero length (t_i = t0_i and
    x_i = x0_i); boundary convolutions need this.

    Raises:
        ConfigurationError: if the pair is outside the admissible set.
    """
    n = _check_pair(final, initial, strict)
    matrix = [
        [
            f_n(
                j - i,
                final[i][0] - initial[j][0],
                final[i][1] - initial[j][1],
                params,
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    return det(matrix, params)


def ggf_convolution(
    final: SpaceTimeConfig,
    initial: SpaceTimeConfig,
    t_split: int,
    params: ModelParams,
) -> Scalar:
    """Rebuild ggf_det(final, initial) by splitting at time ``t_split``.

    Particles that have finished by ``t_split`` stay in the left factor,
    particles that have not started go to the right one, and the positions
    of the particles in progress are summed over.
    """
    n = _check_pair(final, initial, strict=True)
    ended = [i for i in range(n) if final[i][1] <= t_split]
    waiting = [i for i in range(n) if initial[i][1] >= t_split]
    k1 = len(ended)
    k2 = n - len(waiting)
    if ended != list(range(k1)) or waiting != list(range(k2, n)):
        raise ConfigurationError("split time does not separate the particles")
    ranges = [range(initial[i][0], final[i][0] + 1) for i in range(k1, k2)]
    total = params.zero
    for mid in itertools.product(*ranges):
        if any(a <= b for a, b in zip(mid, mid[1:])):
            continue
        mid_points = [(x, t_split) for x in mid]
        left_final = SpaceTimeConfig(
            tuple(final.points[:k1]) + tuple(mid_points)
        )
        right_initial = SpaceTimeConfig(
            tuple(mid_points) + tuple(initial.points[k2:])
        )
        if not (is_admissible(left_final) and is_admissible(right_initial)):
            continue
        left = _ggf_or_one(left_final, initial.points[:k2], params)
        if left == 0:
            continue
        right = _ggf_or_one(final.points[k1:], right_initial, params)
        total += left * right
    return total


def _ggf_or_one(
    final: Sequence[tuple[int, int]] | SpaceTimeConfig,
    initial: Sequence[tuple[int, int]] | SpaceTimeConfig,
    params: ModelParams,
) -> Scalar:
    if len(final) == 0:
        return params.one
    return ggf_det(
        SpaceTimeConfig(tuple(final)), SpaceTimeConfig(tuple(initial)), params
    )
