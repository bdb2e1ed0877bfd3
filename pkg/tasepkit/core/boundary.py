"""Staircase boundaries and the exit measure they carry.

A staircase is stored through its height profile T: the region below it is
L = {(x, t) : t <= T(x)} and T is nonincreasing. Column x of the boundary
holds the points (x, t) with T(x + 1) <= t <= T(x), so walking along the
boundary means stepping right or down. Fixed-space and fixed-time
boundaries are the two extreme profiles.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .green import ggf_det
from .lattice import (
    ConfigurationError,
    SpaceTimeConfig,
    is_admissible,
    require_same_size,
)
from .params import ConvergenceError, ModelParams, Scalar

logger = logging.getLogger(__name__)

Height = float  # an int, or +/- math.inf
RIGHT, DOWN = "R", "D"
DEFAULT_MAX_HORIZON = 2000


@dataclass(frozen=True)
class Staircase:
    """Height profile T(x): ``head`` left of ``start``, then ``heights``,
    then ``tail``."""

    start: int = 0
    heights: tuple[Height, ...] = ()
    head: Height = math.inf
    tail: Height = -math.inf

    def __post_init__(self) -> None:
        profile = (self.head,) + tuple(self.heights) + (self.tail,)
        if any(a < b for a, b in zip(profile, profile[1:])):
            raise ConfigurationError(
                f"staircase heights must be nonincreasing, got {profile}"
            )
        if self.head == -math.inf or self.tail == math.inf:
            raise ConfigurationError("staircase profile is degenerate")

    @classmethod
    def fixed_space(cls, x: int) -> "Staircase":
        """The vertical line {(x, t) : t in Z}."""
        return cls(start=x + 1)

    @classmethod
    def fixed_time(cls, t: int) -> "Staircase":
        """The horizontal line {(x, t) : x in Z}."""
        return cls(head=t, tail=t)

    @classmethod
    def from_steps(
        cls,
        anchor: tuple[int, int],
        steps: Sequence[str],
        head: Height = math.inf,
        tail: Height = -math.inf,
    ) -> "Staircase":
        """Walk from ``anchor`` (top of its column) with R and D steps.

        ``head`` is the height left of the anchor and ``tail`` the height
        right of the last column.
        """
        x, t = anchor
        heights = [t]
        for step in steps:
            if step == RIGHT:
                heights.append(t)
            elif step == DOWN:
                t -= 1
            else:
                raise ConfigurationError(f"unknown staircase step {step!r}")
        if tail > t:
            raise ConfigurationError(
                f"tail height {tail} lies above the last point {t}"
            )
        if head < anchor[1]:
            raise ConfigurationError(
                f"head height {head} lies below the anchor {anchor}"
            )
        return cls(start=x, heights=tuple(heights), head=head, tail=tail)

    def height(self, x: int) -> Height:
        if x < self.start:
            return self.head
        k = x - self.start
        if k < len(self.heights):
            return self.heights[k]
        return self.tail

    def shift(self, n: int) -> "Staircase":
        """The translate T_n of the boundary by n sites."""
        return Staircase(self.start + n, self.heights, self.head, self.tail)

    def below(self, point: tuple[int, int]) -> bool:
        """Membership in the region under the staircase."""
        x, t = point
        return t <= self.height(x)

    def column(self, x: int) -> tuple[Height, Height]:
        return self.height(x + 1), self.height(x)

    def contains(self, point: tuple[int, int]) -> bool:
        x, t = point
        lo, hi = self.column(x)
        if lo == hi and math.isinf(hi):
            return False
        return lo <= t <= hi

    def points(
        self, x_range: tuple[int, int], t_range: tuple[int, int]
    ) -> Iterator[tuple[int, int]]:
        """Boundary points inside a window, in walking order."""
        for x in range(x_range[0], x_range[1] + 1):
            lo, hi = self.column(x)
            if lo == hi and math.isinf(hi):
                continue
            top = int(min(hi, t_range[1]))
            bottom = int(max(lo, t_range[0]))
            for t in range(top, bottom - 1, -1):
                yield (x, t)

    def to_dict(self) -> dict[str, object]:
        return {
            "start": self.start,
            "heights": [_fmt_height(h) for h in self.heights],
            "head": _fmt_height(self.head),
            "tail": _fmt_height(self.tail),
        }


def _fmt_height(h: Height) -> object:
    if math.isinf(h):
        return "inf" if h > 0 else "-inf"
    return int(h)


@dataclass(frozen=True)
class NBoundary:
    """N copies of a staircase, copy i shifted i sites to the left."""

    base: Staircase
    size: int
    copies: tuple[Staircase, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ConfigurationError(
                f"need at least one copy, got {self.size}"
            )
        copies = tuple(self.base.shift(-i) for i in range(self.size))
        object.__setattr__(self, "copies", copies)

    def copy(self, i: int) -> Staircase:
        return self.copies[i]

    def contains(self, config: SpaceTimeConfig) -> bool:
        return len(config) == self.size and all(
            c.contains(pt) for c, pt in zip(self.copies, config)
        )


def exit_probability(
    point: tuple[int, int], b: Staircase, params: ModelParams
) -> Scalar:
    """One-step weight of leaving the region below ``b`` from ``point``.

    A hop always leaves; a stay leaves only from the top of a column.

    Raises:
        ConfigurationError: if the point is not on the boundary.
    """
    if not b.contains(point):
        raise ConfigurationError(f"{point} is not on the boundary")
    x, t = point
    if t == b.height(x):
        return params.one
    return params.prob


def _check_on_boundary(config: SpaceTimeConfig, nb: NBoundary) -> None:
    require_same_size(config, nb.copies)
    errors = [
        f"particle {i}: {pt} is not on its boundary copy"
        for i, (pt, c) in enumerate(zip(config, nb.copies), start=1)
        if not c.contains(pt)
    ]
    if errors:
        raise ConfigurationError("; ".join(errors))


def boundary_measure(
    config: SpaceTimeConfig,
    nb: NBoundary,
    initial: SpaceTimeConfig,
    params: ModelParams,
) -> Scalar:
    """Probability that the N trajectories leave the region at ``config``.

    Raises:
        ConfigurationError: for off-boundary points or an inadmissible pair.
    """
    _check_on_boundary(config, nb)
    green = ggf_det(config, initial, params, strict=False)
    if green == 0:
        return params.zero
    weight = params.one
    for pt, c in zip(config, nb.copies):
        weight *= exit_probability(pt, c, params)
    return weight * green


def boundary_layer(
    nb: NBoundary, initial: SpaceTimeConfig, horizon: int
) -> Iterator[SpaceTimeConfig]:
    """Admissible boundary configurations whose latest time is ``horizon``."""
    options = []
    for (x0, t0), c in zip(initial, nb.copies):
        reach = (x0, x0 + max(horizon - t0, 0))
        options.append(list(c.points(reach, (t0, horizon))))
    for combo in itertools.product(*options):
        if combo[-1][1] != horizon:
            continue
        if is_admissible(combo) and _ordered(combo, initial):
            yield SpaceTimeConfig(combo)


def _bounded_top(nb: NBoundary, initial: SpaceTimeConfig) -> Optional[int]:
    tops = [c.height(x0) for (x0, _), c in zip(initial, nb.copies)]
    if any(math.isinf(h) for h in tops):
        return None
    return int(max(tops))


def tail_horizon(
    t0: int, n: int, params: ModelParams, tail_tol: float
) -> int:
    """First time t with q^(t - t0) < tail_tol / n."""
    if tail_tol <= 0:
        raise ConfigurationError(f"tail_tol must be positive, got {tail_tol}")
    q = 1.0 - float(params.p)
    bound = tail_tol / max(n, 1)
    if bound >= 1:
        return t0
    steps = math.floor(math.log(bound) / math.log(q)) + 1
    while steps > 0 and q ** (steps - 1) < bound:
        steps -= 1
    while q**steps >= bound:
        steps += 1
    return t0 + steps


def boundary_normalization(
    nb: NBoundary,
    initial: SpaceTimeConfig,
    params: ModelParams,
    tail_tol: float = 1e-12,
    max_horizon: int = DEFAULT_MAX_HORIZON,
) -> Scalar:
    """Total boundary measure, summed layer by layer in the latest time.

    Boundaries that stay below a finite time are summed exactly. Otherwise
    no layer is left out before :func:`tail_horizon`, where a single
    particle's chance of still waiting is below ``tail_tol / N``. Past that
    horizon summation stops once the geometric tail estimate
    d * r / (1 - r), with d the last layer and r the ratio of the last two
    layers, is also below ``tail_tol``.

    Raises:
        ConfigurationError: if the initial configuration is outside the
            region or inadmissible.
        ConvergenceError: if ``max_horizon`` is reached first.
    """
    if tail_tol <= 0:
        raise ConfigurationError(f"tail_tol must be positive, got {tail_tol}")
    require_same_size(initial, nb.copies)
    if not is_admissible(initial):
        raise ConfigurationError(f"{initial.points} is not admissible")
    if not all(c.below(pt) for pt, c in zip(initial, nb.copies)):
        raise ConfigurationError(
            "initial configuration is not below the boundary"
        )
    top = _bounded_top(nb, initial)
    horizon = initial[-1][1]
    floor = tail_horizon(
        max(t for _, t in initial), len(initial), params, tail_tol
    )
    total = params.zero
    prev: Optional[float] = None
    while horizon <= max_horizon:
        layer = sum(
            (
                boundary_measure(cfg, nb, initial, params)
                for cfg in boundary_layer(nb, initial, horizon)
            ),
            params.zero,
        )
        total += layer
        d = float(layer)
        logger.debug(f"boundary layer t={horizon}: {d:.3e}")
        if top is not None and horizon >= top:
            return total
        if prev and d > 0:
            r = d / prev
            estimate = d * r / (1 - r) if r < 1 else math.inf
            if horizon >= floor and estimate < tail_tol:
                logger.info(
                    f"boundary sum stopped at t={horizon}, "
                    f"tail estimate {estimate:.2e}"
                )
                return total
        prev = d if d > 0 else prev
        horizon += 1
    raise ConvergenceError(
        [
            f"boundary sum did not settle by t={max_horizon}",
            f"tail horizon t={floor}",
            f"partial sum {float(total):.15g}",
        ]
    )


def segment_weight(
    start: SpaceTimeConfig, end: SpaceTimeConfig, params: ModelParams
) -> Scalar:
    """Weight of the one-step N-path segments start_i -> end_i.

    Particle i hopping into a point of segment i-1 has weight 0; staying in
    front of such a point has weight 1.
    """
    weight = params.one
    for i, ((x, t), (x2, t2)) in enumerate(zip(start, end)):
        if t2 != t + 1 or x2 - x not in (0, 1):
            return params.zero
        blocked = i > 0 and (x + 1, t + 1) in (start[i - 1], end[i - 1])
        if x2 == x + 1:
            weight *= params.zero if blocked else params.prob
        else:
            weight *= params.one if blocked else params.qprob
    return weight


def _ordered(
    later: Sequence[tuple[int, int]], earlier: Sequence[tuple[int, int]]
) -> bool:
    """Each later point is strictly after, or equal to, its earlier one."""
    return all(
        t1 > t0 and x1 >= x0 or (t1, x1) == (t0, x0)
        for (x1, t1), (x0, t0) in zip(later, earlier)
    )


def boundary_convolution(
    final: SpaceTimeConfig,
    nb: NBoundary,
    initial: SpaceTimeConfig,
    params: ModelParams,
) -> Scalar:
    """Rebuild ggf_det(final, initial) by summing over boundary crossings.

    Every particle starts below its copy of ``nb`` and ends above it; the
    sum runs over the crossing points and the first point beyond them.

    Raises:
        ConfigurationError: if a particle does not cross its copy.
    """
    require_same_size(final, initial)
    require_same_size(final, nb.copies)
    errors = []
    for i, (end, start, c) in enumerate(
        zip(final, initial, nb.copies), start=1
    ):
        if not c.below(start) or c.below(end):
            errors.append(f"particle {i} does not cross its boundary copy")
    if errors:
        raise ConfigurationError("; ".join(errors))
    options = []
    for (x1, t1), (x0, t0), c in zip(final, initial, nb.copies):
        options.append(list(c.points((x0, x1), (t0, t1 - 1))))
    total = params.zero
    for cross in itertools.product(*options):
        if not (is_admissible(cross) and _ordered(cross, initial)):
            continue
        cross_cfg = SpaceTimeConfig(cross)
        left = ggf_det(cross_cfg, initial, params, strict=False)
        if left == 0:
            continue
        steps = [
            [(x + d, t + 1) for d in (0, 1) if not c.below((x + d, t + 1))]
            for (x, t), c in zip(cross, nb.copies)
        ]
        for beyond in itertools.product(*steps):
            if not is_admissible(beyond):
                continue
            if not _ordered(final, beyond):
                continue
            beyond_cfg = SpaceTimeConfig(beyond)
            w = segment_weight(cross_cfg, beyond_cfg, params)
            if w == 0:
                continue
            green = ggf_det(final, beyond_cfg, params, strict=False)
            total += green * w * left
    return total


def crossing_points(
    path: Sequence[int], t0: int, b: Staircase
) -> list[tuple[int, int]]:
    """Points of a single-particle path after which it leaves the region."""
    out = []
    for k in range(len(path) - 1):
        here = (path[k], t0 + k)
        nxt = (path[k + 1], t0 + k + 1)
        if b.below(here) and not b.below(nxt):
            out.append(here)
    return out


def returns_below(path: Sequence[int], t0: int, b: Staircase) -> bool:
    """True if the path re-enters the region after leaving it."""
    inside = [b.below((x, t0 + k)) for k, x in enumerate(path)]
    return any(not a and c for a, c in zip(inside, inside[1:]))


def path_weight(path: Sequence[int], params: ModelParams) -> Scalar:
    """Free single-particle weight p^hops q^stays."""
    weight = params.one
    for a, b in zip(path, path[1:]):
        if b == a + 1:
            weight *= params.prob
        elif b == a:
            weight *= params.qprob
        else:
            raise ConfigurationError(f"illegal step {a} -> {b}")
    return weight


def split_path_weight(
    path: Sequence[int], k: int, params: ModelParams
) -> tuple[Scalar, Scalar]:
    """Weight of the path and the product of its two halves split at k."""
    if not 0 <= k < len(path):
        raise ConfigurationError(f"split index {k} outside the path")
    whole = path_weight(path, params)
    return whole, path_weight(path[: k + 1], params) * path_weight(
        path[k:], params
    )
