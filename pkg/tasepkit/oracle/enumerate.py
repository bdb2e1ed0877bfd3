"""Brute-force reference sums: trajectories, N-paths, measure marginals.

These share no arithmetic with the determinant formulas they check. Size
caps are hard: exceeding one raises :class:`OracleLimitError` rather than
returning an approximation.
"""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from ..core.lattice import ParticleConfig, SpaceTimeConfig, is_admissible
from ..core.params import ModelParams, Scalar, TasepError
from ..kernel.detprocess import AuxConfig, measure_weight

logger = logging.getLogger(__name__)

MAX_PARTICLES = 3
MAX_TIME = 6
MAX_WINDOW = 10


class OracleLimitError(TasepError):
    """Raised when an oracle is asked for more than it can enumerate."""


def _successors(
    coords: tuple[int, ...], params: ModelParams
) -> Iterator[tuple[tuple[int, ...], Scalar]]:
    """All configurations one sweep away, with their probabilities."""
    partial: list[tuple[tuple[int, ...], Scalar]] = [((), params.one)]
    for i, c in enumerate(coords):
        grown = []
        for done, weight in partial:
            if i > 0 and done[-1] == c + 1:
                grown.append((done + (c,), weight))
                continue
            grown.append((done + (c + 1,), weight * params.prob))
            grown.append((done + (c,), weight * params.qprob))
        partial = grown
    yield from partial


def enumerate_green(
    x: ParticleConfig, y: ParticleConfig, t: int, params: ModelParams
) -> Scalar:
    """Transition probability by summing over every trajectory.

    Raises:
        OracleLimitError: for N > 3 or t > 6.
    """
    if len(y) > MAX_PARTICLES or t > MAX_TIME:
        raise OracleLimitError(
            f"enumerate_green is capped at N <= {MAX_PARTICLES}, "
            f"t <= {MAX_TIME}"
        )
    layer: dict[tuple[int, ...], Scalar] = {tuple(y): params.one}
    for _ in range(t):
        nxt: dict[tuple[int, ...], Scalar] = defaultdict(lambda: params.zero)
        for coords, weight in layer.items():
            for succ, w in _successors(coords, params):
                nxt[succ] += weight * w
        layer = dict(nxt)
    return layer.get(tuple(x), params.zero)


@dataclass(frozen=True)
class NPath:
    """Coordinate sequences of N particles with their start times."""

    starts: tuple[int, ...]
    paths: tuple[tuple[int, ...], ...]

    def points(self, i: int) -> set[tuple[int, int]]:
        t0 = self.starts[i]
        return {(x, t0 + k) for k, x in enumerate(self.paths[i])}


def _single_paths(x0: int, x1: int, length: int) -> Iterator[tuple[int, ...]]:
    hops = x1 - x0
    if hops < 0 or hops > length:
        return
    for where in itertools.combinations(range(length), hops):
        path = [x0]
        chosen = set(where)
        for k in range(length):
            path.append(path[-1] + (1 if k in chosen else 0))
        yield tuple(path)


def path_weight(
    path: Sequence[int],
    t0: int,
    params: ModelParams,
    ahead: Optional[set[tuple[int, int]]] = None,
) -> Scalar:
    """Weight of one path conditioned on the point set of the path ahead.

    A hop into a point of ``ahead`` has weight 0; a stay in front of such a
    point has weight 1. Otherwise hops weigh p and stays q.
    """
    weight = params.one
    for k in range(len(path) - 1):
        target = (path[k] + 1, t0 + k + 1)
        blocked = ahead is not None and target in ahead
        if path[k + 1] == path[k] + 1:
            if blocked:
                return params.zero
            weight *= params.prob
        else:
            weight *= params.one if blocked else params.qprob
    return weight


def npath_weight(npath: NPath, params: ModelParams) -> Scalar:
    """W[Pi]: product of the conditional path weights, particle by particle."""
    weight = params.one
    for i, path in enumerate(npath.paths):
        ahead = npath.points(i - 1) if i > 0 else None
        weight *= path_weight(path, npath.starts[i], params, ahead)
        if weight == 0:
            break
    return weight


def iter_npaths(
    final: SpaceTimeConfig, initial: SpaceTimeConfig
) -> Iterator[NPath]:
    starts = initial.ts
    choices = [
        list(_single_paths(x0, x1, t1 - t0))
        for (x1, t1), (x0, t0) in zip(final, initial)
    ]
    for paths in itertools.product(*choices):
        yield NPath(starts, tuple(paths))


def enumerate_npath(
    final: SpaceTimeConfig, initial: SpaceTimeConfig, params: ModelParams
) -> Scalar:
    """Generalized Green function as a weighted sum over all N-paths.

    Raises:
        OracleLimitError: for N > 3 or a time span above 6.
    """
    span = max(final.ts) - min(initial.ts)
    if len(final) > MAX_PARTICLES or span > MAX_TIME:
        raise OracleLimitError(
            f"enumerate_npath is capped at N <= {MAX_PARTICLES}, "
            f"span <= {MAX_TIME}"
        )
    return sum(
        (npath_weight(np_, params) for np_ in iter_npaths(final, initial)),
        params.zero,
    )


def admissible_pairs(
    n: int, span: int, width: int
) -> Iterator[tuple[SpaceTimeConfig, SpaceTimeConfig]]:
    """Admissible (final, initial) pairs with t_i > t0_i inside a box.

    Initial positions are packed near the origin, start times in
    [0, span), and all times stay within ``span``.
    """
    for x0 in itertools.combinations(range(-width, 1), n):
        x0 = tuple(sorted(x0, reverse=True))
        for t0 in itertools.combinations_with_replacement(range(span), n):
            initial = SpaceTimeConfig(tuple(zip(x0, t0)))
            for t1 in itertools.combinations_with_replacement(
                range(1, span + 1), n
            ):
                if any(a <= b for a, b in zip(t1, t0)):
                    continue
                ranges = [
                    range(a, a + (b - c) + 1) for a, b, c in zip(x0, t1, t0)
                ]
                for x1 in itertools.product(*ranges):
                    final = SpaceTimeConfig(tuple(zip(x1, t1)))
                    if is_admissible(final):
                        yield final, initial


def enumerate_measure_marginal(
    pinned: Sequence[int], x: int, window: int, params: ModelParams
) -> Scalar:
    """Sum of the auxiliary measure over all free times in [x, x + window).

    Level n holds tau^n_1 = pinned[n - 1] and n - 1 free times below it.

    Raises:
        OracleLimitError: for N > 3 or window > 10.
    """
    big_n = len(pinned)
    if big_n > MAX_PARTICLES or window > MAX_WINDOW:
        raise OracleLimitError(
            f"marginal enumeration is capped at N <= {MAX_PARTICLES}, "
            f"window <= {MAX_WINDOW}"
        )
    sites = range(x, x + window)
    if any(t not in sites for t in pinned):
        raise OracleLimitError(f"pinned times {tuple(pinned)} outside window")
    levels = []
    for n, top in enumerate(pinned, start=1):
        options = []
        for rest in itertools.permutations(sites, n - 1):
            level = (top,) + rest
            if all(a > b for a, b in zip(level, level[1:])):
                options.append(level)
        levels.append(options)
    total = params.zero
    for combo in itertools.product(*levels):
        total += measure_weight(AuxConfig(combo), x, big_n, params)
    return total
