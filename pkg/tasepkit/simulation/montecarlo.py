"""Monte Carlo simulation of the backward-sequential TASEP.

Random streams come from numpy ``SeedSequence`` objects keyed by the run
seed and a block (or time) index, so results do not depend on the number
of worker threads.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from ..core.lattice import ConfigurationError, ParticleConfig
from ..core.params import ModelParams, ParameterError

logger = logging.getLogger(__name__)

DEFAULT_BLOCK = 4096
CENSORED_LIMIT = 1e-4


def block_rng(seed: int, key: int) -> np.random.Generator:
    """Generator for block ``key`` of a run seeded with ``seed``."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(key,))
    )


@dataclass(frozen=True)
class SimState:
    """A single trajectory: positions, clock, seed and jump-off record.

    ``exit_x`` is the boundary offset x; particle n jumps off site
    x + N - n, and ``jump_off_log[n - 1]`` is the time it left (None until
    it has).
    """

    positions: ParticleConfig
    time: int = 0
    rng_seed: int = 0
    exit_x: Optional[int] = None
    jump_off_log: tuple[Optional[int], ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.jump_off_log:
            object.__setattr__(
                self, "jump_off_log", (None,) * len(self.positions)
            )

    @classmethod
    def step_initial(
        cls, n: int, seed: int, exit_x: Optional[int] = None
    ) -> "SimState":
        return cls(ParticleConfig.step(n), 0, seed, exit_x)


def step(state: SimState, params: ModelParams) -> SimState:
    """One backward-sequential sweep of a single trajectory.

    The sweep itself is the vectorised one run on a single row, with the
    draws for sweep t taken from ``block_rng(rng_seed, t)``.
    """
    pos = np.asarray([state.positions.coords], dtype=np.int64)
    before = pos[0].copy()
    draws = block_rng(state.rng_seed, state.time).random(pos.shape)
    moved = _sweep(pos, draws, float(params.p))[0]
    log = list(state.jump_off_log)
    if state.exit_x is not None:
        size = len(log)
        for i in np.flatnonzero(moved):
            if log[i] is None and before[i] == state.exit_x + size - (i + 1):
                log[i] = state.time
    return replace(
        state,
        positions=ParticleConfig(tuple(int(v) for v in pos[0])),
        time=state.time + 1,
        jump_off_log=tuple(log),
    )


def _sweep(
    pos: np.ndarray, draws: np.ndarray, p: float
) -> np.ndarray:
    """Vectorised sweep over trials; returns the boolean move matrix.

    Columns are particles, rightmost first. ``pos`` is updated in place.
    """
    moved = np.zeros(pos.shape, dtype=bool)
    for i in range(pos.shape[1]):
        hop = draws[:, i] < p
        if i > 0:
            hop &= pos[:, i] + 1 != pos[:, i - 1]
        moved[:, i] = hop
        pos[:, i] += hop
    return moved


@dataclass
class JumpOffSample:
    """Jump-off times of every trial, one row per trial.

    ``all_times`` holds -1 for a particle still waiting at ``t_cap``; a
    trial with any such entry is censored. Probabilities are estimated
    over all trials, counting a censored entry as t_n >= t_cap.
    """

    all_times: np.ndarray
    t_cap: int
    seed: int

    @property
    def trials(self) -> int:
        return int(self.all_times.shape[0])

    @property
    def done(self) -> np.ndarray:
        return (self.all_times >= 0).all(axis=1)

    @property
    def times(self) -> np.ndarray:
        """Rows of the uncensored trials."""
        return self.all_times[self.done]

    @property
    def kept(self) -> int:
        return int(np.count_nonzero(self.done))

    @property
    def censored(self) -> int:
        return self.trials - self.kept

    @property
    def censored_fraction(self) -> float:
        return self.censored / self.trials if self.trials else 0.0

    def _check_times(self, values: Sequence[int]) -> None:
        late = [a for a in values if a >= self.t_cap]
        if late:
            raise ParameterError(
                f"times {late} are not below t_cap={self.t_cap}"
            )

    def histogram(self, n: int) -> dict[int, int]:
        """Counts of t_n over kept trials."""
        values = Counter(int(t) for t in self.times[:, n - 1])
        return dict(sorted(values.items()))

    def pmf(self, n: int, t: int) -> tuple[float, float]:
        """Estimate of P(t_n = t) over all trials, with its standard error."""
        self._check_times([t])
        hits = np.count_nonzero(self.all_times[:, n - 1] == t)
        return _proportion(int(hits), self.trials)

    def cdf(
        self, labels: Sequence[int], thresholds: Sequence[int]
    ) -> tuple[float, float]:
        """Estimate of P(t_{n_i} <= a_i for all i) with its standard error.

        Every threshold must lie below ``t_cap``.
        """
        self._check_times(thresholds)
        hit = np.ones(self.trials, dtype=bool)
        for n, a in zip(labels, thresholds):
            column = self.all_times[:, n - 1]
            hit &= (column >= 0) & (column <= a)
        return _proportion(int(np.count_nonzero(hit)), self.trials)

    def mean(self, n: int) -> tuple[float, float]:
        """Mean of t_n over kept trials."""
        column = self.times[:, n - 1].astype(float)
        if self.kept < 2:
            return float(column.mean()), math.inf
        return float(column.mean()), float(column.std(ddof=1)) / math.sqrt(
            self.kept
        )


def _proportion(hits: int, total: int) -> tuple[float, float]:
    if total == 0:
        return math.nan, math.inf
    est = hits / total
    return est, math.sqrt(max(est * (1.0 - est), 0.0) / total)


def _jump_off_block(
    n: int, x: int, p: float, t_cap: int, size: int, seed: int, key: int
) -> np.ndarray:
    rng = block_rng(seed, key)
    pos = np.tile(np.arange(0, -n, -1, dtype=np.int64), (size, 1))
    exits = x + n - np.arange(1, n + 1)
    times = np.full((size, n), -1, dtype=np.int64)
    for t in range(t_cap):
        before = pos.copy()
        moved = _sweep(pos, rng.random((size, n)), p)
        left = moved & (before == exits) & (times < 0)
        times[left] = t
        if (times[:, -1] >= 0).all():
            break
    return times


def run_jump_off(
    n: int,
    x: int,
    params: ModelParams,
    t_cap: int,
    trials: int,
    seed: int,
    *,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK,
) -> JumpOffSample:
    """Simulate jump-off times t_1..t_N from the step initial condition.

    t_n is the time step during which particle n leaves site x + N - n
    (it occupies the site at time t_n and has left by t_n + 1). Trials
    where some particle is still waiting at ``t_cap`` are censored; they
    stay in the sample and count as t_n >= t_cap.
    """
    if n < 1 or trials < 1 or t_cap < 1:
        raise ParameterError("N, trials and t_cap must be positive")
    if x < 1 - n:
        raise ConfigurationError(f"x must be >= 1 - N, got {x}")
    p = float(params.p)
    sizes = [
        min(block_size, trials - start)
        for start in range(0, trials, block_size)
    ]
    jobs = [
        (n, x, p, t_cap, size, seed, key) for key, size in enumerate(sizes)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(lambda job: _jump_off_block(*job), jobs))
    else:
        blocks = [_jump_off_block(*job) for job in jobs]
    sample = JumpOffSample(np.concatenate(blocks, axis=0), t_cap, seed)
    if sample.censored_fraction > CENSORED_LIMIT:
        logger.warning(
            f"{sample.censored} of {trials} trials censored at t_cap={t_cap}"
        )
    return sample


def simulate_positions(
    initial: ParticleConfig,
    params: ModelParams,
    steps: int,
    trials: int,
    seed: int,
    *,
    block_size: int = DEFAULT_BLOCK,
) -> np.ndarray:
    """Positions after ``steps`` sweeps, one row per trial."""
    p = float(params.p)
    blocks = []
    for key, start in enumerate(range(0, trials, block_size)):
        size = min(block_size, trials - start)
        rng = block_rng(seed, key)
        pos = np.tile(np.asarray(initial.coords, dtype=np.int64), (size, 1))
        for _ in range(steps):
            _sweep(pos, rng.random(pos.shape), p)
        blocks.append(pos)
    return np.concatenate(blocks, axis=0)


def configuration_frequencies(positions: np.ndarray) -> Counter:
    """Counts of each final configuration (as a tuple)."""
    return Counter(tuple(int(v) for v in row) for row in positions)


def sample_paths(
    start: tuple[int, int],
    params: ModelParams,
    steps: int,
    trials: int,
    seed: int,
) -> np.ndarray:
    """Single-particle space-time paths.

    Row k holds the positions at times t0 .. t0 + steps.
    """
    rng = block_rng(seed, 0)
    hops = (rng.random((trials, steps)) < float(params.p)).astype(np.int64)
    x0 = start[0]
    first = np.full((trials, 1), x0, dtype=np.int64)
    return np.concatenate([first, x0 + np.cumsum(hops, axis=1)], axis=1)
