"""Permutation expansion of the Green determinant at t = 0 and t = 1.

Permutations are 0-based tuples: ``sigma[i]`` is the image of i.
"""

from __future__ import annotations

from typing import Sequence

from ..core.fcore import f_n
from ..core.lattice import ParticleConfig, require_same_size
from ..core.params import ModelParams, ParameterError, Scalar
from .enumerate import OracleLimitError

MAX_PERM_SIZE = 5


def _check_permutation(sigma: Sequence[int], size: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(size)):
        raise ParameterError(f"{sigma} is not a permutation of 0..{size - 1}")
    return sigma


def perm_expansion_terms(
    x: ParticleConfig,
    y: ParticleConfig,
    t: int,
    sigma: Sequence[int],
    params: ModelParams,
) -> Scalar:
    """prod_i F_{sigma_i - i}(x_i - y_{sigma_i}, t), without the sign.

    Raises:
        OracleLimitError: for t outside {0, 1} or N > 5.
    """
    size = require_same_size(x, y)
    if t not in (0, 1) or size > MAX_PERM_SIZE:
        raise OracleLimitError(
            f"permutation terms need t in {{0, 1}} and N <= {MAX_PERM_SIZE}"
        )
    sigma = _check_permutation(sigma, size)
    value = params.one
    for i, s in enumerate(sigma):
        value *= f_n(s - i, x[i] - y[s], t, params)
        if value == 0:
            return params.zero
    return value


def permutation_sign(sigma: Sequence[int]) -> int:
    """+1 for even permutations, -1 for odd ones."""
    sign = 1
    for cycle in cycle_decomposition(sigma):
        if len(cycle) % 2 == 0:
            sign = -sign
    return sign


def cycle_decomposition(sigma: Sequence[int]) -> list[tuple[int, ...]]:
    """Disjoint cycles, each listed from its smallest element."""
    sigma = _check_permutation(sigma, len(sigma))
    seen: set[int] = set()
    cycles = []
    for start in range(len(sigma)):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        nxt = sigma[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = sigma[nxt]
        cycles.append(tuple(cycle))
    return cycles


def is_compact_cluster_cycle(
    cycle: Sequence[int], x: ParticleConfig, y: ParticleConfig
) -> bool:
    """True for i -> i+1 -> ... -> i+k-1 -> i over a packed cluster.

    The cluster must sit at the same sites in x and y:
    y_i = x_i and x_{i+j} = y_{i+j} = x_i - j.
    Trivial cycles are not clusters.
    """
    k = len(cycle)
    if k < 2:
        return False
    i = cycle[0]
    if tuple(cycle) != tuple(range(i, i + k)):
        return False
    return all(x[i + j] == x[i] - j and y[i + j] == x[i] - j for j in range(k))


def cycle_lemma_allows(
    sigma: Sequence[int], x: ParticleConfig, y: ParticleConfig, t: int
) -> bool:
    """Whether a term may be nonzero: identity with x = y at t = 0,
    only trivial or compact-cluster cycles at t = 1."""
    cycles = cycle_decomposition(sigma)
    if t == 0:
        return all(len(c) == 1 for c in cycles) and tuple(x) == tuple(y)
    return all(
        len(c) == 1 or is_compact_cluster_cycle(c, x, y) for c in cycles
    )


def cluster_term(k: int, params: ModelParams) -> Scalar:
    """Signed t = 1 term of a single compact k-cluster cycle.

    Evaluated from the F functions on the configuration
    x = y = (0, -1, ..., -k+1); the closed form is p^{k-1} q.
    """
    if k < 1:
        raise ParameterError(f"cluster size must be positive, got {k}")
    x = ParticleConfig.step(k)
    sigma = tuple(range(1, k)) + (0,)
    if k == 1:
        sigma = (0,)
    value = params.one
    for i, s in enumerate(sigma):
        value *= f_n(s - i, x[i] - x[s], 1, params)
    return permutation_sign(sigma) * value


def cluster_sum(k: int, params: ModelParams) -> Scalar:
    """q * sum_{i<k} C_i + C_k, which equals q for every k."""
    return params.qprob * sum(
        (cluster_term(i, params) for i in range(1, k)), params.zero
    ) + cluster_term(k, params)
