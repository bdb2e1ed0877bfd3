"""Brute-force oracles against the determinant formulas."""

import itertools

import pytest

from tasepkit.core.green import ggf_det, green_det, reachable_configs
from tasepkit.core.lattice import ParticleConfig, SpaceTimeConfig
from tasepkit.core.params import ParameterError
from tasepkit.kernel.detprocess import jump_off_config
from tasepkit.oracle.cycles import (
    cluster_sum,
    cluster_term,
    cycle_decomposition,
    cycle_lemma_allows,
    is_compact_cluster_cycle,
    perm_expansion_terms,
    permutation_sign,
)
from tasepkit.oracle.enumerate import (
    NPath,
    OracleLimitError,
    admissible_pairs,
    enumerate_green,
    enumerate_measure_marginal,
    enumerate_npath,
    npath_weight,
)


def configs(n, window):
    """Strictly decreasing n-tuples with entries in [-window // 2, window)."""
    for combo in itertools.combinations(range(-(window // 2), window), n):
        yield ParticleConfig(tuple(sorted(combo, reverse=True)))


# -- trajectories -------------------------------------------------------------


@pytest.mark.parametrize(
    "y,t",
    [((0,), 5), ((0, -1), 5), ((2, -1), 4), ((0, -1, -2), 3), ((3, 1, 0), 3)],
)
def test_enumerated_green_matches_determinant(params, y, t):
    y = ParticleConfig(y)
    for x in reachable_configs(y, t):
        assert enumerate_green(x, y, t, params) == green_det(x, y, t, params)


def test_enumerate_green_limits(half):
    with pytest.raises(OracleLimitError):
        y = ParticleConfig.step(4)
        enumerate_green(y, y, 1, half)
    with pytest.raises(OracleLimitError):
        y = ParticleConfig.step(1)
        enumerate_green(y, y, 7, half)


# -- N-paths ------------------------------------------------------------------


def test_blocked_stay_has_weight_one(params):
    # particle 1 stays at 1, so particle 2 waiting at 0 is blocked
    npath = NPath(starts=(0, 0), paths=((1, 1), (0, 0)))
    assert npath_weight(npath, params) == 1 - params.p


def test_hop_into_leader_path_has_weight_zero(params):
    npath = NPath(starts=(0, 0), paths=((1, 1), (0, 1)))
    assert npath_weight(npath, params) == 0


@pytest.mark.parametrize("n,span,width", [(1, 4, 1), (2, 3, 2)])
def test_npath_sum_matches_ggf(params, n, span, width):
    count = 0
    for final, initial in admissible_pairs(n, span, width):
        assert enumerate_npath(final, initial, params) == ggf_det(
            final, initial, params
        ), (final, initial)
        count += 1
    assert count > 10


def test_npath_sum_matches_ggf_three_particles(half):
    pairs = itertools.islice(admissible_pairs(3, 3, 3), 0, None, 7)
    for final, initial in itertools.islice(pairs, 60):
        assert enumerate_npath(final, initial, half) == ggf_det(
            final, initial, half
        ), (final, initial)


def test_enumerate_npath_limits(half):
    final = SpaceTimeConfig.of((3, 7))
    initial = SpaceTimeConfig.of((0, 0))
    with pytest.raises(OracleLimitError):
        enumerate_npath(final, initial, half)


# -- auxiliary measure marginal -----------------------------------------------


@pytest.mark.parametrize("big_n,x", [(1, 0), (1, 2), (2, 0), (2, 1), (3, 0)])
def test_marginal_matches_ggf(params, big_n, x):
    window = 6 if big_n < 3 else 5
    p = params.p
    start = max(x, 1)
    for times in itertools.combinations_with_replacement(
        range(start, x + window), big_n
    ):
        final, initial = jump_off_config(times, x)
        want = p**big_n * ggf_det(final, initial, params, strict=False)
        got = enumerate_measure_marginal(times, x, window, params)
        assert got == want, times


def test_marginal_limits(half):
    with pytest.raises(OracleLimitError):
        enumerate_measure_marginal((1, 2, 3, 4), 0, 6, half)
    with pytest.raises(OracleLimitError):
        enumerate_measure_marginal((8,), 0, 6, half)


# -- permutation expansion ----------------------------------------------------


def test_cycle_decomposition():
    assert cycle_decomposition((1, 2, 0, 3)) == [(0, 1, 2), (3,)]
    assert cycle_decomposition((0, 1)) == [(0,), (1,)]
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((1, 2, 0)) == 1


def test_bad_permutation():
    with pytest.raises(ParameterError):
        cycle_decomposition((0, 0, 1))


def test_compact_cluster_detection():
    x = ParticleConfig.of(5, 4, 3, 0)
    assert is_compact_cluster_cycle((0, 1, 2), x, x)
    assert not is_compact_cluster_cycle((1, 2, 3), x, x)
    assert not is_compact_cluster_cycle((0,), x, x)
    assert not is_compact_cluster_cycle(
        (0, 1), x, ParticleConfig.of(5, 3, 2, 0)
    )


@pytest.mark.parametrize("n,window", [(2, 6), (3, 6), (4, 5)])
@pytest.mark.parametrize("t", [0, 1])
def test_only_allowed_cycles_survive(half, n, window, t):
    perms = list(itertools.permutations(range(n)))
    for x in configs(n, window):
        for y in configs(n, window):
            for sigma in perms:
                value = perm_expansion_terms(x, y, t, sigma, half)
                if value != 0:
                    assert cycle_lemma_allows(sigma, x, y, t), (x, y, sigma)


def test_time_zero_only_identity_survives(params):
    for x in configs(3, 5):
        for y in configs(3, 5):
            for sigma in itertools.permutations(range(3)):
                value = perm_expansion_terms(x, y, 0, sigma, params)
                if sigma == (0, 1, 2) and x == y:
                    assert value == 1
                else:
                    assert value == 0


def test_perm_terms_limits(half):
    x = ParticleConfig.step(2)
    with pytest.raises(OracleLimitError):
        perm_expansion_terms(x, x, 2, (0, 1), half)
    big = ParticleConfig.step(6)
    with pytest.raises(OracleLimitError):
        perm_expansion_terms(big, big, 1, tuple(range(6)), half)


def test_cluster_terms(params):
    p, q = params.p, 1 - params.p
    for k in range(1, 7):
        assert cluster_term(k, params) == p ** (k - 1) * q


def test_cluster_sum_is_q(params):
    q = 1 - params.p
    for k in range(1, 7):
        assert cluster_sum(k, params) == q


def test_cluster_size_must_be_positive(half):
    with pytest.raises(ParameterError):
        cluster_term(0, half)
