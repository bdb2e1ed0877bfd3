"""Tests for the Fredholm determinant of the current distribution."""

import math

import pytest

from tasepkit.core.fcore import f_n
from tasepkit.core.green import ggf_det
from tasepkit.core.params import ConvergenceError, ParameterError
from tasepkit.kernel.detprocess import jump_off_config, kernel
from tasepkit.kernel.fredholm import (
    CurrentQuery,
    TruncationPolicy,
    cdf_table,
    fredholm_det,
    inclusion_exclusion_check,
    index_set,
    joint_current_prob,
)


def negative_binomial_cdf(x, a, p):
    """P(t_1 <= a) for a single particle leaving site x from the origin."""
    q = 1 - p
    return sum(
        p ** (x + 1) * q ** (t - x) * math.comb(t, x) for t in range(x, a + 1)
    )


# -- queries ------------------------------------------------------------------


class TestCurrentQuery:
    """Validation of label and threshold lists."""

    def test_valid(self):
        query = CurrentQuery((1, 3), (5, 9), 0, 3)
        assert query.big_x == 3
        assert query.to_dict()["labels"] == [1, 3]

    @pytest.mark.parametrize(
        "labels,thresholds,x,n",
        [
            ((), (), 0, 2),
            ((1, 2), (5,), 0, 2),
            ((2, 1), (5, 5), 0, 2),
            ((1, 3), (5, 5), 0, 2),
            ((1,), (5,), -2, 2),
            ((1,), (5,), 0, 0),
        ],
    )
    def test_invalid(self, labels, thresholds, x, n):
        with pytest.raises(ParameterError):
            CurrentQuery(labels, thresholds, x, n)


def test_index_set_starts_after_threshold():
    query = CurrentQuery((1, 2), (3, 5), 0, 2)
    idx = index_set(query, 6)
    assert [(i.n, i.tau) for i in idx] == [(1, 4), (1, 5), (1, 6), (2, 6)]


def test_initial_horizon(half):
    policy = TruncationPolicy()
    query = CurrentQuery((1,), (10,), 2, 1)
    assert policy.initial_horizon(query, half) == 10 + 4 * 6


# -- single particle ----------------------------------------------------------


@pytest.mark.parametrize("x,a", [(0, 3), (2, 5), (2, 10), (3, 20)])
def test_single_particle_matches_negative_binomial(half, x, a):
    prob, err = joint_current_prob(CurrentQuery((1,), (a,), x, 1), half)
    want = float(negative_binomial_cdf(x, a, half.p))
    assert prob == pytest.approx(want, abs=1e-8)
    assert err < 1e-8


def test_single_particle_other_p(make_params):
    params = make_params("1/3")
    prob, _ = joint_current_prob(CurrentQuery((1,), (8,), 1, 1), params)
    want = float(negative_binomial_cdf(1, 8, params.p))
    assert prob == pytest.approx(want, abs=1e-8)


def test_threshold_below_support_gives_zero(half):
    prob, _ = joint_current_prob(CurrentQuery((1,), (1,), 3, 1), half)
    assert prob == pytest.approx(0.0, abs=1e-10)


# -- two particles ------------------------------------------------------------


def test_leading_particle_marginal(half):
    # particle 1 of two never feels particle 2
    x = 1
    prob, _ = joint_current_prob(CurrentQuery((1,), (7,), x, 2), half)
    want = sum(
        float(half.p * f_n(0, x + 1, t, half)) for t in range(0, 8)
    )
    assert prob == pytest.approx(want, abs=1e-8)


def test_joint_law_of_two_particles(half):
    x, a, b = 1, 6, 8
    prob, _ = joint_current_prob(CurrentQuery((1, 2), (a, b), x, 2), half)
    want = 0
    for t1 in range(1, a + 1):
        for t2 in range(t1, b + 1):
            final, initial = jump_off_config((t1, t2), x)
            want += half.p**2 * ggf_det(final, initial, half)
    assert prob == pytest.approx(float(want), abs=1e-8)


# -- exact cross-checks -------------------------------------------------------


def test_inclusion_exclusion_terminates_at_fredholm(half):
    query = CurrentQuery((1, 2), (2, 3), 0, 2)
    window = 6
    size = len(index_set(query, window))
    assert size == 7
    full = inclusion_exclusion_check(query, size, window, half)
    assert full == fredholm_det(query, window, half)


def test_inclusion_exclusion_first_order_is_one_minus_trace(half):
    query = CurrentQuery((1, 2), (2, 3), 0, 2)
    first = inclusion_exclusion_check(query, 1, 6, half)
    trace = sum(kernel(i, i, 0, 2, half) for i in index_set(query, 6))
    assert first == 1 - trace
    assert first < 1


def test_history_records_doublings(half):
    policy = TruncationPolicy()
    joint_current_prob(CurrentQuery((1,), (4,), 1, 1), half, policy)
    horizons = [h for h, _ in policy.history]
    assert horizons[1] == 2 * horizons[0]
    assert len(horizons) >= 3


def test_non_stabilising_horizon_raises(half):
    policy = TruncationPolicy(horizon=2, stab_tol=1e-30, max_doublings=1)
    with pytest.raises(ConvergenceError):
        joint_current_prob(CurrentQuery((1,), (1,), 0, 1), half, policy)


def test_cdf_table_is_monotone(half):
    queries = [CurrentQuery((1,), (a,), 1, 1) for a in range(1, 9)]
    rows = cdf_table(queries, half)
    probs = [prob for _, prob, _ in rows]
    assert probs == sorted(probs)
    assert probs[-1] == pytest.approx(
        float(negative_binomial_cdf(1, 8, half.p)), abs=1e-8
    )


# -- invariants ---------------------------------------------------------------


@pytest.mark.parametrize("p", ["1/3", "1/2", "2/3"])
def test_conjugation_leaves_determinant_unchanged(make_params, p):
    params = make_params(p, "float")
    query = CurrentQuery((1, 2), (3, 5), 1, 2)
    plain = fredholm_det(query, 12, params, 1.0)
    for beta in (1.0 / math.sqrt(float(params.q)), 0.8):
        assert fredholm_det(query, 12, params, beta) == pytest.approx(
            plain, abs=1e-10
        )


def test_threshold_at_horizon_drops_the_label(make_params):
    params = make_params("1/2", "float")
    horizon = 20
    full = CurrentQuery((1, 3), (4, horizon), 0, 3)
    reduced = CurrentQuery((1,), (4,), 0, 3)
    assert index_set(full, horizon) == index_set(reduced, horizon)
    assert fredholm_det(full, horizon, params) == fredholm_det(
        reduced, horizon, params
    )


def test_large_threshold_reduces_to_fewer_labels(half):
    both, err_both = joint_current_prob(
        CurrentQuery((1, 2), (5, 40), 1, 2), half
    )
    first, err_first = joint_current_prob(
        CurrentQuery((1,), (5,), 1, 2), half
    )
    slack = 2 * max(err_both, err_first) + 1e-8
    assert both == pytest.approx(first, abs=slack)


def test_two_label_probability_is_monotone(half):
    def value(a, b):
        prob, _ = joint_current_prob(CurrentQuery((1, 2), (a, b), 1, 2), half)
        return prob

    column = [value(a, 8) for a in range(2, 8)]
    assert all(u <= v + 2e-8 for u, v in zip(column, column[1:])), column
    row = [value(4, b) for b in range(3, 11)]
    assert all(u <= v + 2e-8 for u, v in zip(row, row[1:])), row
    assert column[-1] > column[0] and row[-1] > row[0]
