"""Tests for the F functions, binomials and determinants."""

import math
from fractions import Fraction

import numpy as np
import pytest

from tasepkit.core.fcore import binomial, coefficient, f_n, f_tilde
from tasepkit.core.linalg import bareiss_det, det, lu_det
from tasepkit.core.params import ModelParams, ParameterError

GRID_N = range(-3, 4)
GRID_X = range(-5, 7)


# -- reference values ---------------------------------------------------------


def test_f0_one_step(params):
    q = 1 - params.p
    assert f_n(0, 0, 1, params) == q
    assert f_n(0, 1, 1, params) == params.p
    assert f_n(0, 2, 1, params) == 0
    assert f_n(0, -1, 1, params) == 0


def test_f0_at_time_zero_is_delta(params):
    for x in GRID_X:
        assert f_n(0, x, 0, params) == (1 if x == 0 else 0)


def test_f_vanishes_before_time_zero(params):
    for n in GRID_N:
        for x in GRID_X:
            assert f_n(n, x, -1, params) == 0
            assert f_n(n, x, -4, params) == 0


def test_f0_binomial_value(half):
    assert f_n(0, 2, 5, half) == Fraction(10, 32)


def test_f0_is_binomial_law(params):
    p, q = params.p, 1 - params.p
    for t in range(8):
        for x in range(t + 1):
            want = math.comb(t, x) * p**x * q ** (t - x)
            assert f_n(0, x, t, params) == want


def test_f_minus_one(params):
    q = 1 - params.p
    assert f_n(-1, -1, 1, params) == -q


def test_f_tilde_at_negative_time(params):
    # [w^0] (p + q w)^(-1)
    assert f_tilde(0, -1, -1, params) == 1 / params.p
    assert f_n(0, -1, -1, params) == 0


def test_f_one_at_time_one(params):
    assert f_n(1, 1, 1, params) == params.p


def test_shifted_f_at_time_one_alternates(params):
    q = 1 - params.p
    for k in range(1, 6):
        assert f_n(1 - k, 1 - k, 1, params) == (-1) ** (k - 1) * q


# -- identities ---------------------------------------------------------------


def test_time_recursion(params):
    p, q = params.p, 1 - params.p
    for n in GRID_N:
        for x in GRID_X:
            for t in range(1, 8):
                assert f_n(n, x, t, params) == q * f_n(
                    n, x, t - 1, params
                ) + p * f_n(n, x - 1, t - 1, params)


def test_time_recursion_extends_to_all_times(params):
    p, q = params.p, 1 - params.p
    for n in GRID_N:
        for x in GRID_X:
            for t in range(-4, 1):
                assert f_tilde(n, x, t, params) == q * f_tilde(
                    n, x, t - 1, params
                ) + p * f_tilde(n, x - 1, t - 1, params)


def test_index_recursion(params):
    for n in GRID_N:
        for x in GRID_X:
            for t in range(-3, 8):
                assert f_n(n, x + 1, t, params) == f_n(
                    n, x, t, params
                ) - f_n(n - 1, x, t, params)


def test_summation_identity(params):
    p = params.p
    for n in range(-2, 3):
        for x in range(-3, 5):
            for t1 in range(-3, 4):
                for t2 in range(t1, t1 + 5):
                    total = sum(
                        f_tilde(n, x, t, params) for t in range(t1, t2 + 1)
                    )
                    assert p * total == f_tilde(
                        n + 1, x + 1, t2 + 1, params
                    ) - f_tilde(n + 1, x + 1, t1, params)


def test_support(params):
    for n in GRID_N:
        for x in GRID_X:
            for t in range(0, 6):
                value = f_n(n, x, t, params)
                if n <= 0 and not n <= x <= t:
                    assert value == 0
                if n > 0 and x > t:
                    assert value == 0


# -- arithmetic modes ---------------------------------------------------------


def test_float_mode_agrees_with_exact(make_params):
    exact = make_params("2/3")
    fl = make_params("2/3", "float")
    for n in GRID_N:
        for x in GRID_X:
            for t in range(-3, 12):
                want = float(f_n(n, x, t, exact))
                got = f_n(n, x, t, fl)
                assert isinstance(got, float)
                assert got == pytest.approx(want, rel=1e-12, abs=1e-10)


def test_exact_mode_rejects_float_scalars(make_params):
    with pytest.raises(ParameterError):
        make_params().scalar(0.5)


@pytest.mark.parametrize("bad", ["0", "1", "3/2", "-1/4", "half"])
def test_invalid_probability(bad):
    with pytest.raises(ParameterError):
        ModelParams(p=bad)


def test_float_probability_parses_decimally():
    assert ModelParams(p=0.3).p == Fraction(3, 10)


def test_params_dict_form():
    params = ModelParams.from_dict({"p": "2/6", "mode": "float"})
    assert params.to_dict() == {"p": "1/3", "mode": "float"}
    with pytest.raises(ParameterError):
        ModelParams.from_dict({"mode": "exact"})


# -- binomials and coefficients -----------------------------------------------


@pytest.mark.parametrize(
    "a,b,want",
    [(5, 2, 10), (5, 7, 0), (5, -1, 0), (-1, 3, -1), (-2, 2, 3), (0, 0, 1)],
)
def test_binomial(a, b, want):
    assert binomial(a, b) == want


def test_binomial_beyond_cache_cap():
    assert binomial(2000, 3) == math.comb(2000, 3)


def test_coefficient_of_geometric_series(half):
    one = Fraction(1)
    # (1 - w)^(-2) = sum (k + 1) w^k
    assert coefficient([(one, -one, -2)], 6, half) == 7
    assert coefficient([(one, -one, -2)], -1, half) == 0


# -- determinants -------------------------------------------------------------


def test_bareiss_matches_lu_on_integer_matrices():
    rng = np.random.default_rng(11)
    for size in range(1, 6):
        for _ in range(10):
            m = rng.integers(-4, 5, size=(size, size))
            exact = bareiss_det([[Fraction(int(v)) for v in row] for row in m])
            assert float(exact) == pytest.approx(
                lu_det(m.astype(float)), abs=1e-8
            )
            assert float(exact) == pytest.approx(np.linalg.det(m), abs=1e-8)


def test_bareiss_pivots_and_singular():
    assert bareiss_det([[0, 1], [1, 0]]) == -1
    assert bareiss_det([[1, 2], [2, 4]]) == 0
    assert bareiss_det([]) == 1


def test_det_follows_mode(make_params):
    m = [[Fraction(1, 3), Fraction(1, 2)], [Fraction(1, 4), Fraction(1)]]
    assert det(m, make_params()) == Fraction(1, 3) - Fraction(1, 8)
    assert isinstance(det(m, make_params(mode="float")), float)
