import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ergofluc.errors import GrowthOverflowError, InvalidParameterError
from ergofluc.rates import (GrowthFunction, RateParams, decimal_digits, delta,
                            iterate_growth, learnable_from_modulus,
                            metastability_bound, modulus_from_weak_type)

lam_eps = st.floats(min_value=0.01, max_value=0.99, allow_nan=False)


def test_modulus_hand_value():
    # (c * n1 / (eps * lam))^2 with everything = 1/2 except c = 2, n1 = 1
    assert modulus_from_weak_type(RateParams(2.0, 1.0), 0.5, 0.5) == 64.0


def test_delta_hand_values():
    p = RateParams(1.0, 1.0)
    assert delta(p, 0.5, 0.5) == 256.0
    assert delta(p, 0.5, 0.25) == 1024.0


@given(lam_eps, lam_eps, st.floats(min_value=0.1, max_value=4.0),
       st.floats(min_value=0.0, max_value=4.0))
def test_delta_is_composed_from_modulus(lam, eps, c, n1):
    # bit-for-bit: the closed form must be written as the composition
    p = RateParams(c, n1)
    assert delta(p, lam, eps) == learnable_from_modulus(
        lambda l, e: modulus_from_weak_type(p, e, l), lam, eps)


@given(lam_eps, lam_eps, lam_eps)
def test_rates_nonincreasing_in_eps_and_lam(lam, eps, other):
    p = RateParams(1.0, 1.0)
    lo, hi = min(eps, other), max(eps, other)
    assert modulus_from_weak_type(p, hi, lam) <= modulus_from_weak_type(p, lo, lam)
    assert delta(p, lam, hi) <= delta(p, lam, lo)
    lo, hi = min(lam, other), max(lam, other)
    assert delta(p, hi, eps) <= delta(p, lo, eps)


def test_rate_params_validation():
    with pytest.raises(InvalidParameterError):
        RateParams(0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        RateParams(1.0, -0.5)


# growth functions and iteration

def test_affine_iteration_orbit():
    g = GrowthFunction.affine(1, 1)  # g(n) = n + 1, so n -> 2n + 1
    assert [iterate_growth(g, i, 0) for i in range(5)] == [0, 1, 3, 7, 15]


def test_constant_growth_iteration():
    g = GrowthFunction.constant(1)
    assert iterate_growth(g, 5, 0) == 5


def test_zero_growth_fixes_origin():
    g = GrowthFunction.constant(0)
    for i in (0, 1, 10, 100):
        assert iterate_growth(g, i, 0) == 0


def test_table_defaults_to_zero_past_end():
    g = GrowthFunction.from_table([3, 1])
    assert g(0) == 3 and g(1) == 1 and g(2) == 0 and g(99) == 0


def test_growth_rejects_negative_argument():
    with pytest.raises(InvalidParameterError):
        GrowthFunction.constant(1)(-1)


def test_growth_json_round_trip():
    for g in (GrowthFunction.affine(1, 2), GrowthFunction.constant(7),
              GrowthFunction.from_table([0, 2, 5])):
        assert GrowthFunction.from_json(g.to_json()) == g


def test_iteration_overflow():
    # multiply by ~10^1000 per step; the cap is crossed after ~100 steps
    g = GrowthFunction.affine(10 ** 1000 - 1, 1)
    with pytest.raises(GrowthOverflowError):
        iterate_growth(g, 200, 0)
    # but short iterations stay exact bigints
    assert iterate_growth(g, 2, 0) == 10 ** 1000 + 1


def test_decimal_digits_small():
    assert decimal_digits(0) == 1
    assert decimal_digits(9) == 1
    assert decimal_digits(10) == 2
    assert decimal_digits(10 ** 6 - 1) == 6


@given(st.integers(min_value=0, max_value=10 ** 30))
def test_decimal_digits_matches_str(n):
    assert decimal_digits(n) == len(str(n))


def test_decimal_digits_past_str_limit():
    assert decimal_digits(10 ** 99999) == 100000


@given(st.integers(0, 30), st.integers(0, 30), st.integers(0, 50),
       st.integers(0, 3), st.integers(0, 5))
def test_iteration_monotonicity(i, j, start, a, b):
    g = GrowthFunction.affine(a, b)
    lo, hi = min(i, j), max(i, j)
    assert iterate_growth(g, lo, start) <= iterate_growth(g, hi, start)
    assert iterate_growth(g, i, start) <= iterate_growth(g, i, start + 1)
    bigger = GrowthFunction.affine(a, b + 1)
    assert iterate_growth(g, i, start) <= iterate_growth(bigger, i, start)


@given(lam_eps, lam_eps, st.floats(min_value=0.1, max_value=2.0))
def test_metastability_bound_is_iterated_modulus(lam, eps, c):
    p = RateParams(c, 1.0)
    g = GrowthFunction.affine(1, 2)
    steps = math.ceil(modulus_from_weak_type(p, eps, lam))
    if steps > 5000:  # doubling orbits of this length get expensive
        return
    expected = iterate_growth(g, steps, 0)
    assert metastability_bound(
        lambda l, e: modulus_from_weak_type(p, e, l), lam, eps, g) == expected
