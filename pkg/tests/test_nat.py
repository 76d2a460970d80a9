import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fejercert.nat import (
    ceil_exp,
    ceil_frac,
    ceil_sqrt_frac,
    ceil_sqrt_int,
    exact_fraction,
    monus,
)


@given(st.integers(-(10**12), 10**12), st.integers(1, 10**6))
def test_ceil_frac_matches_math(num, den):
    q = Fraction(num, den)
    assert ceil_frac(q) == math.ceil(q)


@given(st.integers(0, 10**18))
def test_ceil_sqrt_int_definition(n):
    t = ceil_sqrt_int(n)
    assert t * t >= n
    assert t == 0 or (t - 1) * (t - 1) < n


@given(st.integers(0, 10**9), st.integers(1, 10**4))
def test_ceil_sqrt_frac_definition(num, den):
    q = Fraction(num, den)
    t = ceil_sqrt_frac(q)
    assert t * t >= q
    assert t == 0 or Fraction((t - 1) * (t - 1)) < q


@pytest.mark.parametrize("k,expected", [(0, 1), (1, 3), (2, 8), (3, 21), (5, 149)])
def test_ceil_exp_small(k, expected):
    assert ceil_exp(k) == expected


def test_ceil_exp_large_consistent():
    v = ceil_exp(400)
    import mpmath

    with mpmath.workdps(220):
        assert mpmath.e**400 <= v < mpmath.e**400 + 1


def test_monus():
    assert monus(5, 3) == 2
    assert monus(3, 5) == 0
    assert monus(0, 0) == 0


def test_exact_fraction_of_float_is_exact():
    assert exact_fraction(0.5) == Fraction(1, 2)
    assert float(exact_fraction(0.3)) == 0.3
