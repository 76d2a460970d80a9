"""Exact arithmetic over the naturals for certificate formulas.

Every certified bound in this package is a Python int (arbitrary
precision), and every ceiling of an irrational-valued expression
(square roots, powers of e) is computed exactly by integer methods
so no float rounding can leak into a bound.
"""

from __future__ import annotations

import math
from fractions import Fraction


class DomainError(ValueError):
    """Evaluation outside a modulus' declared domain."""


def as_nat(value, what: str = "value") -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{what} must be an int, got {type(value).__name__}")
    if value < 0:
        raise ValueError(f"{what} must be >= 0, got {value}")
    return value


def monus(a: int, b: int) -> int:
    """Truncated subtraction: max(a - b, 0)."""
    return a - b if a > b else 0


def ceil_frac(q: Fraction) -> int:
    """Exact ceiling of a rational."""
    return -((-q.numerator) // q.denominator)


def ceil_sqrt_int(n: int) -> int:
    """Smallest t >= 0 with t*t >= n."""
    if n <= 0:
        return 0
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def ceil_sqrt_frac(q: Fraction) -> int:
    """Smallest t >= 0 with t*t >= q, for rational q."""
    if q <= 0:
        return 0
    t = ceil_sqrt_int(ceil_frac(q))
    # ceil_frac can overshoot by < 1; walk down to the least valid t.
    while t >= 1 and (t - 1) * (t - 1) * q.denominator >= q.numerator:
        t -= 1
    return t


def ceil_exp(k: int) -> int:
    """Exact ceiling of e**k for a natural k."""
    as_nat(k, "exponent")
    if k == 0:
        return 1
    if k <= 256:
        # float exp is exact enough away from integer boundaries; verify
        # against a rational bound before trusting it.
        guess = math.ceil(math.exp(k))
    else:
        import mpmath

        with mpmath.workdps(30 + int(0.45 * k)):
            guess = int(mpmath.ceil(mpmath.e**k))
    # e**k is irrational for k >= 1, so the true value is strictly between
    # guess-1 and guess iff exp(k) > guess-1 and exp(k) <= guess.  Check with
    # mpmath at enough precision to certify the ceiling.
    import mpmath

    with mpmath.workdps(40 + int(0.45 * k)):
        val = mpmath.e**k
        while val > guess:
            guess += 1
        while guess >= 1 and val <= guess - 1:
            guess -= 1
    return guess


def exact_fraction(x) -> Fraction:
    """Exact rational value of a float/int/Fraction parameter."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("parameter must be finite")
        return Fraction(x)
    raise TypeError(f"cannot interpret {type(x).__name__} exactly")
