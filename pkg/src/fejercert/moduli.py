"""Quantitative moduli: total boundedness, Fejer-monotonicity data,
uniform closedness, and approximation families.

A Modulus is a closed-form total function on the naturals carrying a
monotonicity certificate.  Closed forms (rather than opaque callables)
keep the rate recursions evaluable at astronomically large arguments
and serializable; arbitrary user functions are admitted only as finite
tables with a declared tail.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .nat import (
    DomainError,
    as_nat,
    ceil_exp,
    ceil_frac,
    ceil_sqrt_frac,
    ceil_sqrt_int,
    exact_fraction,
    monus,
)


# ---------------------------------------------------------------------------
# Modulus expression tree
# ---------------------------------------------------------------------------


class Modulus:
    """Total function N -> N with a monotonicity certificate.

    ``monotone=True`` asserts eval(n1) <= eval(n2) whenever n1 <= n2;
    built-in constructors derive the flag structurally, and
    ``spot_check_monotone`` samples it.
    """

    kind = "abstract"
    monotone = False

    def __call__(self, n: int) -> int:
        raise NotImplementedError

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        raise NotImplementedError(f"{self.kind} modulus does not serialize")

    @staticmethod
    def from_json(obj: dict) -> "Modulus":
        return _modulus_from_json(obj)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    # -- helpers ------------------------------------------------------------

    def spot_check_monotone(self, upto: int = 64) -> bool:
        prev = self(0)
        for n in range(1, upto + 1):
            cur = self(n)
            if cur < prev:
                return False
            prev = cur
        return True

    def __repr__(self):
        try:
            return f"Modulus({json.dumps(self.to_json())})"
        except NotImplementedError:
            return f"Modulus<{self.kind}>"


def _frac_to_json(q: Fraction):
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _frac_from_json(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)
    raise ValueError(f"expected exact rational string, got {s!r}")


@dataclass(frozen=True)
class ConstModulus(Modulus):
    value: int

    kind = "const"
    monotone = True

    def __post_init__(self):
        as_nat(self.value, "const value")

    def __call__(self, n):
        as_nat(n, "argument")
        return self.value

    def to_json(self):
        return {"kind": "const", "value": str(self.value), "monotone": True}


@dataclass(frozen=True)
class AffineModulus(Modulus):
    a: int
    b: int

    kind = "affine"
    monotone = True

    def __post_init__(self):
        as_nat(self.a, "affine slope")
        as_nat(self.b, "affine offset")

    def __call__(self, n):
        as_nat(n, "argument")
        return self.a * n + self.b

    def to_json(self):
        return {"kind": "affine", "a": str(self.a), "b": str(self.b), "monotone": True}


@dataclass(frozen=True)
class PolyModulus(Modulus):
    coeffs: tuple  # coeffs[i] multiplies n**i

    kind = "poly"
    monotone = True

    def __post_init__(self):
        for c in self.coeffs:
            as_nat(c, "poly coefficient")

    def __call__(self, n):
        as_nat(n, "argument")
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def to_json(self):
        return {"kind": "poly", "coeffs": [str(c) for c in self.coeffs], "monotone": True}


@dataclass(frozen=True)
class CeilPowModulus(Modulus):
    """n -> ceil(coeff * (n+1)**power), coeff a positive rational."""

    coeff: Fraction
    power: int

    kind = "ceil_pow"
    monotone = True

    def __post_init__(self):
        if self.coeff < 0:
            raise ValueError("ceil_pow coefficient must be >= 0")
        as_nat(self.power, "ceil_pow power")

    def __call__(self, n):
        as_nat(n, "argument")
        return ceil_frac(self.coeff * (n + 1) ** self.power)

    def to_json(self):
        return {
            "kind": "ceil_pow",
            "coeff": _frac_to_json(self.coeff),
            "power": self.power,
            "monotone": True,
        }


@dataclass(frozen=True)
class CeilSqrtModulus(Modulus):
    """n -> smallest t with t*t >= n, i.e. ceil(sqrt(n))."""

    kind = "ceil_sqrt"
    monotone = True

    def __call__(self, n):
        as_nat(n, "argument")
        return ceil_sqrt_int(n)

    def to_json(self):
        return {"kind": "ceil_sqrt", "monotone": True}


@dataclass(frozen=True)
class CeilLog2Modulus(Modulus):
    """n -> ceil(log2(n + shift)) + plus  (shift >= 1)."""

    shift: int = 1
    plus: int = 0

    kind = "ceil_log2"
    monotone = True

    def __post_init__(self):
        if self.shift < 1:
            raise ValueError("ceil_log2 shift must be >= 1")
        as_nat(self.plus, "ceil_log2 offset")

    def __call__(self, n):
        as_nat(n, "argument")
        m = n + self.shift
        return (m - 1).bit_length() + self.plus  # ceil(log2(m)) for m >= 1

    def to_json(self):
        return {"kind": "ceil_log2", "shift": self.shift, "plus": self.plus, "monotone": True}


class TableModulus(Modulus):
    """Finite table with an optional default tail.

    Without a tail, evaluation beyond the table raises DomainError.
    With a (monotone) tail, eval(n) = tail(n) for n >= len(values).
    """

    kind = "table"

    def __init__(self, values: Sequence[int], tail: Optional[Modulus] = None):
        if not values:
            raise ValueError("table must be nonempty")
        self.values = tuple(as_nat(v, "table entry") for v in values)
        if tail is not None and not tail.monotone:
            raise ValueError("table tail must be a monotone modulus")
        self.tail = tail
        mono = all(a <= b for a, b in zip(self.values, self.values[1:]))
        if mono and tail is not None:
            mono = tail(len(self.values)) >= self.values[-1]
        self.monotone = mono

    def __call__(self, n):
        as_nat(n, "argument")
        if n < len(self.values):
            return self.values[n]
        if self.tail is None:
            raise DomainError(
                f"table modulus of length {len(self.values)} evaluated at {n} with no tail"
            )
        return self.tail(n)

    def to_json(self):
        obj = {"kind": "table", "values": [str(v) for v in self.values], "monotone": self.monotone}
        if self.tail is not None:
            obj["tail"] = self.tail.to_json()
        return obj

    def __eq__(self, other):
        return (
            isinstance(other, TableModulus)
            and self.values == other.values
            and self.tail == other.tail
        )

    def __hash__(self):
        return hash((self.values, self.tail))


@dataclass(frozen=True)
class ComposeModulus(Modulus):
    outer: Modulus
    inner: Modulus

    kind = "compose"

    @property
    def monotone(self):
        return self.outer.monotone and self.inner.monotone

    def __call__(self, n):
        return self.outer(self.inner(n))

    def to_json(self):
        return {"kind": "compose", "outer": self.outer.to_json(), "inner": self.inner.to_json()}


@dataclass(frozen=True)
class MaxModulus(Modulus):
    parts: tuple

    kind = "max"

    @property
    def monotone(self):
        return all(p.monotone for p in self.parts)

    def __call__(self, n):
        return max(p(n) for p in self.parts)

    def to_json(self):
        return {"kind": "max", "parts": [p.to_json() for p in self.parts]}


@dataclass(frozen=True)
class SumModulus(Modulus):
    parts: tuple

    kind = "sum"

    @property
    def monotone(self):
        return all(p.monotone for p in self.parts)

    def __call__(self, n):
        return sum(p(n) for p in self.parts)

    def to_json(self):
        return {"kind": "sum", "parts": [p.to_json() for p in self.parts]}


@dataclass(frozen=True)
class MonusModulus(Modulus):
    """n -> of(n) - sub, rejecting evaluations where of(n) < floor."""

    of: Modulus
    sub: int
    floor: int = 0  # minimum required value of of(n) before subtracting

    kind = "monus"

    @property
    def monotone(self):
        return self.of.monotone

    def __call__(self, n):
        v = self.of(n)
        if v < self.floor:
            raise DomainError(f"modulus value {v} below required floor {self.floor} at n={n}")
        return monus(v, self.sub)

    def to_json(self):
        return {"kind": "monus", "of": self.of.to_json(), "sub": str(self.sub), "floor": self.floor}


@dataclass(frozen=True)
class BallTbModulus(Modulus):
    """Total-boundedness modulus of a norm ball in R^dim:
    k -> ceil(2(k+1) sqrt(dim) * bound) ** dim."""

    dim: int
    bound: Fraction

    kind = "tb_ball"
    monotone = True

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if self.bound <= 0:
            raise ValueError("norm bound must be > 0")

    def __call__(self, n):
        as_nat(n, "argument")
        side = ceil_sqrt_frac(Fraction(4 * (n + 1) ** 2 * self.dim) * self.bound * self.bound)
        return side**self.dim

    def to_json(self):
        return {
            "kind": "tb_ball",
            "dim": self.dim,
            "bound": _frac_to_json(self.bound),
            "monotone": True,
        }


@dataclass(frozen=True)
class ConvexHullTbModulus(Modulus):
    """Total-boundedness modulus of the convex hull of a set with modulus
    ``gamma`` and norm bound ``bound``."""

    gamma: Modulus
    bound: Fraction

    kind = "conv_hull"

    def __post_init__(self):
        if self.bound <= 0:
            raise ValueError("norm bound must be > 0")

    @property
    def monotone(self):
        return self.gamma.monotone

    def __call__(self, k):
        as_nat(k, "argument")
        g = self.gamma(4 * k + 3)
        if g == 0:
            raise DomainError("inner modulus must be >= 1 for the hull construction")
        n = g - 1
        m = ceil_frac(2 * (k + 1) * (n + 1) * (self.bound + Fraction(1, 4 * k + 4))) - 1
        side = ceil_sqrt_int(4 * (m + 1) ** 2 * (n + 1))
        return side ** (n + 1)

    def to_json(self):
        return {
            "kind": "conv_hull",
            "gamma": self.gamma.to_json(),
            "bound": _frac_to_json(self.bound),
        }


class DerivedModulus(Modulus):
    """Internal closed-over modulus (rate machinery); not serializable."""

    kind = "derived"

    def __init__(self, fn: Callable[[int], int], name: str, monotone: bool):
        self.fn = fn
        self.name = name
        self.monotone = monotone

    def __call__(self, n):
        as_nat(n, "argument")
        return self.fn(n)

    def __repr__(self):
        return f"Modulus<derived:{self.name}>"


_KINDS = {
    "const": lambda o: ConstModulus(int(o["value"])),
    "affine": lambda o: AffineModulus(int(o["a"]), int(o["b"])),
    "poly": lambda o: PolyModulus(tuple(int(c) for c in o["coeffs"])),
    "ceil_pow": lambda o: CeilPowModulus(_frac_from_json(o["coeff"]), int(o["power"])),
    "ceil_sqrt": lambda o: CeilSqrtModulus(),
    "ceil_log2": lambda o: CeilLog2Modulus(int(o.get("shift", 1)), int(o.get("plus", 0))),
    "table": lambda o: TableModulus(
        [int(v) for v in o["values"]],
        Modulus.from_json(o["tail"]) if o.get("tail") else None,
    ),
    "compose": lambda o: ComposeModulus(
        Modulus.from_json(o["outer"]), Modulus.from_json(o["inner"])
    ),
    "max": lambda o: MaxModulus(tuple(Modulus.from_json(p) for p in o["parts"])),
    "sum": lambda o: SumModulus(tuple(Modulus.from_json(p) for p in o["parts"])),
    "monus": lambda o: MonusModulus(
        Modulus.from_json(o["of"]), int(o["sub"]), int(o.get("floor", 0))
    ),
    "tb_ball": lambda o: BallTbModulus(int(o["dim"]), _frac_from_json(o["bound"])),
    "conv_hull": lambda o: ConvexHullTbModulus(
        Modulus.from_json(o["gamma"]), _frac_from_json(o["bound"])
    ),
}


def _modulus_from_json(obj) -> Modulus:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"not a modulus object: {obj!r}")
    kind = obj["kind"]
    if kind not in _KINDS:
        raise ValueError(f"unknown modulus kind {kind!r}")
    return _KINDS[kind](obj)


# convenience constructors ---------------------------------------------------


def const(c: int) -> Modulus:
    return ConstModulus(c)


def affine(a: int, b: int) -> Modulus:
    return AffineModulus(a, b)


def identity() -> Modulus:
    return AffineModulus(1, 0)


# ---------------------------------------------------------------------------
# Conversions and constructions on moduli of total boundedness
# ---------------------------------------------------------------------------


def modulus_i_to_ii(alpha: Modulus) -> Modulus:
    """From a net-count modulus to a pair-collision modulus:
    gamma(k) = alpha(2k+1) + 1."""
    return SumModulus((ComposeModulus(alpha, AffineModulus(2, 1)), ConstModulus(1)))


def modulus_ii_to_i(gamma: Modulus) -> Modulus:
    """From a pair-collision modulus to a net-count modulus:
    alpha(k) = gamma(k) - 1; rejects any observed gamma(k) = 0."""
    return MonusModulus(gamma, 1, floor=1)


def tb_modulus_interval() -> Modulus:
    """Pair-collision modulus k -> k+1 for the unit interval [0, 1]."""
    return AffineModulus(1, 1)


def tb_modulus_ball(n: int, b) -> Modulus:
    """Pair-collision modulus for {x in R^n : ||x|| <= b}."""
    return BallTbModulus(n, exact_fraction(b))


def tb_modulus_closure(gamma: Modulus) -> Modulus:
    """The closure of a set keeps its pair-collision modulus."""
    return gamma


def tb_modulus_convex_hull(gamma: Modulus, b) -> Modulus:
    """Pair-collision modulus for the convex hull of a set with modulus
    ``gamma`` whose points have norm <= b."""
    return ConvexHullTbModulus(gamma, exact_fraction(b))


def majorant(m: Modulus, cap: Optional[int] = None) -> Modulus:
    """Pointwise-running-maxf^M(n) = max_{i<=n} f(i).

    Monotone moduli are their own majorant.  Tables with a monotone tail
    majorize in closed form.  Any other non-monotone modulus needs an
    evaluation cap; the result raises DomainError beyond it.
    """
    if m.monotone:
        return m
    if isinstance(m, TableModulus) and m.tail is not None:
        running = []
        acc = 0
        for v in m.values:
            acc = max(acc, v)
            running.append(acc)
        return TableModulus(running, tail=MaxModulus((ConstModulus(acc), m.tail)))
    if cap is None:
        raise DomainError("majorant of a non-monotone modulus requires an evaluation cap")
    memo = [m(0)]

    def scan(n: int) -> int:
        if n > cap:
            raise DomainError(f"majorant evaluated at {n} beyond its cap {cap}")
        while len(memo) <= n:
            memo.append(max(memo[-1], m(len(memo))))
        return memo[n]

    return DerivedModulus(scan, f"majorant(cap={cap})", monotone=True)


# ---------------------------------------------------------------------------
# Fejer-monotonicity moduli chi(n, m, r)
# ---------------------------------------------------------------------------


class FejerModulus:
    """Window modulus chi(n, m, r): membership level that pins the whole
    window [n, n+m] within 1/(r+1) in the monotonicity inequality.

    Built-in families are nondecreasing in each argument.
    """

    def __init__(self, family: str, params: tuple = (), table: Optional[Modulus] = None):
        self.family = family
        self.params = params
        self.table = table
        if family not in _FEJER_FAMILIES:
            raise ValueError(f"unknown Fejer-modulus family {family!r}")
        if family == "table_n" and table is None:
            raise ValueError("table_n family requires a table modulus")

    # families ---------------------------------------------------------------

    def __call__(self, n: int, m: int, r: int) -> int:
        as_nat(n, "n")
        as_nat(m, "m")
        as_nat(r, "r")
        return _FEJER_FAMILIES[self.family](self, n, m, r)

    @property
    def monotone(self) -> bool:
        if self.family == "table_n":
            return self.table.monotone
        if self.family == "floored":
            return self.params[1].monotone
        return True

    def floored(self, floor: int) -> "FejerModulus":
        """max(floor, chi(n, m, r)) — the membership-floor strengthening."""
        return FejerModulus("floored", (as_nat(floor, "floor"), self))

    def box_majorant(self) -> "FejerModulus":
        """chi^M(n,m,r) = max over the box {<=n} x {<=m} x {<=r}."""
        if self.monotone:
            return self
        if self.family == "table_n":
            return FejerModulus("table_n", (), table=majorant(self.table))
        if self.family == "floored":
            floor, inner = self.params
            return inner.box_majorant().floored(floor)
        raise DomainError(f"no box majorant for family {self.family!r}")

    def to_json(self):
        obj = {"family": self.family}
        if self.family == "floored":
            obj["floor"] = str(self.params[0])
            obj["inner"] = self.params[1].to_json()
        elif self.family == "table_n":
            obj["table"] = self.table.to_json()
        elif self.params:
            obj["params"] = [str(p) if isinstance(p, int) else _frac_to_json(p) for p in self.params]
        return obj

    @staticmethod
    def from_json(obj) -> "FejerModulus":
        family = obj["family"]
        if family == "floored":
            return FejerModulus.from_json(obj["inner"]).floored(int(obj["floor"]))
        if family == "table_n":
            return FejerModulus("table_n", (), table=Modulus.from_json(obj["table"]))
        params = obj.get("params", [])
        builders = {
            "additive": lambda p: fejer_additive(),
            "window_linear": lambda p: fejer_window_linear(),
            "window_linear_double": lambda p: fejer_window_linear_double(),
            "spc": lambda p: fejer_spc(_frac_from_json(p[0])),
            "cond_e": lambda p: fejer_cond_e(_frac_from_json(p[0]), int(p[1])),
            "asymptotic": lambda p: fejer_asymptotic(int(p[0])),
            "ppa": lambda p: fejer_ppa(),
            "const": lambda p: fejer_const(int(p[0])),
        }
        if family not in builders:
            raise ValueError(f"unknown Fejer-modulus family {family!r}")
        return builders[family](params)

    def __repr__(self):
        return f"FejerModulus<{self.family}{self.params}>"

    def __eq__(self, other):
        return (
            isinstance(other, FejerModulus)
            and self.family == other.family
            and self.params == other.params
            and self.table == other.table
        )


def _fam_additive(chi, n, m, r):
    return n + m


def _fam_window_linear(chi, n, m, r):
    return m * (r + 1)


def _fam_window_linear_double(chi, n, m, r):
    return 2 * m * (r + 1)


def _fam_spc(chi, n, m, r):
    (ceil_b,) = chi.params
    return m * (2 * n + m + 5) * (r + 1) * ceil_b


def _fam_cond_e(chi, n, m, r):
    mu, big_l = chi.params
    return ceil_frac(mu * m * Fraction(big_l - 1, big_l) * (r + 1))


def _fam_asymptotic(chi, n, m, r):
    big_k, ceil_ek = chi.params
    return m * (n + m + big_k) * ceil_ek * (r + 1)


def _fam_ppa(chi, n, m, r):
    return max(monus(n + m, 1), m * (r + 1))


def _fam_const(chi, n, m, r):
    return chi.params[0]


def _fam_table_n(chi, n, m, r):
    return chi.table(n)


def _fam_floored(chi, n, m, r):
    floor, inner = chi.params
    return max(floor, inner(n, m, r))


_FEJER_FAMILIES = {
    "additive": _fam_additive,
    "window_linear": _fam_window_linear,
    "window_linear_double": _fam_window_linear_double,
    "spc": _fam_spc,
    "cond_e": _fam_cond_e,
    "asymptotic": _fam_asymptotic,
    "ppa": _fam_ppa,
    "const": _fam_const,
    "table_n": _fam_table_n,
    "floored": _fam_floored,
}


def fejer_additive() -> FejerModulus:
    """chi(n,m,r) = n + m (monotone-sequence example)."""
    return FejerModulus("additive")


def fejer_window_linear() -> FejerModulus:
    """chi(n,m,r) = m(r+1) (nonexpansive Picard; quasi perturbed Mann)."""
    return FejerModulus("window_linear")


def fejer_window_linear_double() -> FejerModulus:
    """chi(n,m,r) = 2m(r+1) (Ishikawa)."""
    return FejerModulus("window_linear_double")


def fejer_spc(b) -> FejerModulus:
    """chi(n,m,r) = m(2n+m+5)(r+1)ceil(b) (Mann for strict pseudo-contractions)."""
    bq = exact_fraction(b)
    if bq <= 0:
        raise ValueError("diameter bound must be > 0")
    return FejerModulus("spc", (ceil_frac(bq),))


def fejer_cond_e(mu, big_l: int) -> FejerModulus:
    """chi(n,m,r) = ceil(mu * m * (1 - 1/L) * (r+1)); ceiled to stay a
    natural, which only enlarges the modulus."""
    muq = exact_fraction(mu)
    if muq < 1:
        raise ValueError("mu must be >= 1")
    if big_l < 2:
        raise ValueError("L must be >= 2")
    return FejerModulus("cond_e", (muq, big_l))


def fejer_asymptotic(big_k: int) -> FejerModulus:
    """chi(n,m,r) = m(n+m+K) ceil(e^K) (r+1) (asymptotically nonexpansive Mann)."""
    as_nat(big_k, "K")
    return FejerModulus("asymptotic", (big_k, ceil_exp(big_k)))


def fejer_ppa() -> FejerModulus:
    """chi(n,m,r) = max(n+m-1, m(r+1)) (proximal point algorithm)."""
    return FejerModulus("ppa")


def fejer_const(c: int) -> FejerModulus:
    return FejerModulus("const", (as_nat(c, "chi constant"),))


# ---------------------------------------------------------------------------
# (G, H) transformation moduli
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GHModuli:
    """Moduli for the transformed monotonicity inequality
    H(d(x_{n+m}, p)) <= G(d(x_n, p)).

    alpha_g realizes: a <= 1/(alpha_g(k)+1)  =>  G(a) <= 1/(k+1);
    beta_h realizes: H(a) <= 1/(beta_h(k)+1) =>  a <= 1/(k+1).
    g_fn / h_fn are the concrete transformations for sampled grid checks.
    """

    tag: str
    alpha_g: Modulus
    beta_h: Modulus
    g_fn: Callable[[float], float] = field(compare=False, repr=False, default=lambda a: a)
    h_fn: Callable[[float], float] = field(compare=False, repr=False, default=lambda a: a)

    def majorized(self) -> "GHModuli":
        return GHModuli(self.tag, majorant(self.alpha_g), majorant(self.beta_h), self.g_fn, self.h_fn)


def gh_identity() -> GHModuli:
    return GHModuli("identity", identity(), identity())


def gh_square() -> GHModuli:
    """G(a) = H(a) = a^2 with alpha_G(k) = ceil(sqrt(k)) and
    beta_H(k) = (k+1)^2 - 1, the least value realizing the H-contract
    (a^2 <= 1/(beta_H(k)+1) must force a <= 1/(k+1))."""
    return GHModuli(
        "square",
        CeilSqrtModulus(),
        PolyModulus((0, 2, 1)),
        g_fn=lambda a: a * a,
        h_fn=lambda a: a * a,
    )


def gh_scaled_shrink(big_k: int) -> GHModuli:
    """G = id, H(a) = a / e^K with beta_H(k) = ceil(e^K)(k+1)."""
    as_nat(big_k, "K")
    c = ceil_exp(big_k)
    ek = math.exp(big_k)
    return GHModuli(
        f"scaled_shrink_{big_k}",
        identity(),
        AffineModulus(c, c),
        g_fn=lambda a: a,
        h_fn=lambda a: a / ek,
    )


# ---------------------------------------------------------------------------
# Uniform closedness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosednessModuli:
    """Quantitative closedness: membership at level delta_f(k) plus
    proximity 1/(omega_f(k)+1) forces membership at level k."""

    delta_f: Modulus
    omega_f: Modulus


def uniform_closedness_from_continuity(omega_t: Modulus) -> ClosednessModuli:
    """Closedness moduli of a fixed-point set from a uniform-continuity
    modulus of the map: delta_f(k)=2k+1, omega_f(k)=max(4k+3, omega_t(4k+3))."""
    bump = AffineModulus(4, 3)
    return ClosednessModuli(
        delta_f=AffineModulus(2, 1),
        omega_f=MaxModulus((bump, ComposeModulus(omega_t, bump))),
    )


def uniform_closedness_cond_e(mu) -> ClosednessModuli:
    """Closedness moduli of the fixed-point set of a (possibly
    discontinuous) map with the mu-orbit condition:
    delta_f(k) = ceil(2*mu*(k+1)) - 1, omega_f(k) = 4k+3."""
    muq = exact_fraction(mu)
    if muq < 1:
        raise ValueError("mu must be >= 1")
    return ClosednessModuli(
        delta_f=MonusModulus(CeilPowModulus(2 * muq, 1), 1, floor=1),
        omega_f=AffineModulus(4, 3),
    )


def uniform_closedness_ppa() -> ClosednessModuli:
    """Closedness moduli of the zero set under the resolvent family:
    delta_f(k) = 2k+1, omega_f(k) = 4k+3."""
    return ClosednessModuli(delta_f=AffineModulus(2, 1), omega_f=AffineModulus(4, 3))


# ---------------------------------------------------------------------------
# Approximation families
# ---------------------------------------------------------------------------


class ApproximationFamily:
    """Residual-based membership test for the nested outer approximations
    AF_k: p is a member at level k iff residual(p, k) <= 1/(k+1)."""

    def __init__(self, name: str, residual: Callable[[np.ndarray, int], float]):
        self.name = name
        self._residual = residual

    def residual(self, p, k: int) -> float:
        as_nat(k, "level")
        return float(self._residual(np.asarray(p, dtype=np.float64), k))

    def member(self, p, k: int, tau: float = 0.0) -> bool:
        return self.residual(p, k) <= 1.0 / (k + 1) + tau

    def check_nesting(self, points, levels, tau: float = 0.0) -> bool:
        """Sampled AF_{k+1} subseteq AF_k check."""
        for p in points:
            for k in levels:
                if self.member(p, k + 1, tau) and not self.member(p, k, tau):
                    return False
        return True

    def __repr__(self):
        return f"ApproximationFamily<{self.name}>"


# ---------------------------------------------------------------------------
# Diameter witness
# ---------------------------------------------------------------------------


def euclidean(x, y) -> float:
    return float(np.linalg.norm(np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)))


def diameter_witness(
    x_seq: Callable[[int], "np.ndarray"],
    y_seq: Callable[[int], "np.ndarray"],
    gamma: Modulus,
    metric: Callable = euclidean,
    cap: int = 10**6,
) -> tuple[int, float]:
    """Find N with d(x_N, y_N) < N among at most gamma(0)+1 constructed
    indices n_0=0, n_{j+1} = ceil(max(n_j, all cross/self distances so far) + 3).

    Returns the least constructed index that works; raises DomainError if
    the recursion climbs past ``cap`` (sequences too spread for desk scale).
    """
    indices = [0]
    xs, ys = [], []
    limit = gamma(0)
    for j in range(limit + 1):
        n_j = indices[j]
        xs.append(np.asarray(x_seq(n_j), dtype=np.float64))
        ys.append(np.asarray(y_seq(n_j), dtype=np.float64))
        d = metric(xs[j], ys[j])
        if d < n_j:
            return n_j, d
        best = float(n_j)
        for a in range(j + 1):
            for b in range(j + 1):
                best = max(
                    best, metric(xs[a], ys[b]), metric(xs[a], xs[b]), metric(ys[a], ys[b])
                )
        nxt = math.ceil(best + 3)
        if nxt > cap:
            raise DomainError(f"diameter-witness recursion exceeded cap {cap}")
        indices.append(nxt)
    raise DomainError(
        "no witness within gamma(0)+1 indices; gamma is not a valid pair-collision modulus"
    )
