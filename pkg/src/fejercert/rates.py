"""Generic convergence-certificate functionals over exact naturals.

Each operation produces a Certificate: an explicit natural-number bound
on the first index N such that every pair in the window [N, N+g(N)]
lies within 1/(k+1) (plus, for the stronger variants, membership of the
window in the k-th approximation set).

Bounds are computed exactly with arbitrary-precision integers.  Because
the recursion iterates are provably nondecreasing, the computation may
stop early once an iterate exceeds the budget's saturation threshold;
the certificate then records a certified floor instead of the exact
value (these bounds grow towers of digits by design, while the checker
only ever needs "bound exceeds the search cap").
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional

from .moduli import (
    ClosednessModuli,
    DerivedModulus,
    FejerModulus,
    GHModuli,
    Modulus,
    TableModulus,
    majorant,
)
from .nat import DomainError, as_nat


class CapExceeded(RuntimeError):
    """Recursion-internal evaluation budget exhausted."""


class _SaturatedEval(Exception):
    """Internal: a nested certificate saturated; carries a certified floor."""

    def __init__(self, floor: int):
        self.floor = floor


DEFAULT_G_EVALS = 10**6
DEFAULT_SATURATION = 10**60

_STR_DIGITS = 2000  # beyond this, report magnitude instead of digits


def _digits10(v: int) -> int:
    return 1 if v == 0 else (v.bit_length() * 30103) // 100000 + 1


def format_nat(v: int, max_digits: int = _STR_DIGITS) -> str:
    """Exact decimal string, or ~10^D once exactness stops being readable
    (saturated floors can carry tens of thousands of digits)."""
    d = _digits10(v)
    if d <= max_digits:
        return str(v)
    return f"~10^{d - 1}"


@dataclass
class EvalBudget:
    """Caps on recursion-internal work.

    g_evals bounds the number of counter-function evaluations (turning
    runaway growth into a typed error); saturation bounds the magnitude
    of certificate iterates (early-stop with a certified floor).
    """

    g_evals: int = DEFAULT_G_EVALS
    saturation: Optional[int] = DEFAULT_SATURATION
    used: int = 0

    def tick(self, cost: int = 1):
        self.used += cost
        if self.used > self.g_evals:
            raise CapExceeded(f"counter-function evaluation budget {self.g_evals} exhausted")


@dataclass
class Certificate:
    theorem: str
    bound: Optional[int]
    saturated: bool = False
    bound_floor: int = 0
    p_steps: Optional[int] = None
    iterates: list = field(default_factory=list)
    k0: Optional[int] = None
    stabilized_at: Optional[int] = None
    details: dict = field(default_factory=dict)

    def dominates(self, n: int) -> bool:
        """Whether n <= bound is certified (via the floor when saturated)."""
        if self.saturated:
            return n <= self.bound_floor
        return n <= self.bound

    def bound_decimal(self) -> str:
        if self.saturated:
            return f">{format_nat(self.bound_floor)}"
        return format_nat(self.bound)

    def to_json(self, max_iterates: int = 64, max_digits: int = 400) -> dict:
        obj = {
            "theorem": self.theorem,
            "bound": None if self.saturated else format_nat(self.bound),
            "saturated": self.saturated,
        }
        if self.saturated:
            obj["bound_floor"] = format_nat(self.bound_floor)
        if self.p_steps is not None:
            obj["P"] = format_nat(self.p_steps)
        shown = []
        truncated = False
        for v in self.iterates[:max_iterates]:
            if _digits10(v) > max_digits:
                s = f"~10^{_digits10(v) - 1}"
                truncated = True
            else:
                s = str(v)
            shown.append(s)
        if len(self.iterates) > max_iterates:
            truncated = True
        obj["iterates"] = shown
        if truncated:
            obj["iterates_truncated"] = True
        if self.k0 is not None:
            obj["k0"] = self.k0
        if self.stabilized_at is not None:
            obj["stabilized_at"] = self.stabilized_at
        if self.details:
            obj["details"] = {
                k: (format_nat(v) if isinstance(v, int) else v) for k, v in self.details.items()
            }
        return obj


@dataclass
class RateInputs:
    """Inputs of the generic certificate: error level k (target 1/(k+1)),
    counter function g, approximate-membership bound phi, window modulus
    chi, transformation moduli gh, pair-collision modulus gamma, plus
    optional closedness moduli and an error-sum Cauchy modulus xi."""

    k: int
    g: Modulus
    phi: Modulus
    chi: FejerModulus
    gh: GHModuli
    gamma: Modulus
    closed: Optional[ClosednessModuli] = None
    xi: Optional[Modulus] = None

    def __post_init__(self):
        as_nat(self.k, "k")
        if not self.phi.monotone:
            raise ValueError("phi must carry a monotone certificate (take its majorant first)")


@dataclass
class LiminfBound:
    """Monotone two-argument bound: value(k, n) bounds the least index
    >= n whose iterate is a k-member.  Shape: n + base(k)."""

    base: Modulus

    def __post_init__(self):
        if not self.base.monotone:
            raise ValueError("liminf bound must be monotone in k")

    def __call__(self, k: int, n: int) -> int:
        return n + self.base(k)

    def to_json(self):
        return {"kind": "n_plus", "of": self.base.to_json()}

    @staticmethod
    def from_json(obj) -> "LiminfBound":
        if obj.get("kind") != "n_plus":
            raise ValueError(f"unknown liminf-bound kind {obj.get('kind')!r}")
        return LiminfBound(Modulus.from_json(obj["of"]))


# ---------------------------------------------------------------------------
# Counter-function machinery
# ---------------------------------------------------------------------------


def counted_majorant(g: Modulus, budget: EvalBudget) -> Modulus:
    """g^M with budget-counted evaluations."""
    base = majorant(g, cap=budget.g_evals)

    def fn(n: int) -> int:
        budget.tick()
        return base(n)

    return DerivedModulus(fn, "g^M", monotone=True)


def g_star(g: Modulus, budget: EvalBudget) -> Modulus:
    """g*(n) = n + g^M(n)."""
    gm = counted_majorant(g, budget)
    return DerivedModulus(lambda n: n + gm(n), "g*", monotone=True)


def g_tilde(g: Modulus, l: int, budget: EvalBudget) -> Modulus:
    """g~_l(m) = g*(max(l, m))."""
    gs = g_star(g, budget)
    return DerivedModulus(lambda m: gs(max(l, m)), f"g~_{l}", monotone=True)


def g_shift(g: Modulus, l: int, budget: EvalBudget) -> Modulus:
    """g_l(n) = g^M(n + l) + l."""
    gm = counted_majorant(g, budget)
    return DerivedModulus(lambda n: gm(n + l) + l, f"g_{l}", monotone=True)


def _window_level_fn(
    chi: FejerModulus, g: Modulus, budget: EvalBudget
) -> Callable[[int, int], int]:
    """Exact chi^M_g(n, r) = max_{i<=n} chi(i, g(i), r).

    Monotone g against a monotone chi collapses to a single evaluation;
    table-backed g scans its finite prefix and uses the (monotone) tail
    in closed form; anything else scans up to the evaluation budget.
    """

    if g.monotone and chi.monotone:

        def fast(n: int, r: int) -> int:
            budget.tick()
            return chi(n, g(n), r)

        return fast

    if isinstance(g, TableModulus) and chi.monotone:
        prefix_len = len(g.values)

        def table_scan(n: int, r: int) -> int:
            best = 0
            for i in range(min(n, prefix_len - 1) + 1):
                budget.tick()
                best = max(best, chi(i, g(i), r))
            if n >= prefix_len:
                budget.tick()
                best = max(best, chi(n, g(n), r))  # tail region is monotone
            return best

        return table_scan

    def slow_scan(n: int, r: int) -> int:
        best = 0
        for i in range(n + 1):
            budget.tick()
            best = max(best, chi(i, g(i), r))
        return best

    return slow_scan


# ---------------------------------------------------------------------------
# The certificate recursions
# ---------------------------------------------------------------------------


def _iterate_certificate(
    theorem: str,
    p_steps: int,
    step: Callable[[int], int],
    budget: EvalBudget,
    details: dict,
) -> Certificate:
    """Run x_{j+1} = step(x_j) from 0 for p_steps steps.

    Stops early on stabilization (exact) or once an iterate exceeds the
    saturation threshold (certified floor; sound because the iterates
    are nondecreasing whenever phi is monotone).
    """
    x = 0
    iterates = [0]
    j = 0
    while j < p_steps:
        x2 = step(x)
        if x2 < x:
            raise DomainError(
                f"certificate iterates decreased ({x} -> {x2}); "
                "a supplied modulus violates its monotonicity certificate"
            )
        iterates.append(x2)
        j += 1
        if x2 == x:
            return Certificate(
                theorem,
                bound=x,
                p_steps=p_steps,
                iterates=iterates,
                stabilized_at=j,
                details=details,
            )
        x = x2
        if budget.saturation is not None and x > budget.saturation:
            return Certificate(
                theorem,
                bound=None,
                saturated=True,
                bound_floor=x,
                p_steps=p_steps,
                iterates=iterates,
                details=details,
            )
    return Certificate(theorem, bound=x, p_steps=p_steps, iterates=iterates, details=details)


def psi(inp: RateInputs, budget: Optional[EvalBudget] = None) -> Certificate:
    """Metastability certificate from a window modulus, a membership bound
    and a pair-collision modulus: the P-fold iterate of
    x -> phi(chi^M_g(x, R)) with R = 2*beta_H(2k+1)+1 and
    P = gamma(alpha_G(R))."""
    budget = budget or EvalBudget()
    r_const = 2 * inp.gh.beta_h(2 * inp.k + 1) + 1
    p_steps = inp.gamma(inp.gh.alpha_g(r_const))
    level = _window_level_fn(inp.chi, inp.g, budget)

    def step(x: int) -> int:
        return inp.phi(level(x, r_const))

    details = {"r": r_const}
    return _iterate_certificate("psi", p_steps, step, budget, details)


def psi_tilde(inp: RateInputs, budget: Optional[EvalBudget] = None) -> Certificate:
    """Membership-carrying variant: run psi at the bumped error level
    k0 = max(k, ceil((omega_F(k)-1)/2)) with the window modulus floored
    at delta_F(k), so every window index is a k-member."""
    if inp.closed is None:
        raise ValueError("psi_tilde needs closedness moduli")
    w = inp.closed.omega_f(inp.k)
    k0 = max(inp.k, w // 2)  # ceil((w-1)/2) for w >= 1
    chi_k = inp.chi.floored(inp.closed.delta_f(inp.k))
    cert = psi(replace(inp, k=k0, chi=chi_k), budget)
    cert.theorem = "psi_tilde"
    cert.k0 = k0
    cert.details["k"] = inp.k
    return cert


def psi_hat(
    inp: RateInputs,
    phi_hat: LiminfBound,
    budget: Optional[EvalBudget] = None,
) -> Certificate:
    """Certificate tolerating a summable error sequence with Cauchy
    modulus xi: constants bump to R = 4*beta_H(2k+1)+3, one extra step,
    and the membership bound becomes the two-argument liminf bound
    evaluated from xi(R)."""
    if inp.xi is None:
        raise ValueError("psi_hat needs a Cauchy modulus xi for the error sum")
    budget = budget or EvalBudget()
    r_const = 4 * inp.gh.beta_h(2 * inp.k + 1) + 3
    p_steps = inp.gamma(inp.gh.alpha_g(r_const)) + 1
    xi_r = inp.xi(r_const)
    level = _window_level_fn(inp.chi, inp.g, budget)

    def step(x: int) -> int:
        return phi_hat(level(x, r_const), xi_r)

    details = {"r": r_const, "xi_r": xi_r}
    return _iterate_certificate("psi_hat", p_steps, step, budget, details)


# ---------------------------------------------------------------------------
# Metastability functionals and their compositions
# ---------------------------------------------------------------------------


@dataclass
class MetaFunctional:
    """Evaluable functional (k, g) -> N, with a structural
    selfmajorization certificate (monotone in k and in g under pointwise
    domination by monotone counter functions)."""

    name: str
    selfmajorizing: bool
    fn: Callable[[int, Modulus, EvalBudget], int]

    def __call__(self, k: int, g: Modulus, budget: EvalBudget) -> int:
        return self.fn(k, g, budget)


def const_functional(c: int) -> MetaFunctional:
    as_nat(c, "value")
    return MetaFunctional("const", True, lambda k, g, budget: c)


def eval_at_functional(n0: int) -> MetaFunctional:
    """(k, g) -> g(n0); selfmajorizing over monotone counter functions."""
    as_nat(n0, "index")

    def fn(k, g, budget):
        budget.tick()
        return g(n0)

    return MetaFunctional(f"eval_at_{n0}", True, fn)


def functional_from_modulus(m: Modulus) -> MetaFunctional:
    """(k, g) -> m(k); ignores g."""
    mono = m.monotone

    def fn(k, g, budget):
        return m(k)

    return MetaFunctional("from_modulus", mono, fn)


def psi_plus(inp: RateInputs, phi_plus_at_zero: Modulus) -> MetaFunctional:
    """Selfmajorizing metastability functional: psi with every modulus
    replaced by its majorant and phi(k) = (metastable regularity rate at
    the constant counter function 0)."""
    chi_m = inp.chi.box_majorant()
    gh_m = inp.gh.majorized()
    gamma_m = majorant(inp.gamma)
    phi = phi_plus_at_zero if phi_plus_at_zero.monotone else majorant(phi_plus_at_zero)

    def fn(k: int, g: Modulus, budget: EvalBudget) -> int:
        cert = psi(
            replace(inp, k=k, g=g, chi=chi_m, gh=gh_m, gamma=gamma_m, phi=phi),
            budget,
        )
        if cert.saturated:
            raise _SaturatedEval(cert.bound_floor)
        return cert.bound

    return MetaFunctional("psi_plus", True, fn)


def omega(
    k: int,
    g: Modulus,
    psi_fn: MetaFunctional,
    phi_plus: MetaFunctional,
    budget: Optional[EvalBudget] = None,
) -> Certificate:
    """Combine a Cauchy-metastability functional with a metastable
    regularity rate (no closedness needed):
    Omega = max(psi_fn(k, h), phi_plus(k, g~_{psi_fn(k, h)}))
    with h(n) = g*(max(n, phi_plus(k, g~_n)))."""
    budget = budget or EvalBudget()
    if not (psi_fn.selfmajorizing and phi_plus.selfmajorizing):
        raise ValueError("omega requires selfmajorizing functionals")
    as_nat(k, "k")
    gs = g_star(g, budget)

    def h_fn(n: int) -> int:
        return gs(max(n, phi_plus(k, g_tilde(g, n, budget), budget)))

    h = DerivedModulus(h_fn, "h<k,g,theta>", monotone=True)
    try:
        delta_term = psi_fn(k, h, budget)
    except _SaturatedEval as s:
        return Certificate("omega", None, saturated=True, bound_floor=s.floor)
    try:
        theta_term = phi_plus(k, g_tilde(g, delta_term, budget), budget)
    except _SaturatedEval as s:
        return Certificate(
            "omega", None, saturated=True, bound_floor=max(delta_term, s.floor)
        )
    return Certificate(
        "omega",
        max(delta_term, theta_term),
        details={"delta_term": delta_term, "theta_term": theta_term},
    )


def omega_tilde(
    k: int,
    g: Modulus,
    psi_fn: MetaFunctional,
    phi_pp: Modulus,
    budget: Optional[EvalBudget] = None,
) -> Certificate:
    """Combine a Cauchy-metastability functional with a full regularity
    rate: Omega~ = psi_fn(k, g_{f(k)}) + f(k) with f the rate's majorant."""
    budget = budget or EvalBudget()
    if not psi_fn.selfmajorizing:
        raise ValueError("omega_tilde requires a selfmajorizing functional")
    as_nat(k, "k")
    f = phi_pp if phi_pp.monotone else majorant(phi_pp, cap=budget.g_evals)
    f_k = f(k)
    shifted = g_shift(g, f_k, budget)
    try:
        delta_term = psi_fn(k, shifted, budget)
    except _SaturatedEval as s:
        return Certificate("omega_tilde", None, saturated=True, bound_floor=s.floor + f_k)
    return Certificate(
        "omega_tilde",
        delta_term + f_k,
        details={"delta_term": delta_term, "f_k": f_k},
    )
