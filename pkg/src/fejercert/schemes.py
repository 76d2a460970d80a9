"""Per-scheme instantiations: each iteration scheme bundles its window
modulus, transformation moduli, closedness moduli, and the specialized
bound recursions that its certificates use.

All formula evaluation is exact: real parameters enter as the rationals
their floats denote, and every ceiling is integer-computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .moduli import (
    AffineModulus,
    CeilPowModulus,
    ClosednessModuli,
    ComposeModulus,
    DerivedModulus,
    FejerModulus,
    GHModuli,
    Modulus,
    PolyModulus,
    fejer_asymptotic,
    fejer_cond_e,
    fejer_ppa,
    fejer_spc,
    gh_scaled_shrink,
    gh_square,
    identity,
    majorant,
    uniform_closedness_cond_e,
    uniform_closedness_from_continuity,
    uniform_closedness_ppa,
)
from .iterations import SeqSpec
from .nat import as_nat, ceil_frac, exact_fraction
from .rates import (
    Certificate,
    EvalBudget,
    MetaFunctional,
    _iterate_certificate,
    counted_majorant,
)


@dataclass
class SchemeParams:
    """Scheme-tag-specific parameters; range checks happen per tag."""

    b: Optional[float] = None  # diameter / distance bound
    lam: Optional[float] = None  # constant averaging weight
    kappa: Optional[float] = None  # strict pseudo-contraction constant
    mu: Optional[float] = None  # orbit-condition constant, >= 1
    L: Optional[int] = None  # weight-range denominator, >= 2 where required
    N0: int = 0  # index from which the inner-weight cap holds
    K: Optional[int] = None  # bound on the Lipschitz-excess sum
    theta: Optional[Modulus] = None  # rate of divergence
    gamma_seq: Optional[SeqSpec] = None  # proximal step sizes
    lambda_seq: Optional[SeqSpec] = None
    s_seq: Optional[SeqSpec] = None
    eps_seq: Optional[SeqSpec] = None  # summable error terms
    eta: str = "cat0"  # uniform-convexity tag; cat0: eta(r,e)=e^2/8

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise ValueError(f"scheme parameter {name!r} is required here")


# ---------------------------------------------------------------------------
# Picard iteration of a nonexpansive map
# ---------------------------------------------------------------------------


def picard_ne_sigma(
    k: int, g: Modulus, phi: Modulus, gamma: Modulus, budget: Optional[EvalBudget] = None
) -> Certificate:
    """Metastability bound for the Picard iteration of a nonexpansive
    map: gamma(4k+3)-fold iterate of x -> phi((4k+4) g^M(x))."""
    as_nat(k, "k")
    if not phi.monotone:
        raise ValueError("phi must be monotone (take its majorant first)")
    budget = budget or EvalBudget()
    gm = counted_majorant(g, budget)
    p_steps = gamma(4 * k + 3)

    def step(x: int) -> int:
        return phi((4 * k + 4) * gm(x))

    return _iterate_certificate("sigma", p_steps, step, budget, {"r": 4 * k + 3})


def picard_ne_sigma_tilde(
    k: int, g: Modulus, phi: Modulus, gamma: Modulus, budget: Optional[EvalBudget] = None
) -> Certificate:
    """Variant whose window additionally consists of 1/(k+1)-approximate
    fixed points: gamma(8k+7)-fold iterate of
    x -> phi(max(2k+1, (8k+8) g^M(x)))."""
    as_nat(k, "k")
    if not phi.monotone:
        raise ValueError("phi must be monotone (take its majorant first)")
    budget = budget or EvalBudget()
    gm = counted_majorant(g, budget)
    p_steps = gamma(8 * k + 7)

    def step(x: int) -> int:
        return phi(max(2 * k + 1, (8 * k + 8) * gm(x)))

    cert = _iterate_certificate("sigma_tilde", p_steps, step, budget, {"r": 8 * k + 7})
    cert.k0 = 2 * k + 1
    return cert


def picard_ne_theta(
    k: int, g: Modulus, phi_pp: Modulus, gamma: Modulus, budget: Optional[EvalBudget] = None
) -> Certificate:
    """From a rate of asymptotic regularity phi_pp: bound
    Theta_0(gamma^M(4k+3)) + K with K = (phi_pp)^M(k) and
    Theta_0(n+1) = (phi_pp)^M((g^M(Theta_0(n)+K)+K)(4k+4))."""
    as_nat(k, "k")
    budget = budget or EvalBudget()
    phi_m = majorant(phi_pp, cap=budget.g_evals)
    gm = counted_majorant(g, budget)
    big_k = phi_m(k)
    p_steps = majorant(gamma, cap=budget.g_evals)(4 * k + 3)

    def step(x: int) -> int:
        return phi_m((gm(x + big_k) + big_k) * (4 * k + 4))

    cert = _iterate_certificate("theta", p_steps, step, budget, {"K": big_k})
    if cert.saturated:
        cert.bound_floor += big_k
    else:
        cert.bound += big_k
    return cert


# ---------------------------------------------------------------------------
# Picard iteration of a firmly nonexpansive map (nonpositive curvature)
# ---------------------------------------------------------------------------


def fne_quadratic_coeff(b, lam) -> int:
    """c = ceil(8(b+1)^2 / (lam (1-lam)))."""
    bq, lq = exact_fraction(b), exact_fraction(lam)
    if not 0 < lq < 1:
        raise ValueError("lambda must be in (0, 1)")
    if bq <= 0:
        raise ValueError("b must be > 0")
    return ceil_frac(8 * (bq + 1) ** 2 / (lq * (1 - lq)))


def fne_rate_as_reg(b, lam) -> Modulus:
    """Rate of asymptotic regularity k -> c (k+1)^2 for the firmly
    nonexpansive Picard iteration."""
    c = fne_quadratic_coeff(b, lam)
    return PolyModulus((c, 2 * c, c))


def theta_fne(
    k: int,
    g: Modulus,
    gamma: Modulus,
    b,
    lam,
    budget: Optional[EvalBudget] = None,
) -> Certificate:
    """theta specialized to the quadratic regularity rate of a firmly
    nonexpansive map: Theta_0(n+1) = c ((g^M(Theta_0(n)+K)+K)(4k+4))^2,
    K = c (k+1)^2, plus K."""
    as_nat(k, "k")
    budget = budget or EvalBudget()
    c = fne_quadratic_coeff(b, lam)
    big_k = c * (k + 1) ** 2
    gm = counted_majorant(g, budget)
    p_steps = majorant(gamma, cap=budget.g_evals)(4 * k + 3)

    def step(x: int) -> int:
        return c * ((gm(x + big_k) + big_k) * (4 * k + 4)) ** 2

    cert = _iterate_certificate("theta_fne", p_steps, step, budget, {"c": c, "K": big_k})
    if cert.saturated:
        cert.bound_floor += big_k
    else:
        cert.bound += big_k
    return cert


# ---------------------------------------------------------------------------
# Ishikawa iteration of a nonexpansive map (nonpositive curvature)
# ---------------------------------------------------------------------------


def ishikawa_theta_default(lam) -> Modulus:
    """theta(n) = n ceil(1/(lam(1-lam))): divergence rate of the
    weight sum for a constant averaging weight."""
    lq = exact_fraction(lam)
    if not 0 < lq < 1:
        raise ValueError("lambda must be in (0, 1)")
    return AffineModulus(ceil_frac(1 / (lq * (1 - lq))), 0)


def _ishikawa_inner_poly(params: SchemeParams) -> PolyModulus:
    params.require("b", "L")
    bq = exact_fraction(params.b)
    if bq <= 0:
        raise ValueError("b must be > 0")
    if params.L < 1:
        raise ValueError("L must be >= 1")
    cb = ceil_frac(bq * (bq + 1))
    base = 4 * params.L**2 * cb
    return PolyModulus((base + params.N0, 2 * base, base))  # 4(k+1)^2 L^2 ceil(b(b+1)) + N0


def ishikawa_apfp_modulus(params: SchemeParams) -> Modulus:
    """Approximate-fixed-point bound k -> theta(4(k+1)^2 L^2 ceil(b(b+1)) + N0)."""
    theta = params.theta
    if theta is None:
        params.require("lam")
        theta = ishikawa_theta_default(params.lam)
    if not theta.monotone:
        raise ValueError("theta must be a nondecreasing rate of divergence")
    return ComposeModulus(theta, _ishikawa_inner_poly(params))


def ishikawa_apfp_bound(k: int, params: SchemeParams) -> int:
    as_nat(k, "k")
    return ishikawa_apfp_modulus(params)(k)


# ---------------------------------------------------------------------------
# Mann iteration of a strict pseudo-contraction (Hilbert)
# ---------------------------------------------------------------------------


@dataclass
class SpcModuli:
    chi: FejerModulus
    gh: GHModuli
    closed: ClosednessModuli
    phi_pp: Modulus  # rate of asymptotic regularity
    theta: Modulus  # divergence rate actually used


def spc_moduli(params: SchemeParams) -> SpcModuli:
    """Bundle for the strict-pseudo-contraction Mann iteration: squared
    transformation pair, window modulus m(2n+m+5)(r+1)ceil(b), closedness
    from the Lipschitz constant (1+kappa)/(1-kappa), and the quadratic
    regularity rate."""
    params.require("b", "kappa")
    kq = exact_fraction(params.kappa)
    if not 0 <= kq < 1:
        raise ValueError("kappa must be in [0, 1)")
    bq = exact_fraction(params.b)
    if bq <= 0:
        raise ValueError("b must be > 0")
    lip = (1 + kq) / (1 - kq)
    omega_t = AffineModulus(ceil_frac(lip), ceil_frac(lip))  # ceil(L)(k+1)
    closed = uniform_closedness_from_continuity(omega_t)

    theta = params.theta
    if theta is None:
        params.require("lam")
        lq = exact_fraction(params.lam)
        if not kq < lq < 1:
            raise ValueError("lambda must be in (kappa, 1)")
        quot = (lq - kq) * (1 - lq)
        theta = AffineModulus(ceil_frac(1 / quot), 0)
        c = ceil_frac(bq * bq / quot)
        phi_pp = PolyModulus((c, 2 * c, c))  # ceil(b^2/((lam-kappa)(1-lam))) (k+1)^2
    else:
        if not theta.monotone:
            raise ValueError("theta must be a nondecreasing rate of divergence")
        c0 = ceil_frac(bq * bq)
        phi_pp = ComposeModulus(majorant(theta), PolyModulus((c0, 2 * c0, c0)))
    return SpcModuli(fejer_spc(bq), gh_square(), closed, phi_pp, theta)


# ---------------------------------------------------------------------------
# Mann iteration under the mu-orbit condition (possibly discontinuous maps)
# ---------------------------------------------------------------------------


def cond_e_theta(k: int, params: SchemeParams, use_square_modulus: bool = False) -> Fraction:
    """The per-step decrease quantum: eta(b+1, 1/(4(k+1)(b+1))) / (4(k+1)L^2),
    with the linearized convexity modulus eps/8 by default (nonpositive
    curvature admits it and it gives the quadratic-in-k count)."""
    params.require("b", "L")
    if params.eta != "cat0":
        raise ValueError(f"unsupported uniform-convexity tag {params.eta!r}")
    if params.L < 2:
        raise ValueError("L must be >= 2")
    bq = exact_fraction(params.b)
    if bq <= 0:
        raise ValueError("b must be > 0")
    eps = Fraction(1, 4 * (k + 1)) / (bq + 1)
    eta_val = (eps * eps if use_square_modulus else eps) / 8
    return eta_val / (4 * (k + 1) * params.L**2)


def cond_e_m_count(k: int, params: SchemeParams, use_square_modulus: bool = False) -> int:
    """Iteration count M = ceil(3(b+1)/theta)."""
    bq = exact_fraction(params.b)
    return ceil_frac(3 * (bq + 1) / cond_e_theta(k, params, use_square_modulus))


def cond_e_phi_plus(
    k: int,
    g: Modulus,
    params: SchemeParams,
    budget: Optional[EvalBudget] = None,
    use_square_modulus: bool = False,
) -> int:
    """Metastable regularity rate: the M-fold iterate of
    h(n) = g(n) + n + 1 starting at 0."""
    as_nat(k, "k")
    budget = budget or EvalBudget()
    m_count = cond_e_m_count(k, params, use_square_modulus)
    x = 0
    for _ in range(m_count):
        budget.tick()
        x = g(x) + x + 1
    return x


def cond_e_phi_plus_functional(
    params: SchemeParams, use_square_modulus: bool = False
) -> MetaFunctional:
    def fn(k: int, g: Modulus, budget: EvalBudget) -> int:
        return cond_e_phi_plus(k, g, params, budget, use_square_modulus)

    return MetaFunctional("cond_e_phi_plus", True, fn)


def cond_e_phi_zero(params: SchemeParams, use_square_modulus: bool = False) -> Modulus:
    """The regularity rate at the zero counter function: k -> M(k)."""
    return DerivedModulus(
        lambda k: cond_e_m_count(k, params, use_square_modulus),
        "cond_e_phi_plus(.,0)",
        monotone=True,
    )


def cond_e_moduli(params: SchemeParams) -> tuple[FejerModulus, ClosednessModuli]:
    params.require("mu", "L")
    return fejer_cond_e(params.mu, params.L), uniform_closedness_cond_e(params.mu)


# ---------------------------------------------------------------------------
# Mann iteration of an asymptotically nonexpansive map
# ---------------------------------------------------------------------------


def asymptotically_ne_moduli(params: SchemeParams) -> tuple[FejerModulus, GHModuli]:
    """Window modulus m(n+m+K)ceil(e^K)(r+1) and the shrunk-H pair
    (G = id, H(a) = a/e^K, beta_H(k) = ceil(e^K)(k+1)).  The
    metastability rate itself is user-supplied for this scheme."""
    params.require("K")
    return fejer_asymptotic(params.K), gh_scaled_shrink(params.K)


# ---------------------------------------------------------------------------
# Proximal point algorithm
# ---------------------------------------------------------------------------


@dataclass
class PpaModuli:
    chi: FejerModulus
    closed: ClosednessModuli
    delta: Callable[[int, int], int]  # liminf modulus for ||x_n - x_{n+1}||
    beta: Modulus  # rate of convergence of the scaled increments
    phi: Modulus  # approximate-zero bound


def ppa_moduli(params: SchemeParams) -> PpaModuli:
    """Everything the proximal certificates need: chi = max(n+m-1, m(r+1)),
    closedness (2k+1, 4k+3), the increment liminf modulus
    Delta(k, L) = ceil(b^2 (k+1)^2) + L - 1, the increment rate
    beta(k) = theta(ceil(b^2 (k+1)^2)), and the approximate-zero bound
    phi(k) = theta(ceil(b^2 (M_k+1)^2)) ceil(b^2 (M_k+1)^2) - 1 built from
    the running maximum of the step sizes."""
    params.require("b", "theta", "gamma_seq")
    bq = exact_fraction(params.b)
    if bq <= 0:
        raise ValueError("b must be > 0")
    theta = params.theta
    if not theta.monotone:
        raise ValueError("theta must be a nondecreasing rate of divergence")
    gamma_seq = params.gamma_seq
    lo, _ = gamma_seq.bounds()
    if lo <= 0:
        raise ValueError("proximal step sizes must be > 0")
    cell = CeilPowModulus(bq * bq, 2)  # ceil(b^2 (k+1)^2)

    def delta(k: int, big_l: int) -> int:
        return cell(k) + big_l - 1

    def phi_fn(k: int) -> int:
        m_k = gamma_seq.running_max_fraction(k)
        big_m = ceil_frac((k + 1) * (2 + m_k)) - 1
        c = cell(big_m)
        return theta(c) * c - 1

    return PpaModuli(
        chi=fejer_ppa(),
        closed=uniform_closedness_ppa(),
        delta=delta,
        beta=ComposeModulus(theta, cell),
        phi=DerivedModulus(phi_fn, "ppa_phi", monotone=True),
    )
