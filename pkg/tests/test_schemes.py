from fractions import Fraction

import pytest

from fejercert.iterations import SeqSpec
from fejercert.moduli import (
    affine,
    const,
    fejer_window_linear,
    gh_identity,
    identity,
    majorant,
    tb_modulus_interval,
    uniform_closedness_from_continuity,
)
from fejercert.rates import (
    EvalBudget,
    RateInputs,
    omega_tilde,
    psi,
    psi_plus,
    psi_tilde,
)
from fejercert.schemes import (
    SchemeParams,
    asymptotically_ne_moduli,
    cond_e_m_count,
    cond_e_phi_plus,
    cond_e_theta,
    fne_quadratic_coeff,
    fne_rate_as_reg,
    ishikawa_apfp_bound,
    picard_ne_sigma,
    picard_ne_sigma_tilde,
    picard_ne_theta,
    ppa_moduli,
    spc_moduli,
    theta_fne,
)


def _unbounded():
    return EvalBudget(saturation=None)


# ---------------------------------------------------------------------------
# Picard, nonexpansive
# ---------------------------------------------------------------------------


def test_sigma_zero_counter():
    cert = picard_ne_sigma(0, const(0), affine(1, 5), tb_modulus_interval(), _unbounded())
    assert cert.bound == 5  # every iterate after the first is phi(0)


def test_sigma_hand_trace():
    cert = picard_ne_sigma(0, affine(1, 1), identity(), tb_modulus_interval(), _unbounded())
    assert cert.iterates == [0, 4, 20, 84, 340]
    assert cert.bound == 340


def test_sigma_tilde_zero_counter():
    cert = picard_ne_sigma_tilde(0, const(0), identity(), tb_modulus_interval(), _unbounded())
    assert cert.bound == 1  # max(2k+1, 0) with k = 0


def test_sigma_tilde_hand_trace():
    cert = picard_ne_sigma_tilde(0, affine(1, 1), identity(), tb_modulus_interval(), _unbounded())
    assert cert.iterates[:4] == [0, 8, 72, 584]
    assert cert.p_steps == 8
    assert cert.bound == 19173960


def test_theta_trivial_and_trace():
    cert = picard_ne_theta(0, const(0), identity(), tb_modulus_interval(), _unbounded())
    assert cert.bound == 0
    cert = picard_ne_theta(0, const(1), identity(), tb_modulus_interval(), _unbounded())
    assert cert.bound == 4  # stabilizes at 4, K = 0


_CROSS_CASES = [
    (0, const(1), identity(), affine(1, 1)),
    (0, affine(1, 1), identity(), const(3)),
    (1, const(3), affine(1, 2), const(2)),
    (1, affine(1, 0), affine(2, 0), const(2)),
    (2, const(1), affine(1, 1), const(2)),
]


@pytest.mark.parametrize("k,g,phi,gamma", _CROSS_CASES)
def test_sigma_equals_generic_psi(k, g, phi, gamma):
    direct = picard_ne_sigma(k, g, phi, gamma, _unbounded())
    generic = psi(
        RateInputs(k, g, phi, fejer_window_linear(), gh_identity(), gamma), _unbounded()
    )
    assert direct.bound == generic.bound


@pytest.mark.parametrize("k,g,phi,gamma", _CROSS_CASES)
def test_sigma_tilde_equals_generic_psi_tilde(k, g, phi, gamma):
    direct = picard_ne_sigma_tilde(k, g, phi, gamma, _unbounded())
    closed = uniform_closedness_from_continuity(identity())
    generic = psi_tilde(
        RateInputs(k, g, phi, fejer_window_linear(), gh_identity(), gamma, closed=closed),
        _unbounded(),
    )
    assert direct.bound == generic.bound


@pytest.mark.parametrize("k,g,phi_pp,gamma", _CROSS_CASES)
def test_theta_equals_omega_tilde_composition(k, g, phi_pp, gamma):
    direct = picard_ne_theta(k, g, phi_pp, gamma, _unbounded())
    inputs = RateInputs(k, g, majorant(phi_pp), fejer_window_linear(), gh_identity(), gamma)
    fn = psi_plus(inputs, majorant(phi_pp))
    generic = omega_tilde(k, g, fn, phi_pp, _unbounded())
    assert direct.bound == generic.bound


# ---------------------------------------------------------------------------
# Picard, firmly nonexpansive
# ---------------------------------------------------------------------------


def test_fne_constants():
    assert fne_quadratic_coeff(1, 0.5) == 128
    assert fne_rate_as_reg(1, 0.5)(1) == 512
    with pytest.raises(ValueError):
        fne_quadratic_coeff(1, 1.0)


def test_theta_fne_hand_trace():
    cert = theta_fne(0, const(0), tb_modulus_interval(), 1, 0.5, _unbounded())
    assert cert.iterates[1] == 33554432  # 128*(128*4)^2
    assert cert.bound == 33554432 + 128


@pytest.mark.parametrize("k,g", [(0, const(1)), (0, affine(1, 1)), (1, const(2))])
def test_theta_fne_equals_omega_tilde(k, g):
    b, lam = 1.0, 0.5
    gamma = const(2)
    direct = theta_fne(k, g, gamma, b, lam, _unbounded())
    phi_pp = fne_rate_as_reg(b, lam)
    inputs = RateInputs(k, g, phi_pp, fejer_window_linear(), gh_identity(), gamma)
    generic = omega_tilde(k, g, psi_plus(inputs, phi_pp), phi_pp, _unbounded())
    assert direct.bound == generic.bound


# ---------------------------------------------------------------------------
# Ishikawa
# ---------------------------------------------------------------------------


def test_ishikawa_bound_values():
    p = SchemeParams(b=1.0, L=1, N0=0, theta=affine(1, 0))
    assert ishikawa_apfp_bound(0, p) == 8
    # constant lambda = 1/2 gives theta(n) = 4n
    p2 = SchemeParams(b=1.0, L=2, N0=3, lam=0.5)
    assert ishikawa_apfp_bound(1, p2) == 4 * (4 * 4 * 4 * 2 + 3)


# ---------------------------------------------------------------------------
# Strict pseudo-contractions
# ---------------------------------------------------------------------------


def test_spc_bundle_values():
    sp = spc_moduli(SchemeParams(b=1.0, kappa=0.0, lam=0.5))
    assert sp.chi(0, 1, 0) == 6
    assert sp.gh.alpha_g(4) == 2
    assert sp.phi_pp(0) == 4  # Krasnoselskii rate ceil(1/(1/4)) (k+1)^2
    assert sp.closed.omega_f(0) == 4  # Lipschitz 1 -> ceil(L)(4k+4)
    sp2 = spc_moduli(SchemeParams(b=2.0, kappa=0.25, lam=0.5))
    assert sp2.phi_pp(10) == 32 * 121
    with pytest.raises(ValueError):
        spc_moduli(SchemeParams(b=1.0, kappa=0.5, lam=0.4))


# ---------------------------------------------------------------------------
# Orbit condition (E_mu)
# ---------------------------------------------------------------------------


def test_cond_e_quantum_and_count():
    p = SchemeParams(b=1.0, mu=3.0, L=2)
    assert cond_e_theta(0, p) == Fraction(1, 1024)
    assert cond_e_m_count(0, p) == 6144
    assert cond_e_phi_plus(0, const(0), p, EvalBudget(g_evals=10**7)) == 6144
    # the square convexity modulus gives the cubic count
    assert cond_e_theta(0, p, use_square_modulus=True) == Fraction(1, 8192 * 4)


def test_cond_e_phi_plus_unit_increments():
    p = SchemeParams(b=0.25, mu=1.0, L=2)
    m = cond_e_m_count(1, p)
    assert cond_e_phi_plus(1, const(0), p, EvalBudget(g_evals=10**7)) == m


# ---------------------------------------------------------------------------
# Asymptotically nonexpansive
# ---------------------------------------------------------------------------


def test_asymptotic_moduli():
    chi, gh = asymptotically_ne_moduli(SchemeParams(K=0))
    assert chi(2, 3, 1) == 30 and gh.beta_h(0) == 1 and gh.beta_h(3) == 4
    chi1, _ = asymptotically_ne_moduli(SchemeParams(K=1))
    assert chi1(1, 1, 0) == 9
    _, gh2 = asymptotically_ne_moduli(SchemeParams(K=2))
    assert gh2.beta_h(4) == 40


# ---------------------------------------------------------------------------
# Proximal point algorithm
# ---------------------------------------------------------------------------


def test_ppa_bundle_values():
    pm = ppa_moduli(SchemeParams(b=1.0, theta=affine(1, 0), gamma_seq=SeqSpec.const(1.0)))
    assert pm.chi(2, 3, 1) == 6
    assert pm.chi(0, 0, 9) == 0
    assert pm.beta(0) == 1 and pm.beta(2) == 9
    assert pm.phi(0) == 80
    pm2 = ppa_moduli(SchemeParams(b=2.0, theta=affine(1, 0), gamma_seq=SeqSpec.const(1.0)))
    assert pm2.delta(1, 0) == 15
    assert pm2.delta(1, 5) == 20


def test_ppa_phi_dominates_first_window():
    pm = ppa_moduli(SchemeParams(b=1.0, theta=affine(1, 0), gamma_seq=SeqSpec.const(1.0)))
    for k in range(11):
        m_k = Fraction(1)
        big_m = -((-((k + 1) * (2 + m_k))) // 1) - 1
        assert pm.phi(k) >= pm.delta(int(big_m), 0)


def test_ppa_running_max_step_sizes():
    seq = SeqSpec.affine_inv(1.0, 1.0)  # 1 + 1/(n+1), max at n=0
    pm = ppa_moduli(SchemeParams(b=1.0, theta=affine(1, 0), gamma_seq=seq))
    assert seq.running_max(5) == 2.0
    assert pm.phi(0) >= 80
