import pytest
from hypothesis import given
from hypothesis import strategies as st

from fejercert.moduli import (
    FejerModulus,
    TableModulus,
    affine,
    const,
    fejer_additive,
    fejer_const,
    fejer_window_linear,
    gh_identity,
    gh_square,
    identity,
    majorant,
    tb_modulus_interval,
    uniform_closedness_from_continuity,
)
from fejercert.rates import (
    CapExceeded,
    EvalBudget,
    LiminfBound,
    MetaFunctional,
    RateInputs,
    const_functional,
    eval_at_functional,
    functional_from_modulus,
    omega,
    omega_tilde,
    psi,
    psi_hat,
    psi_plus,
    psi_tilde,
)

from .reference import naive_omega, naive_omega_tilde, naive_psi, naive_psi_hat, naive_psi_tilde


def _monotone_inputs(k, g, phi=None, chi=None, gh=None, gamma=None, **kw):
    return RateInputs(
        k,
        g,
        phi or identity(),
        chi or fejer_additive(),
        gh or gh_identity(),
        gamma or tb_modulus_interval(),
        **kw,
    )


def _unbounded():
    return EvalBudget(saturation=None)


# ---------------------------------------------------------------------------
# psi
# ---------------------------------------------------------------------------


def test_psi_monotone_sequence_instance():
    cert = psi(_monotone_inputs(0, const(1)), _unbounded())
    assert cert.bound == 4
    assert cert.iterates == [0, 1, 2, 3, 4]
    assert cert.p_steps == 4

    cert = psi(_monotone_inputs(1, affine(1, 1)), _unbounded())
    assert cert.bound == 255  # (n -> 2n+1) iterated 8 times from 0


def test_psi_zero_counter_collapses():
    cert = psi(_monotone_inputs(0, const(0), chi=fejer_window_linear()), _unbounded())
    assert cert.bound == 0


def test_psi_iterates_nondecreasing():
    cert = psi(_monotone_inputs(2, affine(2, 1), phi=affine(3, 1)), _unbounded())
    assert all(a <= b for a, b in zip(cert.iterates, cert.iterates[1:]))


def test_psi_rejects_non_monotone_phi():
    with pytest.raises(ValueError):
        _monotone_inputs(0, const(1), phi=TableModulus([3, 1], tail=const(9)))


@st.composite
def small_instances(draw):
    # the naive oracle literally scans [0, iterate] per step, so keep the
    # recursion depth and growth small enough for full scans
    k = draw(st.integers(0, 1))
    g = draw(st.sampled_from([const(0), const(1), const(3), affine(1, 0), affine(1, 1)]))
    phi = draw(st.sampled_from([identity(), affine(1, 2)]))
    chi = draw(st.sampled_from([fejer_additive(), fejer_window_linear(), fejer_const(2)]))
    gamma = draw(st.sampled_from([const(2), const(3)]))
    return k, g, phi, chi, gamma


@given(small_instances())
def test_psi_matches_naive_oracle(inst):
    k, g, phi, chi, gamma = inst
    cert = psi(RateInputs(k, g, phi, chi, gh_identity(), gamma), _unbounded())
    expected = naive_psi(k, g, phi, chi, lambda n: n, lambda n: n, gamma)
    assert cert.bound == expected


@given(small_instances())
def test_psi_square_pair_matches_naive(inst):
    k, g, phi, chi, gamma = inst
    gh = gh_square()
    cert = psi(RateInputs(k, g, phi, chi, gh, gamma), _unbounded())
    expected = naive_psi(k, g, phi, chi, gh.alpha_g, gh.beta_h, gamma)
    assert cert.bound == expected


def test_psi_non_monotone_table_counter_exact():
    # chi^M_g must be the literal running max, not a shortcut
    g = TableModulus([5, 0, 7, 1], tail=affine(1, 1))
    cert = psi(_monotone_inputs(0, g), _unbounded())
    expected = naive_psi(0, g, identity(), fejer_additive(), lambda n: n, lambda n: n, tb_modulus_interval())
    assert cert.bound == expected


# ---------------------------------------------------------------------------
# psi_tilde
# ---------------------------------------------------------------------------


def test_psi_tilde_k0_examples():
    closed = uniform_closedness_from_continuity(identity())  # omega_F = 4k+3
    inp = _monotone_inputs(1, const(1), closed=closed)
    cert = psi_tilde(inp, _unbounded())
    assert cert.k0 == 3

    inp2 = _monotone_inputs(2, const(1), chi=fejer_const(0), closed=closed)
    assert inp2.chi.floored(closed.delta_f(2))(9, 9, 9) == 5


def test_psi_tilde_requires_closedness():
    with pytest.raises(ValueError):
        psi_tilde(_monotone_inputs(0, const(1)))


@given(small_instances())
def test_psi_tilde_matches_naive(inst):
    k, g, phi, chi, gamma = inst
    closed = uniform_closedness_from_continuity(identity())
    cert = psi_tilde(RateInputs(k, g, phi, chi, gh_identity(), gamma, closed=closed), _unbounded())
    expected = naive_psi_tilde(
        k, g, phi, chi, lambda n: n, lambda n: n, gamma,
        closed.delta_f, closed.omega_f,
    )
    assert cert.bound == expected


# ---------------------------------------------------------------------------
# omega / omega_tilde
# ---------------------------------------------------------------------------


def test_omega_trivial():
    cert = omega(3, affine(1, 1), const_functional(0), const_functional(0), _unbounded())
    assert cert.bound == 0


def test_omega_eval_at_zero_example():
    cert = omega(0, const(1), eval_at_functional(0), const_functional(0), _unbounded())
    assert cert.bound == 1  # h(0) = g*(0) = 0 + g^M(0) = 1


def test_omega_requires_selfmajorizing():
    bad = MetaFunctional("bad", False, lambda k, g, b: 0)
    with pytest.raises(ValueError):
        omega(0, const(1), bad, const_functional(0))


@given(st.integers(0, 2), st.sampled_from([const(1), affine(1, 1), const(3)]))
def test_omega_matches_naive(k, g):
    delta = eval_at_functional(0)
    theta = functional_from_modulus(affine(1, 2))
    cert = omega(k, g, delta, theta, _unbounded())
    expected = naive_omega(
        k, g, lambda kk, gg: gg(0), lambda kk, gg: kk + 2
    )
    assert cert.bound == expected


def test_omega_tilde_identity_rate():
    zero = const_functional(0)
    for k in range(5):
        cert = omega_tilde(k, affine(1, 1), zero, identity(), _unbounded())
        assert cert.bound == k


def test_omega_tilde_const_rate_example():
    c = 4
    delta = eval_at_functional(0)
    for g in (const(1), affine(1, 1), affine(2, 0)):
        cert = omega_tilde(0, g, delta, const(c), _unbounded())
        gm = majorant(g)
        assert cert.bound == gm(c) + 2 * c


@given(st.integers(0, 2), st.sampled_from([const(1), affine(1, 1)]))
def test_omega_tilde_matches_naive(k, g):
    delta = eval_at_functional(1)
    phi_pp = affine(2, 1)
    cert = omega_tilde(k, g, delta, phi_pp, _unbounded())
    expected = naive_omega_tilde(k, g, lambda kk, gg: gg(1), phi_pp)
    assert cert.bound == expected


# ---------------------------------------------------------------------------
# psi_plus
# ---------------------------------------------------------------------------


def test_psi_plus_idempotent_on_monotone():
    inp = _monotone_inputs(0, const(1))
    fn = psi_plus(inp, identity())
    for k in range(3):
        for g in (const(1), affine(1, 1), const(3)):
            direct = psi(_monotone_inputs(k, g), _unbounded()).bound
            assert fn(k, g, _unbounded()) == direct


def test_psi_plus_majorizes_table_chi():
    chi = FejerModulus("table_n", (), table=TableModulus([5, 1], tail=affine(1, 1)))
    inp = RateInputs(0, const(1), identity(), chi, gh_identity(), tb_modulus_interval())
    fn = psi_plus(inp, identity())
    maj = chi.box_majorant()
    expected = psi(
        RateInputs(0, const(1), identity(), maj, gh_identity(), tb_modulus_interval()),
        _unbounded(),
    ).bound
    assert fn(0, const(1), _unbounded()) == expected


# ---------------------------------------------------------------------------
# psi_hat
# ---------------------------------------------------------------------------


def test_psi_hat_requires_xi():
    with pytest.raises(ValueError):
        psi_hat(_monotone_inputs(0, const(1)), LiminfBound(identity()))


def test_psi_hat_shape_vs_psi():
    # zero error terms: same recursion as psi but with the window constant
    # bumped from 2b+1 to 4b+3 and one extra step.  At identity moduli the
    # k=0 variant runs the same steps as psi at the k with matching
    # constant (4k+3 = 7, i.e. k=1), plus one.
    inp = _monotone_inputs(0, const(1), xi=const(0))
    cert = psi_hat(inp, LiminfBound(identity()), _unbounded())
    assert cert.details["r"] == 7  # 4*beta(1)+3 with identity beta
    ref = psi(_monotone_inputs(1, const(1)), _unbounded())
    assert ref.details["r"] == 7
    assert cert.p_steps == ref.p_steps + 1
    assert cert.iterates[: len(ref.iterates)] == ref.iterates


def test_psi_hat_hand_trace():
    # k=0, g == 1, gamma = k+1, identity pair, liminf bound n + k:
    # R = 7, P = 9, xi == 0, step x -> (x + 1) + 0: bound 9
    inp = _monotone_inputs(0, const(1), xi=const(0))
    cert = psi_hat(inp, LiminfBound(identity()), _unbounded())
    assert cert.bound == 9
    assert cert.iterates == list(range(10))


def test_psi_hat_geometric_tail_modulus():
    # xi(n) = ceil(log2(n+2)) + 1 is a strict Cauchy modulus for 2^-i
    from fejercert.moduli import CeilLog2Modulus

    xi = CeilLog2Modulus(shift=2, plus=1)
    for n in range(200):
        tail = 2.0 ** (1 - xi(n))
        assert tail < 1.0 / (n + 1)
    # the unshifted variant fails strictness at n = 0
    xi_bad = CeilLog2Modulus(shift=2, plus=0)
    assert not (2.0 ** (1 - xi_bad(0)) < 1.0)


@given(st.integers(0, 2), st.sampled_from([const(1), affine(1, 1)]))
def test_psi_hat_matches_naive(k, g):
    xi = affine(1, 2)
    lim = LiminfBound(affine(2, 1))
    inp = _monotone_inputs(k, g, xi=xi, gamma=const(2))  # small P for full scans
    cert = psi_hat(inp, lim, _unbounded())
    expected = naive_psi_hat(
        k, g, lambda kk, nn: lim(kk, nn), fejer_additive(),
        lambda n: n, lambda n: n, const(2), xi,
    )
    assert cert.bound == expected


# ---------------------------------------------------------------------------
# budget and saturation behavior
# ---------------------------------------------------------------------------


def test_cap_exceeded_is_typed():
    budget = EvalBudget(g_evals=10, saturation=None)
    with pytest.raises(CapExceeded):
        psi(_monotone_inputs(2, affine(1, 1)), budget)


def test_saturation_stops_early_with_floor():
    budget = EvalBudget(saturation=10**6)
    cert = psi(_monotone_inputs(2, affine(1, 1), phi=affine(9, 7)), budget)
    assert cert.saturated
    assert cert.bound is None
    assert cert.bound_floor > 10**6
    assert cert.dominates(10**6)
    assert not cert.dominates(cert.bound_floor + 1)
    assert all(a <= b for a, b in zip(cert.iterates, cert.iterates[1:]))


def test_stabilization_shortcut_is_exact():
    # constant counter + window modulus ignoring n: iterates stabilize,
    # and the stabilized value equals the full naive recursion
    inp = _monotone_inputs(1, const(2), chi=fejer_window_linear(), gamma=const(50))
    cert = psi(inp, _unbounded())
    expected = naive_psi(
        1, const(2), identity(), fejer_window_linear(), lambda n: n, lambda n: n, const(50)
    )
    assert cert.bound == expected
    assert cert.stabilized_at is not None


def test_majorant_stability_never_decreases_bound():
    # replacing the counter by its majorant never shrinks the bound
    for values, tail in [([5, 0, 7], affine(1, 1)), ([2, 9, 1], const(9)), ([0, 4], affine(2, 0))]:
        g = TableModulus(values, tail=tail)
        base = psi(_monotone_inputs(1, g), _unbounded()).bound
        bigger = psi(_monotone_inputs(1, majorant(g)), _unbounded()).bound
        assert bigger >= base


def test_certificate_json():
    cert = psi(_monotone_inputs(0, const(1)), _unbounded())
    obj = cert.to_json()
    assert obj["bound"] == "4" and obj["theorem"] == "psi"
    assert obj["iterates"] == ["0", "1", "2", "3", "4"]
