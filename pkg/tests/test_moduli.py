import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fejercert.moduli import (
    AffineModulus,
    ApproximationFamily,
    CeilLog2Modulus,
    CeilPowModulus,
    ConstModulus,
    FejerModulus,
    Modulus,
    PolyModulus,
    TableModulus,
    affine,
    const,
    diameter_witness,
    fejer_additive,
    fejer_asymptotic,
    fejer_cond_e,
    fejer_const,
    fejer_ppa,
    fejer_spc,
    fejer_window_linear,
    fejer_window_linear_double,
    gh_identity,
    gh_scaled_shrink,
    gh_square,
    identity,
    majorant,
    modulus_i_to_ii,
    modulus_ii_to_i,
    tb_modulus_ball,
    tb_modulus_closure,
    tb_modulus_convex_hull,
    tb_modulus_interval,
    uniform_closedness_cond_e,
    uniform_closedness_from_continuity,
)
from fejercert.nat import DomainError

from .reference import has_close_pair

from fractions import Fraction


# ---------------------------------------------------------------------------
# Modulus expression kinds
# ---------------------------------------------------------------------------


def test_basic_kinds_evaluate():
    assert const(5)(123) == 5
    assert affine(2, 1)(10) == 21
    assert PolyModulus((1, 0, 2))(3) == 1 + 2 * 9
    assert CeilPowModulus(Fraction(3, 2), 2)(1) == 6  # ceil(1.5 * 4)
    assert CeilLog2Modulus(shift=2)(0) == 1
    assert CeilLog2Modulus(shift=2)(6) == 3  # ceil(log2(8))
    assert TableModulus([3, 1, 5], tail=const(7))(1) == 1
    assert TableModulus([3, 1, 5], tail=const(7))(10) == 7


def test_table_without_tail_rejects_beyond_length():
    t = TableModulus([3, 1, 5])
    assert t(2) == 5
    with pytest.raises(DomainError):
        t(3)


def test_nonneg_enforced():
    with pytest.raises(ValueError):
        const(-1)
    with pytest.raises(TypeError):
        affine(1, 0)(1.5)


@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 200))
def test_affine_is_monotone(a, b, upto):
    m = affine(a, b)
    assert m.monotone and m.spot_check_monotone(min(upto, 80))


_MODULUS_EXAMPLES = [
    const(7),
    affine(3, 2),
    PolyModulus((1, 2, 3)),
    CeilPowModulus(Fraction(7, 3), 2),
    CeilLog2Modulus(shift=2, plus=1),
    TableModulus([4, 1, 9], tail=affine(1, 9)),
    tb_modulus_ball(2, 1.0),
    tb_modulus_convex_hull(const(3), 1.5),
    modulus_i_to_ii(affine(1, 1)),
    modulus_ii_to_i(affine(1, 1)),
]


@pytest.mark.parametrize("mod", _MODULUS_EXAMPLES, ids=lambda m: m.kind)
def test_json_round_trip(mod):
    back = Modulus.from_json(mod.to_json())
    assert back.to_json() == mod.to_json()
    for n in (0, 1, 5, 17):
        assert back(n) == mod(n)


# ---------------------------------------------------------------------------
# Conversions between net-count and pair-collision moduli
# ---------------------------------------------------------------------------


def test_i_to_ii_examples():
    assert all(modulus_i_to_ii(const(5))(k) == 6 for k in range(20))
    g = modulus_i_to_ii(identity())
    assert g(0) == 2 and g(3) == 8
    assert modulus_i_to_ii(affine(1, 1))(2) == 7


def test_i_to_ii_pigeonhole_oracle(rng):
    # alpha(k)=k+1 is a net-count modulus for [0,1]; the converted
    # gamma(2)=7 must force a pair within 1/3 among any 8 points.
    for _ in range(300):
        pts = rng.uniform(0, 1, size=(8, 1))
        assert has_close_pair(pts, 1 / 3 + 1e-9)


def test_ii_to_i_examples():
    a = modulus_ii_to_i(affine(1, 1))
    assert [a(k) for k in range(4)] == [0, 1, 2, 3]
    assert modulus_ii_to_i(const(2))(17) == 1
    assert modulus_ii_to_i(tb_modulus_ball(1, 1.0))(0) == 1  # gamma(0)=2


def test_ii_to_i_rejects_zero():
    with pytest.raises(DomainError):
        modulus_ii_to_i(const(0))(3)


@given(st.integers(0, 20), st.integers(0, 20), st.integers(0, 100))
def test_conversion_round_trip(a, b, k):
    alpha = affine(a, b)
    assert modulus_ii_to_i(modulus_i_to_ii(alpha))(k) == alpha(2 * k + 1)


# ---------------------------------------------------------------------------
# Total-boundedness moduli
# ---------------------------------------------------------------------------


def test_interval_modulus():
    g = tb_modulus_interval()
    assert g(0) == 1 and g(9) == 10
    pts = np.array([[0.0], [0.6], [0.3]])
    assert has_close_pair(pts, 0.5 + 1e-9)  # gamma(1)+1 = 3 points


def test_ball_modulus_values():
    assert tb_modulus_ball(1, 1.0)(0) == 2
    assert tb_modulus_ball(2, 1.0)(0) == 9
    with pytest.raises(ValueError):
        tb_modulus_ball(0, 1.0)
    with pytest.raises(ValueError):
        tb_modulus_ball(2, 0.0)


def test_ball_modulus_pigeonhole(rng):
    gamma = tb_modulus_ball(2, 1.0)
    for _ in range(200):
        pts = rng.normal(size=(gamma(0) + 1, 2))
        pts *= rng.uniform(size=(len(pts), 1)) ** 0.5 / np.maximum(
            np.linalg.norm(pts, axis=1, keepdims=True), 1e-12
        )
        assert has_close_pair(pts, 1.0 + 1e-9)


def test_hull_modulus_value_and_closure():
    assert tb_modulus_convex_hull(const(1), 1.0)(0) == 6
    g = affine(2, 3)
    assert tb_modulus_closure(g) is g


def test_hull_modulus_pigeonhole(rng):
    # 3-point base set in the unit disc; exhaustive pair scan on sampled
    # hull tuples of size gamma_bar(k)+1
    for k in (0, 1):
        for _ in range(25):
            base = rng.normal(size=(3, 2))
            base /= np.maximum(np.linalg.norm(base, axis=1, keepdims=True), 1.0)
            gamma_bar = tb_modulus_convex_hull(const(3), 1.0)(k)
            weights = rng.dirichlet(np.ones(3), size=gamma_bar + 1)
            pts = weights @ base
            from fejercert._kernels import close_pair

            i, j = close_pair(pts, 1.0 / (k + 1) + 1e-9)
            assert i >= 0


# ---------------------------------------------------------------------------
# Majorants
# ---------------------------------------------------------------------------


def test_majorant_of_monotone_is_identity_object():
    m = affine(2, 1)
    assert majorant(m) is m


def test_majorant_tables():
    m = TableModulus([3, 1, 5])
    f = majorant(m, cap=2)
    assert [f(n) for n in range(3)] == [3, 3, 5]
    with pytest.raises(DomainError):
        f(3)
    m2 = TableModulus([0, 2, 1, 4], tail=affine(1, 1))
    f2 = majorant(m2)
    assert [f2(n) for n in range(4)] == [0, 2, 2, 4]
    assert f2(10) == 11 and f2.monotone


@given(st.lists(st.integers(0, 30), min_size=1, max_size=8))
def test_majorant_dominates_and_monotone(values):
    m = TableModulus(values, tail=const(max(values)))
    f = majorant(m)
    prev = 0
    for n in range(len(values) + 3):
        assert f(n) >= m(n)
        assert f(n) >= prev
        prev = f(n)


# ---------------------------------------------------------------------------
# Closedness moduli
# ---------------------------------------------------------------------------


def test_closedness_from_continuity():
    c = uniform_closedness_from_continuity(identity())
    assert [c.omega_f(k) for k in range(4)] == [3, 7, 11, 15]
    assert [c.delta_f(k) for k in range(4)] == [1, 3, 5, 7]
    c2 = uniform_closedness_from_continuity(affine(2, 2))  # Lipschitz-2 map
    assert c2.omega_f(0) == 8


def test_closedness_cond_e():
    c = uniform_closedness_cond_e(3)
    assert [c.delta_f(k) for k in range(3)] == [5, 11, 17]
    assert c.omega_f(1) == 7


# ---------------------------------------------------------------------------
# Transformation moduli
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "gh,b", [(gh_identity(), 1.0), (gh_square(), 1.0), (gh_scaled_shrink(2), 1.0)]
)
def test_gh_contracts_on_grid(gh, b):
    grid = np.linspace(0.0, 2 * b, 2500)
    tau = 1e-9
    for k in range(8):
        bound_a = 1.0 / (gh.alpha_g(k) + 1)
        bound_h = 1.0 / (gh.beta_h(k) + 1)
        for a in grid:
            if a <= bound_a:
                assert gh.g_fn(a) <= 1.0 / (k + 1) + tau
            if gh.h_fn(a) <= bound_h:
                assert a <= 1.0 / (k + 1) + tau


def test_gh_square_values():
    gh = gh_square()
    # beta_H(k) = (k+1)^2 - 1: the square of the stated k^2 fails the
    # defining contract at k >= 1 (a = 1/sqrt(k^2+1) slips through)
    assert gh.alpha_g(4) == 2 and gh.beta_h(3) == 15
    assert gh.beta_h(0) == 0


def test_gh_scaled_values():
    gh = gh_scaled_shrink(2)
    assert gh.beta_h(4) == 40  # ceil(e^2) = 8


# ---------------------------------------------------------------------------
# Window moduli
# ---------------------------------------------------------------------------


def test_fejer_family_values():
    assert fejer_additive()(2, 3, 9) == 5
    assert fejer_window_linear()(7, 3, 4) == 15
    assert fejer_window_linear_double()(1, 2, 3) == 16
    assert fejer_spc(1.0)(0, 1, 0) == 6
    assert fejer_cond_e(3, 2)(0, 2, 0) == 3
    assert fejer_asymptotic(0)(2, 3, 1) == 30  # m(n+m)(r+1)
    assert fejer_asymptotic(1)(1, 1, 0) == 9  # m(n+m+K)ceil(e)(r+1)
    assert fejer_ppa()(2, 3, 1) == 6
    assert fejer_ppa()(0, 0, 5) == 0


def test_fejer_floored():
    chi = fejer_const(0).floored(5)
    assert chi(10, 10, 10) == 5


def test_fejer_box_majorant_table():
    chi = FejerModulus("table_n", (), table=TableModulus([5, 1], tail=affine(1, 1)))
    assert not chi.monotone
    maj = chi.box_majorant()
    assert maj(0, 9, 9) == 5 and maj(1, 0, 0) == 5
    assert maj(7, 0, 0) == 8


def test_fejer_json_round_trip():
    for chi in [
        fejer_additive(),
        fejer_window_linear(),
        fejer_spc(1.5),
        fejer_cond_e(3, 2),
        fejer_asymptotic(1),
        fejer_ppa(),
        fejer_const(4).floored(2),
    ]:
        back = FejerModulus.from_json(chi.to_json())
        for args in [(0, 0, 0), (1, 2, 3), (5, 1, 7)]:
            assert back(*args) == chi(*args)


# ---------------------------------------------------------------------------
# Approximation families
# ---------------------------------------------------------------------------


def test_family_membership_and_nesting(rng):
    fam = ApproximationFamily("toy", lambda p, k: abs(float(p[0])) * (k + 1) / (k + 2))
    pts = [np.array([v]) for v in rng.uniform(-1, 1, size=20)]
    assert fam.check_nesting(pts, range(6))
    assert fam.member(np.array([0.4]), 1)  # 0.4*2/3 = 0.267 <= 0.5
    assert not fam.member(np.array([0.9]), 3)


# ---------------------------------------------------------------------------
# Diameter witness
# ---------------------------------------------------------------------------


def test_diameter_witness_hand_traces():
    zero = lambda n: np.array([0.0])
    one = lambda n: np.array([1.0])
    five = lambda n: np.array([5.0])
    gamma = const(2)
    n, d = diameter_witness(zero, zero, gamma)
    assert n == 3 and d == 0.0
    n, d = diameter_witness(zero, one, gamma)
    assert n == 4 and d == 1.0
    n, d = diameter_witness(zero, five, gamma)
    assert n == 8 and d == 5.0


def test_diameter_witness_cap():
    far = lambda n: np.array([2.0e7])
    zero = lambda n: np.array([0.0])
    with pytest.raises(DomainError):
        diameter_witness(zero, far, const(3), cap=10**6)
