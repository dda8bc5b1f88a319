"""Trajectories of the sigma-form and the derived Painleve II fields."""

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tronquee.errors import SeedError, ValidationError
from tronquee.painleve import (
    Params,
    derived_fields,
    first_integral,
    integrate,
    locate_poles,
    pii_residual,
    seed_at_plus_infinity,
    solve,
    stokes_constraint,
    stokes_triple,
)

TOL = 1e-30


def _airy_w(s):
    return mp.airyai(s, derivative=1) / mp.airyai(s)


def _q_second_derivative(traj, s):
    """q'' in x from the Hamiltonian flow, where q(x) = -2^(-1/3) w(-2^(-1/3) x)."""
    sig, d1, d2 = traj.sigma_derivs(s, 3)
    u, du, w = -d1, -d2, traj.w_at(s)
    dw = s + 2 * u - w * w
    d2w = 1 + 2 * du - 2 * w * dw
    return -d2w / 2


# -- parameters -------------------------------------------------------------------


def test_params_validation():
    with pytest.raises(ValidationError):
        Params(-0.5, 0)
    with pytest.raises(ValidationError):
        Params(0, -1)


def test_params_beta_and_nu():
    p = Params(0, 2)
    assert abs(p.beta - 1j * mp.log(2) / (2 * mp.pi)) < mp.mpf(10) ** -50
    assert abs(mp.expjpi(-2 * p.beta) - 2) < mp.mpf(10) ** -50
    assert Params(0, 0).beta is None
    assert Params("0.3", 0).nu == mp.mpf("1.1")


@given(st.floats(min_value=-0.45, max_value=2), st.floats(min_value=-1, max_value=1))
def test_from_beta_round_trip(alpha, b):
    p = Params.from_beta(alpha, b)
    assert abs(mp.im(p.beta) - mp.mpf(b)) < mp.mpf(10) ** -40


@pytest.mark.parametrize(
    "alpha,omega,expected",
    [
        (0, 0, (-1, 0, -1)),
        ("0.25", 1, (1j, 1, -1j)),
        ("0.5", 3, (1, 3, 1)),
    ],
)
def test_stokes_triple(alpha, omega, expected):
    p = Params(alpha, omega)
    got = stokes_triple(p)
    assert all(abs(g - e) < mp.mpf(10) ** -40 for g, e in zip(got, expected))


@given(st.floats(min_value=-0.45, max_value=3), st.floats(min_value=0, max_value=10))
def test_stokes_constraint_holds(alpha, omega):
    assert abs(stokes_constraint(Params(alpha, omega))) < mp.mpf(10) ** -40


# -- seeds ------------------------------------------------------------------------


def test_seed_vanishes_for_airy_member():
    st_ = seed_at_plus_infinity(Params(0, 1), 10)
    assert st_.sigma == 0 and st_.dsigma == 0 and st_.d2sigma == 0


def test_seed_mode_magnitude():
    # The omega = 0 and omega = 1 seeds at alpha = 0 differ by the unit mode,
    # Gamma(1)/(4 pi) s^(-1/2) exp(-(4/3) s^(3/2)) to leading order.
    s0 = mp.mpf(10)
    a = seed_at_plus_infinity(Params(0, 1), s0)
    b = seed_at_plus_infinity(Params(0, 0), s0)
    predicted = s0 ** mp.mpf(-0.5) * mp.exp(-mp.mpf(4) / 3 * s0**1.5) / (4 * mp.pi)
    assert abs(abs(b.dsigma - a.dsigma) / predicted - 1) < 2 * s0 ** mp.mpf(-1.5)


def test_seed_matches_leading_terms():
    s0 = mp.mpf(12)
    seed = seed_at_plus_infinity(Params("0.3", 0), s0)
    leading = -2 * mp.mpf("0.3") * mp.sqrt(s0) - mp.mpf("0.09") / s0
    assert abs(seed.sigma - leading) < s0 ** mp.mpf(-2.5)


def test_seed_too_close_raises_with_suggestion():
    with pytest.raises(SeedError) as info:
        seed_at_plus_infinity(Params("0.3", 0), 2)
    assert info.value.suggested_s0 > 2


def test_integrate_rejects_bad_range():
    with pytest.raises(ValidationError):
        integrate(Params(0, 1), s0=5, s_end=6)
    with pytest.raises(ValidationError):
        integrate(Params(0, 1), s_end=-1, tol=0)


# -- the closed-form member ---------------------------------------------------------


def test_airy_member_sigma_vanishes(airy_traj):
    for k in range(41):
        s = -8 + mp.mpf(k) / 2
        assert abs(airy_traj.sigma_derivs(s, 1)[0]) <= mp.mpf(10) ** -20


@given(st.floats(min_value=-8, max_value=3))
def test_airy_member_w_is_airy_log_derivative(airy_traj, s):
    s = mp.mpf(s)
    zeros = [mp.airyaizero(k) for k in range(1, 6)]
    if any(abs(s - z) < mp.mpf(10) ** -3 for z in zeros):
        return
    assert abs(airy_traj.w_at(s) - _airy_w(s)) <= mp.mpf(10) ** -10 * (1 + abs(_airy_w(s)))


def test_airy_member_poles_are_airy_zeros(airy_traj):
    poles = locate_poles(airy_traj)
    zeros = [mp.airyaizero(k) for k in range(1, 6) if mp.airyaizero(k) > -8]
    assert len(poles) == len(zeros)
    for pole, zero in zip(sorted(poles, key=lambda pl: -pl.location), zeros):
        assert abs(pole.location - zero) < mp.mpf(10) ** -20
        assert pole.residue == 1


def test_airy_derived_q_solves_pii():
    # alpha = 0: q(x) = -2^(-1/3) Ai'(t)/Ai(t), t = -2^(-1/3) x, with nu = 1/2
    c = mp.cbrt(2) ** -1
    p = Params(0, 1)

    def q(x):
        return -c * _airy_w(-c * x)

    for x in (mp.mpf(1), mp.mpf("-0.5"), mp.mpf(2)):
        res = pii_residual(q(x), mp.diff(q, x), mp.diff(q, x, 2), x, p)
        assert abs(res) < mp.mpf(10) ** -12


def test_pii_rational_solution():
    # q = 1/x solves q'' = 2q^3 + xq - nu with nu = 1 (alpha = 1/4)
    p = Params("0.25", 0)
    for x in (mp.mpf("0.7"), mp.mpf(3)):
        assert abs(pii_residual(1 / x, -1 / x**2, 2 / x**3, x, p)) < mp.mpf(10) ** -50


# -- pole-free members --------------------------------------------------------------


def test_pole_free_member_has_no_poles(hm_traj):
    assert hm_traj.poles == []
    assert hm_traj.s_min <= -16


def test_first_integral_conserved(hm_traj, oscillatory_traj, mixed_traj, airy_traj):
    for traj in (hm_traj, oscillatory_traj, mixed_traj, airy_traj):
        assert traj.max_drift <= 10 * traj.tol


@given(st.floats(min_value=-16, max_value=12))
def test_first_integral_pointwise(hm_traj, s):
    s = mp.mpf(s)
    state = hm_traj.sigma_derivs(s, 3)
    assert abs(first_integral(s, state, hm_traj.params.alpha)) <= 10 * TOL * (1 + s**2)


@given(st.floats(min_value=-12, max_value=10))
def test_derived_q_solves_pii_along_trajectory(hm_traj, s):
    s = mp.mpf(s)
    p = hm_traj.params
    u, w, H, q, q1 = derived_fields(hm_traj.state_at(s), p, hm_traj.w_at(s))
    x = -mp.cbrt(2) * s
    res = pii_residual(q, q1, _q_second_derivative(hm_traj, s), x, p)
    assert abs(res) <= 100 * TOL * (1 + abs(x) ** 3)


def test_classic_hastings_mcleod_left_behaviour(classic_hm_traj):
    # alpha = -1/4: sigma - s^2/4 = O(|s|^-4) with vanishing |s|^-1 coefficient
    for s in (-8, -12):
        s = mp.mpf(s)
        assert abs(classic_hm_traj.sigma_derivs(s, 1)[0] - s**2 / 4) < 10 / abs(s) ** 4


def test_oscillatory_member_square_root_growth(oscillatory_traj):
    # sigma / |s|^(1/2) -> 2 i beta = -ln 2 / pi for omega = 2
    s = mp.mpf(-16)
    ratio = oscillatory_traj.sigma_derivs(s, 1)[0] / mp.sqrt(-s)
    assert abs(ratio + mp.log(2) / mp.pi) < 0.05 / abs(s) ** 0.5
    assert len(oscillatory_traj.poles) > 0


def test_poles_stable_under_tolerance_change():
    p = Params(0, 2)
    coarse = integrate(p, s_end=-6, tol=1e-20)
    fine = integrate(p, s_end=-6, tol=1e-24)
    assert len(coarse.poles) == len(fine.poles) > 0
    for a, b in zip(coarse.poles, fine.poles):
        assert abs(a.location - b.location) < mp.mpf(10) ** -15
        assert a.residue == b.residue


def test_solve_cache_reuses_longer_trajectory(hm_traj):
    assert solve(Params("0.3", 0), s_end=-4) is hm_traj


@given(
    st.floats(min_value=-5, max_value=5),
    st.floats(min_value=-3, max_value=3),
    st.floats(min_value=-3, max_value=3),
    st.floats(min_value=0.1, max_value=3),
    st.floats(min_value=-1, max_value=1),
)
def test_third_order_form_follows_from_first_integral(s, a, b, c, alpha):
    # Along any path with sigma''' = 4 s sigma' - 6 sigma'^2 - 2 sigma the
    # first integral is constant; check d/ds of it vanishes by the chain rule.
    s, a, b, c = (mp.mpf(v) for v in (s, a, b, c))
    d3 = 4 * s * b - 6 * b**2 - 2 * a

    def fi(t, sg, s1, s2):
        return first_integral(t, (sg, s1, s2), alpha)

    partials = [mp.diff(lambda x, i=i: fi(*[x if j == i else v for j, v in enumerate((s, a, b, c))]), (s, a, b, c)[i]) for i in range(4)]
    total = partials[0] + partials[1] * b + partials[2] * c + partials[3] * d3
    assert abs(total) < mp.mpf(10) ** -30 * (1 + abs(c) * (abs(s) + 1) ** 3)
