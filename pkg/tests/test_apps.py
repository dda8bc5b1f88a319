"""Random-matrix applications and constant extraction."""

import mpmath as mp
import pytest

from tronquee.apps import (
    fit_constant,
    fit_gap_expansion,
    cosine_safe_nodes,
    i1_decay_check,
    i2_constant_fit,
    predicted_i2_constant,
    p34_tail_identity,
    thinned_gue_log_cdf,
    transition_constants,
    tw_left_tail_fit,
    tw_log_cdf,
    tw_log_cdf_q_route,
)
from tronquee.errors import ValidationError
from tronquee.painleve import Params
from tronquee.regint import I2
from tronquee.series import c0, theta

# Tracy-Widom (beta = 2) distribution at x = -2 from published tables.
TW_CDF_AT_MINUS_2 = mp.mpf("0.413224142505")


def test_transition_constants():
    soft, hard = transition_constants(0)
    assert soft == c0() and abs(hard) < mp.mpf(10) ** -45
    _, hard = transition_constants("0.5")
    assert abs(hard + mp.log(2 * mp.pi) / 2) < mp.mpf(10) ** -45
    _, hard = transition_constants("0.3")
    assert abs(hard - (mp.log(mp.barnesg(mp.mpf("1.6"))) - mp.mpf("0.3") * mp.log(2 * mp.pi))) < mp.mpf(10) ** -40
    with pytest.raises(ValidationError):
        transition_constants("-0.5")


def test_tw_right_tail():
    value = tw_log_cdf(8)
    assert -mp.mpf(10) ** -10 <= value <= 0


def test_tw_against_published_value():
    assert abs(mp.exp(tw_log_cdf(-2)) - TW_CDF_AT_MINUS_2) < mp.mpf(10) ** -11


def test_tw_monotone_on_grid():
    values = [tw_log_cdf(x) for x in range(-4, 5)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[-1] <= 0


@pytest.mark.parametrize("x", ["-5", "-4", "-3", "-2", "-1", "0", "1", "2", "3", "4"])
def test_tw_two_routes_agree(x):
    assert abs(tw_log_cdf(x) - tw_log_cdf_q_route(x)) < mp.mpf(10) ** -25


def test_tw_half_weight_route_disagrees():
    # A factor 1/2 in front of the q-route integral is not the distribution.
    gap = abs(tw_log_cdf(-2) - tw_log_cdf_q_route(-2, weight="0.5"))
    assert gap > mp.mpf("0.4")


def test_tw_left_tail_constant():
    fit = tw_left_tail_fit()
    assert abs(fit.constant - c0()) < mp.mpf(10) ** -3
    assert abs(fit.coefficients["|s|^3"] + mp.mpf(1) / 12) < mp.mpf(10) ** -4
    assert abs(fit.coefficients["ln|s|"] + mp.mpf(1) / 8) < mp.mpf(10) ** -3
    assert fit.window == (-14, -9) and fit.nodes == 11


def test_thinned_nonpositive_and_vanishing_tail():
    values = [thinned_gue_log_cdf(s, "0.5") for s in (-6, -2, 0, 3)]
    assert all(v <= 0 for v in values)
    assert abs(thinned_gue_log_cdf(10, "0.5")) < mp.mpf(10) ** -15


def test_thinned_tends_to_zero_as_omega_tends_to_one():
    assert abs(thinned_gue_log_cdf(-3, "0.999999")) < mp.mpf(10) ** -4


def test_thinned_validation():
    for omega in (0, 1, "1.5"):
        with pytest.raises(ValidationError):
            thinned_gue_log_cdf(-1, omega)


@pytest.fixture(scope="module")
def thinned_samples():
    p = Params(0, "0.5")
    lo, hi = mp.mpf(-22), mp.mpf(-10)
    xs = [lo + (hi - lo) * k / 24 for k in range(25)]
    with mp.workprec(192):
        return p, xs, [I2(x, p).value for x in xs]


def _oscillatory_basis(p):
    return {
        "cos(theta) |s|^(-3/2)": lambda x: mp.cos(theta(x, p)) * abs(x) ** mp.mpf(-1.5),
        "sin(theta) |s|^(-3/2)": lambda x: mp.sin(theta(x, p)) * abs(x) ** mp.mpf(-1.5),
    }


def test_thinned_constant(thinned_samples):
    p, xs, _ = thinned_samples
    fit = i2_constant_fit(p, window=(-22, -10), nodes=25)
    # ln F = -I2, so the constant of ln F is ln(G(1+beta)G(1-beta)) - 3 beta^2 ln 2.
    assert abs(fit.constant - predicted_i2_constant(p)) < mp.mpf(10) ** -3


def test_thinned_leading_coefficient(thinned_samples):
    p, xs, values = thinned_samples
    extra = _oscillatory_basis(p)
    fit = fit_constant(xs, values, ["|s|^(3/2)", "ln|s|", "1", "|s|^(-3/2)", *extra], extra)
    expected = mp.re(mp.mpf(4) / 3 * 1j * p.beta)
    assert abs(fit.coefficients["|s|^(3/2)"] - expected) < mp.mpf(10) ** -4 * abs(expected)


def test_p34_trivial_member():
    tail = p34_tail_identity(2, Params(0, 1))
    assert abs(tail.weighted) < mp.mpf(10) ** -25
    assert abs(tail.hamiltonian) < mp.mpf(10) ** -25


@pytest.mark.parametrize("alpha,omega,t", [("0.3", "0", "2"), ("0.2", "0.5", "3")])
def test_p34_integration_by_parts(alpha, omega, t):
    tail = p34_tail_identity(t, Params(alpha, omega))
    assert tail.parts_residual <= mp.mpf(10) ** -8


def test_p34_tails_vanish_at_infinity():
    p = Params("0.3", 0)
    near, far = p34_tail_identity(2, p), p34_tail_identity(8, p)
    assert abs(far.hamiltonian) < abs(near.hamiltonian)
    assert abs(far.hamiltonian) < mp.mpf(10) ** -2


def test_p34_validation():
    with pytest.raises(ValidationError):
        p34_tail_identity(0, Params("0.3", 0))


def test_fit_constant_recovers_synthetic_data():
    xs = [mp.mpf(-10 - k) for k in range(8)]
    ys = [abs(x) ** 3 / 7 - 2 * mp.log(abs(x)) + mp.mpf("0.25") + 3 / abs(x) ** 3 for x in xs]
    fit = fit_gap_expansion(xs, ys)
    assert abs(fit.constant - mp.mpf("0.25")) < mp.mpf(10) ** -30
    assert abs(fit.coefficients["|s|^3"] - mp.mpf(1) / 7) < mp.mpf(10) ** -30
    assert fit.residual_norm < mp.mpf(10) ** -30


def test_fit_constant_validation():
    with pytest.raises(ValidationError):
        fit_constant([1, 2, 3], [1, 2, 3], ["1"])
    with pytest.raises(ValidationError):
        fit_constant([1, 2, 3, 4], [1, 2, 3, 4], ["nonsense"])


def test_cosine_safe_nodes():
    p = Params(0, 2)
    nodes = cosine_safe_nodes(p)
    assert 10 < len(nodes) < 34
    with pytest.raises(ValidationError):
        cosine_safe_nodes(Params(0, 0))


def test_decay_check_needs_geometric_nodes():
    with pytest.raises(ValidationError):
        i1_decay_check(Params(0, 0), nodes=(20, 30, 80))
