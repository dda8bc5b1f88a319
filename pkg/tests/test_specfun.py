"""Special functions checked against closed forms and independent routes."""

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tronquee.errors import DomainError
from tronquee.specfun import (
    airy,
    bessel_ik,
    kummer_phi,
    kummer_psi,
    ln_barnes_g,
    ln_gamma,
    zeta_prime_minus_one,
)

TIGHT = mp.mpf(10) ** -45

reals = st.floats(min_value=0.05, max_value=6, allow_nan=False)
small_complex = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


def test_ln_gamma_integers():
    assert abs(ln_gamma(1)) < TIGHT
    assert abs(ln_gamma(5) - mp.log(24)) < TIGHT


def test_ln_gamma_modulus_on_imaginary_line():
    # |Gamma(1 + i)|^2 = pi / sinh(pi)
    value = mp.exp(2 * mp.re(ln_gamma(1 + 1j)))
    assert abs(value - mp.pi / mp.sinh(mp.pi)) < TIGHT


def test_ln_gamma_rejects_poles():
    for z in (0, -1, -7):
        with pytest.raises(DomainError):
            ln_gamma(z)


@given(reals)
def test_ln_gamma_recurrence(x):
    x = mp.mpf(x)
    assert abs(ln_gamma(x + 1) - ln_gamma(x) - mp.log(x)) < mp.mpf(10) ** -40


def test_barnes_g_integer_values():
    assert abs(ln_barnes_g(1)) < TIGHT
    assert abs(ln_barnes_g(4) - mp.log(2)) < TIGHT
    # G(5) = 1! 2! 3! = 12
    assert abs(ln_barnes_g(5) - mp.log(12)) < TIGHT


def test_barnes_g_half():
    # ln G(1/2) = ln 2/24 - ln(pi)/4 + 3 zeta'(-1)/2 + 1/8 ... written via Glaisher's constant
    expected = mp.mpf(1) / 24 * mp.log(2) - mp.log(mp.pi) / 4 + mp.mpf(1) / 8 - mp.mpf(3) / 2 * mp.log(mp.glaisher)
    assert abs(ln_barnes_g(mp.mpf(1) / 2) - expected) < TIGHT


@pytest.mark.parametrize("z", ["0.3", "1.7", "2.5", "3.9", "1+0.4j", "1.2-0.7j"])
def test_barnes_g_matches_mpmath(z):
    z = mp.mpmathify(z)
    assert abs(ln_barnes_g(z) - mp.log(mp.barnesg(z))) < mp.mpf(10) ** -40


@given(reals)
def test_barnes_g_functional_equation(x):
    x = mp.mpf(x)
    assert abs(ln_barnes_g(x + 1) - ln_barnes_g(x) - ln_gamma(x)) < mp.mpf(10) ** -35


@given(st.floats(min_value=0.01, max_value=0.5))
def test_barnes_g_conjugate_pair_is_real(b):
    beta = mp.mpc(0, b)
    total = ln_barnes_g(1 + beta) + ln_barnes_g(1 - beta)
    assert abs(mp.im(total)) < mp.mpf(10) ** -40


def test_barnes_g_rejects_left_half_plane():
    with pytest.raises(DomainError):
        ln_barnes_g(-0.5)


def test_airy_at_origin():
    ai, aip = airy(0)
    assert abs(ai - 1 / (mp.cbrt(9) * mp.gamma(mp.mpf(2) / 3))) < TIGHT
    assert abs(aip + 1 / (mp.cbrt(3) * mp.gamma(mp.mpf(1) / 3))) < TIGHT


@pytest.mark.parametrize("x", ["-12", "-6.5", "-2.338", "0.4", "3", "7.5", "15", "40"])
def test_airy_matches_mpmath(x):
    x = mp.mpf(x)
    ai, aip = airy(x)
    ref_ai, ref_aip = mp.airyai(x), mp.airyai(x, derivative=1)
    assert abs(ai - ref_ai) <= mp.mpf(10) ** -40 * (abs(ref_ai) + mp.mpf(10) ** -300)
    assert abs(aip - ref_aip) <= mp.mpf(10) ** -40 * (abs(ref_aip) + mp.mpf(10) ** -300)


@given(st.floats(min_value=-12, max_value=12))
def test_airy_solves_its_equation(x):
    x = mp.mpf(x)
    with mp.workprec(256):
        second = mp.diff(lambda t: airy(t)[1], x)
        ai = airy(x)[0]
    assert abs(second - x * ai) < mp.mpf(10) ** -30


def test_airy_complex_argument():
    z = mp.mpc(3, 4)
    ai, aip = airy(z)
    assert abs(ai - mp.airyai(z)) < mp.mpf(10) ** -40 * abs(ai)
    assert abs(aip - mp.airyai(z, derivative=1)) < mp.mpf(10) ** -40 * abs(aip)


@pytest.mark.parametrize("nu,z", [("0", "1.3"), ("0.6", "0.2"), ("1.4", "7"), ("-0.4", "2.5")])
def test_bessel_wronskian(nu, z):
    z = mp.mpf(z)
    i, k, ip, kp = bessel_ik(nu, z)
    assert abs(i * kp - ip * k + 1 / z) < mp.mpf(10) ** -40


def test_bessel_k0_logarithmic_origin():
    # K_0(z) + ln(z/2) + gamma -> 0 as z -> 0
    z = mp.mpf(10) ** -20
    k = bessel_ik(0, z)[1]
    assert abs(k + mp.log(z / 2) + mp.euler) < mp.mpf(10) ** -30


def test_bessel_origin_values_without_k():
    i, k, ip, kp = bessel_ik(0, 0, need_k=False)
    assert i == 1 and k is None and ip == 0


def test_bessel_domain():
    with pytest.raises(DomainError):
        bessel_ik(-1, 1)
    with pytest.raises(DomainError):
        bessel_ik(0, 0)


def test_kummer_phi_at_zero():
    assert kummer_phi("0.3", "1.7", 0) == 1


@given(small_complex, st.floats(min_value=-2, max_value=2), st.floats(min_value=0.2, max_value=3))
def test_kummer_transformation(z, a, b):
    # phi(a, b, z) = e^z phi(b - a, b, -z)
    z, a, b = mp.mpc(z), mp.mpf(a), mp.mpf(b)
    lhs = kummer_phi(a, b, z)
    rhs = mp.exp(z) * kummer_phi(b - a, b, -z)
    assert abs(lhs - rhs) <= mp.mpf(10) ** -40 * (1 + abs(lhs))


@pytest.mark.parametrize("a,b,z", [("0.5", "1.3", "2+1j"), ("-0.7", "0.4", "-3.2+0.5j"), ("1+0.2j", "2.6", "10j")])
def test_kummer_phi_matches_mpmath(a, b, z):
    a, b, z = (mp.mpmathify(v) for v in (a, b, z))
    ref = mp.hyp1f1(a, b, z)
    assert abs(kummer_phi(a, b, z) - ref) <= mp.mpf(10) ** -40 * abs(ref)


def test_kummer_phi_rejects_nonpositive_b():
    with pytest.raises(DomainError):
        kummer_phi(1, -2, 1)


@pytest.mark.parametrize("z", ["0.8", "3+2j", "-2+0.5j", "30j", "150-20j", "200"])
def test_kummer_psi_principal_sheet(z):
    a, b, z = mp.mpf("0.35"), mp.mpf("1.4"), mp.mpmathify(z)
    ref = mp.hyperu(a, b, z)
    assert abs(kummer_psi(a, b, z) - ref) <= mp.mpf(10) ** -35 * abs(ref)


@pytest.mark.parametrize("r,phase", [("2.5", "0.3"), ("160", "-0.4"), ("160", "1.2"), ("4", "-1.1")])
def test_kummer_psi_second_sheet(r, phase):
    # U(a, b, z e^{2 pi i}) = (1 - e^{-2 pi i b}) Gamma(1 - b)/Gamma(a - b + 1) M(a, b, z) + e^{-2 pi i b} U(a, b, z)
    a, b = mp.mpf("0.35"), mp.mpf("1.4")
    phase = mp.mpf(phase)
    z = mp.mpf(r) * mp.expj(phase)
    twist = mp.expjpi(-2 * b)
    expected = (1 - twist) * mp.gamma(1 - b) / mp.gamma(a - b + 1) * mp.hyp1f1(a, b, z) + twist * mp.hyperu(a, b, z)
    got = kummer_psi(a, b, z, arg=phase + 2 * mp.pi)
    assert abs(got - expected) <= mp.mpf(10) ** -30 * abs(expected)


def test_kummer_psi_large_argument_leading_term():
    a, b, z = mp.mpf("0.7"), mp.mpf("1.4"), mp.mpf(1000)
    scaled = kummer_psi(a, b, z) * z**a
    assert abs(scaled - 1) <= 2 * abs(a * (a - b + 1)) / z


def test_kummer_psi_domain():
    with pytest.raises(DomainError):
        kummer_psi(1, 1.5, 0)
    with pytest.raises(DomainError):
        kummer_psi(1, 1.5, 1, arg=3 * mp.pi)


def test_zeta_prime_minus_one_value():
    assert abs(zeta_prime_minus_one() - mp.mpf("-0.1654211437004509292139196602")) < mp.mpf(10) ** -27


def test_zeta_prime_minus_one_two_routes():
    assert abs(zeta_prime_minus_one("euler_maclaurin") - zeta_prime_minus_one("mpmath")) < mp.mpf(10) ** -50
