"""Extended-precision special functions.

All routines work in the ambient :mod:`mpmath` precision (``mp.prec``) and
accept real or complex mpmath numbers (or anything ``mpmath`` can convert).
Use ``mpmath.workprec(bits)`` to change precision for a computation.
"""

from __future__ import annotations

import math

import mpmath as mp

from .config import airy_crossover, kummer_crossover
from .errors import DomainError
from .quadrature import integrate

__all__ = [
    "ln_gamma",
    "ln_barnes_g",
    "airy",
    "bessel_ik",
    "kummer_phi",
    "kummer_psi",
    "zeta_prime_minus_one",
]


def _is_nonpositive_integer(z) -> bool:
    z = mp.mpmathify(z)
    return mp.im(z) == 0 and mp.re(z) <= 0 and mp.isint(mp.re(z))


def ln_gamma(z):
    """Principal branch of log Gamma (continuous off the negative real axis)."""
    z = mp.mpmathify(z)
    if _is_nonpositive_integer(z):
        raise DomainError(f"Gamma has a pole at {z}")
    return mp.loggamma(z)


def ln_barnes_g(z):
    """Logarithm of the Barnes G-function for Re z > 0.

    With z = 1 + x, uses

        ln G(1+x) = (x/2) ln(2 pi) - x(x+1)/2 + x lnGamma(1+x)
                    - int_0^x lnGamma(1+t) dt,

    where the integral runs along the straight segment from 0 to x and is
    evaluated by adaptive Gauss-Kronrod quadrature at working precision.
    """
    z = mp.mpmathify(z)
    x = z - 1
    if mp.re(x) <= -1:
        raise DomainError("ln_barnes_g requires Re z > 0")
    if x == 0:
        return mp.mpf(0) if mp.im(z) == 0 else mp.mpc(0)
    prec = mp.mp.prec
    with mp.workprec(prec + 20):
        # Substitute t = x * tau so the path is the real unit interval.
        res = integrate(lambda tau: mp.loggamma(1 + x * tau), [0, 1], prec=prec + 20)
        loggamma_integral = x * res.value
        value = x / 2 * mp.log(2 * mp.pi) - x * (x + 1) / 2 + x * mp.loggamma(1 + x) - loggamma_integral
    if mp.im(z) == 0:
        return +mp.re(value)
    return +value


# --- Airy -----------------------------------------------------------------

def _airy_maclaurin(z):
    """Ai, Ai' from the power series a_{n+3} = a_n / ((n+2)(n+3))."""
    prec = mp.mp.prec
    # Terms peak near exp((2/3)|z|^{3/2}) while Ai may be as small as its
    # reciprocal, so guard bits cover twice that exponent.
    extra = int(4.0 / 3.0 * float(abs(z)) ** 1.5 / math.log(2.0)) + 16
    with mp.workprec(prec + extra):
        z = mp.mpmathify(z)
        a0 = 1 / (mp.power(3, mp.mpf(2) / 3) * mp.gamma(mp.mpf(2) / 3))
        a1 = -1 / (mp.cbrt(3) * mp.gamma(mp.mpf(1) / 3))
        if z == 0:
            return +a0, +a1
        eps = mp.mpf(2) ** (-(prec + extra))
        z3 = z**3
        # The two nonzero residue classes n = 0, 1 (mod 3) advance together.
        term0, term1 = a0, a1 * z
        ai = term0 + term1
        aip = a1
        n = 0
        while True:
            term0 = term0 * z3 / ((n + 2) * (n + 3))
            term1 = term1 * z3 / ((n + 3) * (n + 4))
            ai += term0 + term1
            aip += (term0 * (n + 3) + term1 * (n + 4)) / z
            n += 3
            if n > 6 and abs(term0) + abs(term1) <= eps * (abs(ai) + abs(aip)):
                break
    return +ai, +aip


def _airy_asymptotic(z):
    """Ai, Ai' from the large-|z| expansion, valid for |arg z| < 2 pi / 3."""
    prec = mp.mp.prec
    with mp.workprec(prec + 16):
        z = mp.mpmathify(z)
        zeta = mp.mpf(2) / 3 * z ** mp.mpf(1.5)
        eps = mp.mpf(2) ** (-(prec + 8))
        u = mp.mpf(1)
        sum_u = mp.mpf(1)
        sum_v = mp.mpf(1)
        k = 0
        prev = mp.inf
        while True:
            k += 1
            # u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k)
            u = u * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
            v = -u * (6 * k + 1) / (6 * k - 1)
            zk = (-zeta) ** k
            term_u = u / zk
            term_v = v / zk
            if abs(term_u) > prev:
                break
            prev = abs(term_u)
            sum_u += term_u
            sum_v += term_v
            if abs(term_u) < eps:
                break
        pref = mp.exp(-zeta) / (2 * mp.sqrt(mp.pi))
        ai = pref * sum_u / z ** mp.mpf(0.25)
        aip = -pref * sum_v * z ** mp.mpf(0.25)
    return +ai, +aip


def airy(z):
    """Airy function Ai and its derivative at real or complex ``z``.

    The Maclaurin series is used for |z| below :func:`config.airy_crossover`
    (with guard bits for cancellation); beyond it the asymptotic expansion
    is used for |arg z| <= 2 pi / 3 and the connection formula
    Ai(z) = -w Ai(w z) - w^2 Ai(w^2 z), w = exp(2 pi i / 3), elsewhere.
    """
    z = mp.mpmathify(z)
    is_real = mp.im(z) == 0
    if abs(z) < airy_crossover(mp.mp.prec):
        ai, aip = _airy_maclaurin(z)
    elif abs(mp.arg(z)) <= 2 * mp.pi / 3:
        ai, aip = _airy_asymptotic(z)
    else:
        with mp.workprec(mp.mp.prec + 16):
            w = mp.expjpi(mp.mpf(2) / 3)
            a1, d1 = _airy_asymptotic(w * z)
            a2, d2 = _airy_asymptotic(w * w * z)
            ai = -w * a1 - w * w * a2
            aip = -w * w * d1 - w * d2
    if is_real:
        return +mp.re(ai), +mp.re(aip)
    return +ai, +aip


# --- Bessel ---------------------------------------------------------------

def bessel_ik(order, z, need_k: bool = True):
    """Modified Bessel I_nu, K_nu and their z-derivatives.

    Returns ``(I, K, I', K')``; with ``need_k=False`` the K entries are
    ``None`` and ``z = 0`` is allowed.
    """
    nu = mp.mpmathify(order)
    z = mp.mpmathify(z)
    if mp.im(nu) != 0 or nu <= -1:
        raise DomainError("bessel_ik requires real order > -1")
    if mp.re(z) < 0:
        raise DomainError("bessel_ik requires Re z >= 0")
    if z == 0:
        if need_k:
            raise DomainError("K_nu is singular at z = 0")
        i_val = mp.mpf(1) if nu == 0 else mp.mpf(0)
        if nu == 1:
            i_der = mp.mpf(0.5)
        elif nu == 0 or nu > 1:
            i_der = mp.mpf(0)
        else:
            i_der = mp.inf
        return i_val, None, i_der, None
    i_val = mp.besseli(nu, z)
    i_der = mp.besseli(nu + 1, z) + nu / z * i_val
    if not need_k:
        return i_val, None, i_der, None
    k_val = mp.besselk(nu, z)
    k_der = -mp.besselk(nu + 1, z) + nu / z * k_val
    return i_val, k_val, i_der, k_der


# --- Kummer ---------------------------------------------------------------

def kummer_phi(a, b, z):
    """Kummer's confluent hypergeometric function phi(a, b, z) = 1F1(a; b; z).

    Summed as a power series; guard bits scale with |z| to absorb the
    cancellation when Re z < 0, and the series stops once a term falls below
    the working epsilon after the terms have started to decrease.
    """
    a, b, z = (mp.mpmathify(v) for v in (a, b, z))
    if _is_nonpositive_integer(b):
        raise DomainError("kummer_phi requires b not a non-positive integer")
    prec = mp.mp.prec
    extra = int(2 * float(abs(z)) / math.log(2.0)) + 16
    with mp.workprec(prec + extra):
        eps = mp.mpf(2) ** (-(prec + extra))
        total = mp.mpf(1)
        term = mp.mpf(1)
        k = 0
        big = abs(z) + abs(a) + abs(b) + 2
        while True:
            term = term * (a + k) / (b + k) * z / (k + 1)
            k += 1
            total += term
            if term == 0 or (k > big and abs(term) <= eps * abs(total)):
                break
            if k > 100000:
                raise DomainError("kummer_phi series failed to converge")
    return +total


def _power(z, exponent, arg):
    """z**exponent with an explicitly supplied argument of z."""
    return mp.exp(exponent * (mp.log(abs(z)) + 1j * arg))


def _psi_connection(a, b, z, arg):
    prec = mp.mp.prec
    extra = int(2 * float(abs(z)) / math.log(2.0)) + 24
    with mp.workprec(prec + extra):
        first = mp.rgamma(a - b + 1) * mp.gamma(1 - b) * kummer_phi(a, b, z)
        second = mp.gamma(b - 1) * mp.rgamma(a) * _power(z, 1 - b, arg) * kummer_phi(a - b + 1, 2 - b, z)
        return +(first + second)


def _psi_asymptotic(a, b, z, arg):
    """z^-a sum_k (a)_k (a-b+1)_k / k! (-z)^-k, or None if not accurate."""
    prec = mp.mp.prec
    with mp.workprec(prec + 16):
        eps = mp.mpf(2) ** (-(prec + 8))
        total = mp.mpf(1)
        term = mp.mpf(1)
        prev = mp.inf
        k = 0
        while True:
            term = -term * (a + k) * (a - b + 1 + k) / ((k + 1) * z)
            k += 1
            size = abs(term)
            if size <= eps * abs(total) or term == 0:
                total += term
                break
            if size > prev:
                return None
            prev = size
            total += term
        return _power(z, -a, arg) * total


def kummer_psi(a, b, z, arg=None):
    """Tricomi's confluent hypergeometric function psi(a, b, z) = U(a, b, z).

    ``arg`` selects the sheet: by default the principal argument of ``z``;
    values in (-5 pi/2, 5 pi/2) are accepted.  For |z| beyond
    :func:`config.kummer_crossover` the large-|z| expansion is used on
    |arg| <= pi (continued past the Stokes line by the monodromy relation);
    otherwise the connection formula through phi.
    """
    a, b, z = (mp.mpmathify(v) for v in (a, b, z))
    if z == 0:
        raise DomainError("kummer_psi is singular at z = 0")
    if arg is None:
        arg = mp.arg(z)
    else:
        arg = mp.mpf(arg)
    if abs(arg) >= 5 * mp.pi / 2:
        raise DomainError("kummer_psi requires -5pi/2 < arg z < 5pi/2")
    # Keep the numeric z consistent with the requested sheet.
    z = abs(z) * mp.expj(arg)
    b_integer = mp.im(b) == 0 and mp.isint(mp.re(b))
    if abs(z) >= kummer_crossover(mp.mp.prec):
        if abs(arg) <= mp.pi:
            value = _psi_asymptotic(a, b, z, arg)
            if value is not None:
                return value
        else:
            if b_integer:
                raise DomainError("kummer_psi beyond |arg z| = pi needs non-integer b")
            m = 1 if arg > 0 else -1
            inner_arg = arg - 2 * m * mp.pi
            inner = _psi_asymptotic(a, b, z, inner_arg)
            if inner is not None:
                with mp.workprec(mp.mp.prec + 16):
                    twist = mp.expjpi(-2 * b * m)
                    # phi(a,b,z) = e^z phi(b-a,b,-z) avoids cancellation here.
                    phi = mp.exp(z) * kummer_phi(b - a, b, -z)
                    value = (1 - twist) * mp.gamma(1 - b) * mp.rgamma(a - b + 1) * phi + twist * inner
                return +value
    if b_integer:
        if abs(arg) > mp.pi:
            raise DomainError("kummer_psi beyond |arg z| = pi needs non-integer b")
        return mp.hyperu(a, b, z)
    return _psi_connection(a, b, z, arg)


# --- zeta'(-1) --------------------------------------------------------------

def _ln_glaisher_euler_maclaurin():
    """ln A from the Euler-Maclaurin expansion of sum_{k<=n} k ln k."""
    prec = mp.mp.prec
    with mp.workprec(prec + 24):
        n = 40
        eps = mp.mpf(2) ** (-(prec + 16))
        partial = mp.fsum(k * mp.log(k) for k in range(2, n + 1))
        n_mp = mp.mpf(n)
        ln_a = partial - (n_mp**2 / 2 + n_mp / 2 + mp.mpf(1) / 12) * mp.log(n_mp) + n_mp**2 / 4
        j = 2
        prev = mp.inf
        while True:
            term = mp.bernoulli(2 * j) / ((2 * j) * (2 * j - 1) * (2 * j - 2) * n_mp ** (2 * j - 2))
            if abs(term) > prev:
                raise ArithmeticError("Euler-Maclaurin tail diverged before reaching precision")
            ln_a += term
            if abs(term) < eps:
                break
            prev = abs(term)
            j += 1
        return ln_a


def zeta_prime_minus_one(method: str = "euler_maclaurin"):
    """zeta'(-1) at working precision.

    ``method="euler_maclaurin"`` evaluates 1/12 - ln A with Glaisher's
    constant A from an Euler-Maclaurin sum; ``method="mpmath"`` uses the
    Riemann zeta derivative from mpmath.
    """
    if method == "euler_maclaurin":
        with mp.workprec(mp.mp.prec + 8):
            value = mp.mpf(1) / 12 - _ln_glaisher_euler_maclaurin()
        return +value
    if method == "mpmath":
        return mp.zeta(-1, derivative=1)
    raise ValueError(f"unknown method {method!r}")
