"""Closed-form asymptotic right-hand sides for the tronquee family.

Every evaluator returns the finite sum of the known expansion without its
error term.  Conventions:

* omega = exp(-2 pi i beta) with beta = i ln(omega) / (2 pi) purely
  imaginary, so i beta = -ln(omega) / (2 pi) is real;
* arg Gamma is the imaginary part of the principal log Gamma (continuous in
  the right half plane);
* intermediate expressions are complex; results are returned as real numbers
  once the imaginary part has been checked to cancel.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import mpmath as mp

from .errors import ConditioningWarning, DomainError, NumericalError, ValidationError
from .painleve.params import Params
from .specfun import ln_barnes_g, ln_gamma, zeta_prime_minus_one

__all__ = [
    "KINDS",
    "AsySeries",
    "theta",
    "vartheta",
    "rhs_I1",
    "rhs_I2",
    "asy_fields",
    "c0",
    "cosine_distance",
]

KINDS = (
    "u_plus",
    "w_plus",
    "H_plus",
    "phi011_plus",
    "u_minus0",
    "w_minus0",
    "H_minus0",
    "phi011_minus0",
    "u_minusB",
    "w_minusB",
    "H_minusB",
    "phi011_minusB",
    "I1_thm_omega0",
    "I1_thm_omegaB",
    "I2_thm_omega0",
    "I2_thm_omegaB",
)

# |cos| below this counts as sitting on a zero of the cosine.
COSINE_ROOT_TOL = 1e-12


def _imag_tol(value):
    # 10^-20 at high precision, relaxed to ~1000 ulp at low precision.
    return max(mp.mpf(10) ** -20, 1024 * mp.eps) * (1 + abs(value))


def _real(z, what: str):
    """Real part of ``z`` after checking that the imaginary part cancels."""
    z = mp.mpmathify(z)
    if isinstance(z, mp.mpc):
        if abs(z.imag) > _imag_tol(z.real):
            raise NumericalError(f"{what}: imaginary part {mp.nstr(z.imag, 5)} does not cancel")
        return +z.real
    return +z


def _require_beta(p: Params, what: str):
    if p.beta is None:
        raise DomainError(f"{what} requires omega > 0")
    return p.beta


def _arg_gamma(z):
    return mp.im(ln_gamma(z))


def c0():
    """ln 2 / 24 + zeta'(-1), the constant of the Airy-kernel large gap expansion."""
    return mp.log(2) / 24 + zeta_prime_minus_one()


def theta(s, p: Params):
    """(4/3)|s|^(3/2) - alpha pi - 6 i beta ln 2 - 3 i beta ln|s| for s < 0."""
    s = mp.mpf(s)
    if s >= 0:
        raise DomainError("theta is defined for s < 0")
    beta = _require_beta(p, "theta")
    a = abs(s)
    value = mp.mpf(4) / 3 * a**1.5 - p.alpha * mp.pi - 6j * beta * mp.log(2) - 3j * beta * mp.log(a)
    return _real(value, "theta")


def vartheta(s, p: Params):
    """(2 sqrt2/3) s^(3/2) - 3 i beta ln s - alpha pi - 5 i beta ln 2 for s > 0."""
    s = mp.mpf(s)
    if s <= 0:
        raise DomainError("vartheta is defined for s > 0")
    beta = _require_beta(p, "vartheta")
    value = 2 * mp.sqrt(2) / 3 * s**1.5 - 3j * beta * mp.log(s) - p.alpha * mp.pi - 5j * beta * mp.log(2)
    return _real(value, "vartheta")


def cosine_distance(phase):
    """Distance from ``phase`` to the nearest zero pi/2 + k pi of cos."""
    shifted = phase - mp.pi / 2
    return abs(shifted - mp.pi * mp.nint(shifted / mp.pi))


def _log_abs_cos(phase, what: str):
    value = mp.cos(phase)
    if abs(value) < COSINE_ROOT_TOL:
        warnings.warn(
            ConditioningWarning(
                f"{what}: cosine argument within {mp.nstr(cosine_distance(phase), 3)} of a zero"
            ),
            stacklevel=3,
        )
        if value == 0:
            return mp.ninf
    return mp.log(abs(value))


def _rhs_I1_complex(s, p: Params):
    s = mp.mpf(s)
    alpha = p.alpha
    if p.beta is None:
        return (
            (2 * alpha + mp.mpf(1) / 2) * mp.log(s)
            + mp.log(2 * mp.pi) / 2
            - ln_gamma(1 + 2 * alpha)
            - (alpha + mp.mpf(1) / 4) * mp.log(2)
        )
    beta = p.beta
    phase = vartheta(s, p) / 2 + _arg_gamma(1 + alpha - beta) - mp.pi / 4
    return (
        (alpha / 2 - mp.mpf(1) / 4) * mp.log(s)
        + _log_abs_cos(phase, "rhs_I1")
        + beta / 2 * mp.pi * 1j
        + (mp.mpf(5) / 3 * alpha + 1) * mp.log(2)
        + mp.re(ln_gamma(1 + alpha - beta))
        - ln_gamma(1 + 2 * alpha)
    )


def rhs_I1(s, p: Params):
    """Large positive s expansion of I_1(s; alpha, omega) without the error term.

    Emits :class:`ConditioningWarning` when the cosine argument of the
    omega > 0 branch sits on a zero.
    """
    if mp.mpf(s) <= 0:
        raise DomainError("rhs_I1 is defined for s > 0")
    return _real(_rhs_I1_complex(s, p), "rhs_I1")


def _rhs_I2_complex(s, p: Params):
    s = mp.mpf(s)
    alpha = p.alpha
    a = abs(s)
    if p.beta is None:
        return (
            -(s**3) / 12
            - (2 * alpha**2 - mp.mpf(1) / 8) * mp.log(a)
            + alpha
            - mp.log(2) / 24
            - zeta_prime_minus_one()
            + ln_barnes_g(1 + 2 * alpha)
            - alpha * mp.log(2 * mp.pi)
        )
    beta = p.beta
    return (
        mp.mpf(4) / 3 * 1j * beta * a**1.5
        + (3 * beta**2 - alpha**2) / 2 * mp.log(a)
        + 3 * (beta**2 - alpha**2) * mp.log(2)
        - alpha * beta * mp.pi * 1j
        - (ln_barnes_g(1 + alpha + beta) + ln_barnes_g(1 + alpha - beta) - ln_barnes_g(1 + 2 * alpha))
    )


def rhs_I2(s, p: Params):
    """Large negative s expansion of I_2(s; alpha, omega) without the error term."""
    if mp.mpf(s) >= 0:
        raise DomainError("rhs_I2 is defined for s < 0")
    return _real(_rhs_I2_complex(s, p), "rhs_I2")


def _plus_fields(s, p: Params):
    alpha = p.alpha
    quarter = mp.mpf(1) / 4
    coeff = mp.expjpi(2 * alpha) - p.omega
    amp = mp.gamma(2 * alpha + 1) / (2 ** (2 + 6 * alpha) * mp.pi)
    u = alpha / mp.sqrt(s) * (1 - alpha / s**1.5) + mp.re(coeff) * amp * s ** (-(3 * alpha + mp.mpf(1) / 2)) * mp.exp(
        -mp.mpf(4) / 3 * s**1.5
    )
    w = -mp.sqrt(s) - (alpha + quarter) / s
    h = -2 * alpha * mp.sqrt(s) - alpha**2 / s
    phi = -mp.mpf(2) / 3 * s**1.5 - (alpha + quarter) * mp.log(s) - (2 * alpha + mp.mpf(1) / 2) * mp.log(2)
    return u, w, h, phi


def _minus0_fields(s, p: Params):
    alpha = p.alpha
    k = 2 * alpha**2 - mp.mpf(1) / 8
    u = -s / 2 + k / s**2
    w = (2 * alpha + mp.mpf(1) / 2) / s
    h = s**2 / 4 + k / s
    phi = (
        (2 * alpha + mp.mpf(1) / 2) * mp.log(abs(s))
        - 2 * alpha * mp.log(2)
        - ln_gamma(1 + 2 * alpha)
        + mp.log(mp.pi) / 2
    )
    return u, w, h, phi


def _minusB_fields(s, p: Params):
    alpha, beta = p.alpha, p.beta
    a = abs(s)
    th = theta(s, p)
    arg1 = _arg_gamma(1 + alpha - beta)
    main = th / 2 + arg1 - mp.pi / 4
    amp = abs(alpha - beta)
    if amp == 0:
        # Gamma(alpha - beta) has a pole; the oscillatory amplitude vanishes.
        u = mp.mpf(0)
        osc = mp.mpf(0)
    else:
        arg0 = _arg_gamma(alpha - beta)
        u = 2 * amp / mp.sqrt(a) * mp.cos(main) * mp.cos(th / 2 + arg0 + mp.pi / 4)
        osc = -amp / (2 * s) * mp.sin(th + 2 * arg0 + mp.arg(alpha - beta))
    cos_main = mp.cos(main)
    if abs(cos_main) < COSINE_ROOT_TOL:
        warnings.warn(ConditioningWarning("w_minusB: tangent evaluated at a pole"), stacklevel=3)
    w = mp.sqrt(a) * mp.tan(main)
    h = _real(2j * beta * mp.sqrt(a), "H_minusB") + osc + _real((alpha**2 - 3 * beta**2) / (2 * s), "H_minusB")
    phi = (
        (alpha / 2 - mp.mpf(1) / 4) * mp.log(a)
        + _log_abs_cos(main, "phi011_minusB")
        + mp.re(ln_gamma(1 + alpha - beta))
        - ln_gamma(1 + 2 * alpha)
        + _real(-beta / 2 * mp.pi * 1j, "phi011_minusB")
        + (alpha + mp.mpf(1) / 2) * mp.log(2)
    )
    return u, w, h, phi


def asy_fields(s, p: Params, side: str):
    """(u, w, H, ln|Phi0_11|) from the leading expansions at +inf or -inf.

    ``side="plus"`` needs s > 0; ``side="minus"`` needs s < 0 and selects the
    omega = 0 or omega > 0 expansion from ``p``.  The exponentially small term
    of u at +inf carries the coefficient (exp(2 pi i alpha) - omega), of which
    the real part is used.
    """
    s = mp.mpf(s)
    if side == "plus":
        if s <= 0:
            raise DomainError("side 'plus' requires s > 0")
        return _plus_fields(s, p)
    if side == "minus":
        if s >= 0:
            raise DomainError("side 'minus' requires s < 0")
        if p.beta is None:
            return _minus0_fields(s, p)
        return _minusB_fields(s, p)
    raise ValidationError(f"side must be 'plus' or 'minus', got {side!r}")


_FIELD_INDEX = {"u": 0, "w": 1, "H": 2, "phi011": 3}


@dataclass(frozen=True)
class AsySeries:
    """Evaluator handle for one asymptotic right-hand side.

    Example
    -------
    >>> AsySeries("w_plus", Params(0, 0))(25)   # doctest: +SKIP
    mpf('-5.01')
    """

    kind: str
    params: Params

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown series kind {self.kind!r}")

    @property
    def side(self) -> str:
        if self.kind.endswith("_plus") or self.kind.startswith("I1_"):
            return "plus"
        return "minus"

    @property
    def needs_beta(self) -> bool:
        return self.kind.endswith("B")

    def __call__(self, s):
        p = self.params
        if self.needs_beta and p.beta is None:
            raise DomainError(f"{self.kind} requires omega > 0")
        if self.kind.endswith("0") and p.beta is not None:
            raise DomainError(f"{self.kind} requires omega = 0")
        if self.kind.startswith("I1_"):
            return rhs_I1(s, p)
        if self.kind.startswith("I2_"):
            return rhs_I2(s, p)
        name, _, _ = self.kind.partition("_")
        return asy_fields(s, p, self.side)[_FIELD_INDEX[name]]
