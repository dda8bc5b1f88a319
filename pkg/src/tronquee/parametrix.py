"""Model Riemann-Hilbert solutions: Airy, Bessel and confluent hypergeometric.

Each parametrix is evaluated sector by sector.  Rays are oriented; the "+"
side of a ray lies to its left.  A point exactly on a ray is evaluated
with the formula of the sector named in its :class:`SectorPoint`, which
gives the one-sided boundary value by analytic continuation.

Sector tables (arguments in radians):

* Airy: I (0, 2pi/3), II (2pi/3, pi), III (-pi, -2pi/3), IV (-2pi/3, 0);
  rays at 0 (outward), 2pi/3, pi and -2pi/3 (inward).
* Bessel: I (-2pi/3, 2pi/3), II (2pi/3, pi), III (-pi, -2pi/3); rays at
  2pi/3, pi, -2pi/3, all inward.
* CHF: sector k spans ((k-1) pi/4, k pi/4) measured in (-pi/2, 3pi/2],
  with VII and VIII at (-pi/2, -pi/4) and (-pi/4, 0).  Rays 1, 2, 3, 7, 8
  point outward and rays 4, 5, 6 inward.

The CHF solution is given in closed form on sector I.  That closed form
continues analytically to -pi/2 < arg z < 3pi/2; the other sectors are
obtained by multiplying with the jump matrices, counterclockwise through
II-VI and clockwise through VIII, VII.  The jump across ray 7 then closes
the cycle and is a genuine consistency check.  The closed form needs
1 + 2 alpha non-integer (Kummer psi continuation), so 2 alpha must not be
an integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Fr

import mpmath as mp

from .errors import DomainError, ValidationError
from .specfun import airy, bessel_ik, kummer_psi

__all__ = [
    "Mat2C",
    "SectorPoint",
    "airy_param",
    "bessel_param",
    "chf_param",
    "sector_of",
    "airy_jump",
    "bessel_jump",
    "chf_jump",
    "jump_residuals",
    "det_spread",
    "airy_asymptotic_residual",
    "bessel_first_correction",
    "chf_asymptotic_residual",
    "bessel_origin_exponents",
    "bessel_origin_deviation",
    "chf_cyclic_product",
    "DEFAULT_PREC",
]

DEFAULT_PREC = 128


@dataclass(frozen=True)
class Mat2C:
    """2x2 complex matrix ((a, b), (c, d))."""

    a: object
    b: object
    c: object
    d: object

    @classmethod
    def identity(cls) -> "Mat2C":
        return cls(mp.mpc(1), mp.mpc(0), mp.mpc(0), mp.mpc(1))

    @classmethod
    def diag(cls, x, y) -> "Mat2C":
        return cls(mp.mpc(x), mp.mpc(0), mp.mpc(0), mp.mpc(y))

    def __matmul__(self, o: "Mat2C") -> "Mat2C":
        return Mat2C(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __sub__(self, o: "Mat2C") -> "Mat2C":
        return Mat2C(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __add__(self, o: "Mat2C") -> "Mat2C":
        return Mat2C(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def scale(self, k) -> "Mat2C":
        return Mat2C(k * self.a, k * self.b, k * self.c, k * self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def inv(self) -> "Mat2C":
        dt = self.det()
        if dt == 0:
            raise ValidationError("singular matrix")
        return Mat2C(self.d / dt, -self.b / dt, -self.c / dt, self.a / dt)

    def norm(self):
        """Max-abs entry norm."""
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def entries(self):
        return ((self.a, self.b), (self.c, self.d))


_SIGMA1 = Mat2C(mp.mpc(0), mp.mpc(1), mp.mpc(1), mp.mpc(0))


def _sigma3_power(base, exponent) -> Mat2C:
    """base^(exponent sigma3) on the principal branch."""
    p = mp.power(base, exponent)
    return Mat2C.diag(p, 1 / p)


def _lower(x) -> Mat2C:
    return Mat2C(mp.mpc(1), mp.mpc(0), mp.mpc(x), mp.mpc(1))


def _upper(x) -> Mat2C:
    return Mat2C(mp.mpc(1), mp.mpc(x), mp.mpc(0), mp.mpc(1))


def _ipow_i(x):
    """exp(pi i x)."""
    return mp.expjpi(x)


# -- sectors --------------------------------------------------------------------------

# Angular ranges as exact fractions of pi.
_SECTORS = {
    "airy": {"I": (Fr(0), Fr(2, 3)), "II": (Fr(2, 3), Fr(1)), "III": (Fr(-1), Fr(-2, 3)), "IV": (Fr(-2, 3), Fr(0))},
    "bessel": {"I": (Fr(-2, 3), Fr(2, 3)), "II": (Fr(2, 3), Fr(1)), "III": (Fr(-1), Fr(-2, 3))},
    "chf": {
        "I": (Fr(0), Fr(1, 4)),
        "II": (Fr(1, 4), Fr(1, 2)),
        "III": (Fr(1, 2), Fr(3, 4)),
        "IV": (Fr(3, 4), Fr(1)),
        "V": (Fr(1), Fr(5, 4)),
        "VI": (Fr(5, 4), Fr(3, 2)),
        "VII": (Fr(-1, 2), Fr(-1, 4)),
        "VIII": (Fr(-1, 4), Fr(0)),
    },
}

# Ray angle -> sector on its "+" side.
_PLUS_SIDE = {
    "airy": {Fr(0): "I", Fr(2, 3): "I", Fr(1): "II", Fr(-1): "II", Fr(-2, 3): "III"},
    "bessel": {Fr(2, 3): "I", Fr(1): "II", Fr(-1): "II", Fr(-2, 3): "III"},
    "chf": {
        Fr(0): "I",
        Fr(1, 4): "II",
        Fr(1, 2): "III",
        Fr(3, 4): "III",
        Fr(1): "IV",
        Fr(5, 4): "V",
        Fr(3, 2): "VII",
        Fr(-1, 2): "VII",
        Fr(-1, 4): "VIII",
    },
}


def _mp(fr: Fr):
    return mp.mpf(fr.numerator) / fr.denominator


def sector_of(z, family: str) -> str:
    """Sector containing z; points on a ray go to the ray's "+" (left) side."""
    if family not in _SECTORS:
        raise ValidationError(f"unknown parametrix family {family!r}")
    z = mp.mpc(z)
    if z == 0:
        raise DomainError("the origin belongs to no sector")
    t = _reduced_arg(z, family)
    on_ray = mp.mpf(2) ** (-mp.mp.prec + 8)
    for angle, name in _PLUS_SIDE[family].items():
        if abs(t - _mp(angle)) <= on_ray:
            return name
    for name, (lo, hi) in _SECTORS[family].items():
        if _mp(lo) < t < _mp(hi):
            return name
    raise DomainError(f"no {family} sector for arg z / pi = {mp.nstr(t, 8)}")


def _reduced_arg(z, family: str, sector: str | None = None):
    """arg z / pi on the sheet used by ``family``, moved onto ``sector`` if given.

    CHF arguments live in (-1/2, 3/2]; a point on a boundary ray is shifted
    by 2 when the named sector sits on the other side of the cut.
    """
    t = mp.arg(z) / mp.pi
    if family == "chf" and t <= -0.5:
        t += 2
    if sector is not None:
        lo, hi = (_mp(v) for v in _SECTORS[family][sector])
        slack = mp.mpf(2) ** (-mp.mp.prec + 8)
        if not lo - slack <= t <= hi + slack:
            for shift in (-2, 2):
                if lo - slack <= t + shift <= hi + slack:
                    return t + shift
    return t


@dataclass(frozen=True)
class SectorPoint:
    """A point z together with the sector whose formula should be used.

    ``family`` is ``"airy"``, ``"bessel"`` or ``"chf"``.  The argument of z
    must lie in the closed angular range of ``sector``.
    """

    z: object
    sector: str
    family: str

    def __post_init__(self):
        if self.family not in _SECTORS:
            raise ValidationError(f"unknown parametrix family {self.family!r}")
        table = _SECTORS[self.family]
        if self.sector not in table:
            raise ValidationError(f"unknown {self.family} sector {self.sector!r}")
        z = mp.mpc(self.z)
        if z == 0:
            raise DomainError("z = 0 is the branch point")
        lo, hi = (_mp(v) for v in table[self.sector])
        t = _reduced_arg(z, self.family, self.sector)
        slack = mp.mpf(2) ** (-mp.mp.prec + 8)
        if not (lo - slack <= t <= hi + slack):
            raise ValidationError(
                f"arg z / pi = {mp.nstr(t, 8)} is outside {self.family} sector {self.sector} [{lo}, {hi}]"
            )

    @classmethod
    def at(cls, z, family: str) -> "SectorPoint":
        return cls(mp.mpc(z), sector_of(z, family), family)

    @property
    def arg(self):
        """arg z in the sector's range."""
        return _reduced_arg(mp.mpc(self.z), self.family, self.sector) * mp.pi


# -- Airy ---------------------------------------------------------------------------


def _airy_m():
    return Mat2C.diag(1, -1j).scale(mp.sqrt(2 * mp.pi) * mp.expjpi(mp.mpf(1) / 6))


def airy_param(pt: SectorPoint, prec: int = DEFAULT_PREC) -> Mat2C:
    """Airy model solution in the sector of ``pt``.

    Jumps: (1 1; 0 1) on ray 1, (1 0; 1 1) on rays 2 and 4, (0 1; -1 0) on
    ray 3.  Behaviour z^(-sigma3/4) (I + i sigma1)/sqrt 2 e^(-(2/3) z^(3/2) sigma3).
    """
    if pt.family != "airy":
        raise ValidationError("airy_param needs an airy SectorPoint")
    with mp.workprec(prec):
        z = mp.mpc(pt.z)
        w = mp.expjpi(-mp.mpf(2) / 3)
        rot = _sigma3_power(mp.expjpi(-mp.mpf(1) / 6), 1)
        ai, aip = airy(z)
        if pt.sector in ("I", "II"):
            a2, a2p = airy(w * z)
            base = Mat2C(ai, a2, aip, w * a2p)
        else:
            w_plus = mp.expjpi(mp.mpf(2) / 3)
            a2, a2p = airy(w_plus * z)
            base = Mat2C(ai, -w * a2, aip, -a2p)
        out = _airy_m() @ base @ rot
        if pt.sector == "II":
            out = out @ _lower(-1)
        elif pt.sector == "III":
            out = out @ _lower(1)
        return out


def airy_jump(ray: int) -> Mat2C:
    """Jump matrix on Airy ray ``ray`` (1-4)."""
    if ray == 1:
        return _upper(1)
    if ray in (2, 4):
        return _lower(1)
    if ray == 3:
        return Mat2C(mp.mpc(0), mp.mpc(1), mp.mpc(-1), mp.mpc(0))
    raise ValidationError("airy rays are 1-4")


# -- Bessel -------------------------------------------------------------------------


def bessel_param(pt: SectorPoint, two_alpha, prec: int = DEFAULT_PREC) -> Mat2C:
    """Bessel model solution of order ``two_alpha`` in the sector of ``pt``.

    Built from I_nu(z^(1/2)) and K_nu(z^(1/2)) with the principal square root.
    """
    if pt.family != "bessel":
        raise ValidationError("bessel_param needs a bessel SectorPoint")
    with mp.workprec(prec):
        nu = mp.mpf(two_alpha)
        if nu <= -1:
            raise DomainError("bessel_param requires order > -1")
        z = mp.mpc(pt.z)
        arg = pt.arg
        root = mp.sqrt(abs(z)) * mp.expj(arg / 2)
        i_val, k_val, i_der, k_der = bessel_ik(nu, root)
        base = Mat2C(i_val, 1j / mp.pi * k_val, mp.pi * 1j * root * i_der, -root * k_der)
        if pt.sector == "II":
            base = base @ _lower(-mp.expjpi(nu))
        elif pt.sector == "III":
            base = base @ _lower(mp.expjpi(-nu))
        return base


def bessel_jump(ray: int, two_alpha) -> Mat2C:
    """Jump matrix on Bessel ray ``ray`` (1 at 2pi/3, 2 at pi, 3 at -2pi/3)."""
    nu = mp.mpf(two_alpha)
    if ray == 1:
        return _lower(mp.expjpi(nu))
    if ray == 2:
        return Mat2C(mp.mpc(0), mp.mpc(1), mp.mpc(-1), mp.mpc(0))
    if ray == 3:
        return _lower(mp.expjpi(-nu))
    raise ValidationError("bessel rays are 1-3")


# -- confluent hypergeometric ----------------------------------------------------------


def chf_jump(ray: int, alpha, beta) -> Mat2C:
    """Jump matrix on CHF ray ``ray`` (1-8)."""
    alpha, beta = mp.mpf(alpha), mp.mpc(beta)
    if ray == 1:
        return Mat2C(mp.mpc(0), _ipow_i(-beta), -_ipow_i(beta), mp.mpc(0))
    if ray == 2:
        return _lower(_ipow_i(beta - 2 * alpha))
    if ray in (3, 7):
        return _sigma3_power(mp.e, mp.pi * 1j * alpha)
    if ray == 4:
        return _lower(_ipow_i(-(beta - 2 * alpha)))
    if ray == 5:
        return Mat2C(mp.mpc(0), _ipow_i(beta), -_ipow_i(-beta), mp.mpc(0))
    if ray == 6:
        return _lower(_ipow_i(-(beta + 2 * alpha)))
    if ray == 8:
        return _lower(_ipow_i(beta + 2 * alpha))
    raise ValidationError("chf rays are 1-8")


def _chf_closed_form(z, arg, alpha, beta) -> Mat2C:
    """Sector-I closed form continued to arg z in (-pi/2, 3pi/2)."""
    r = 2 * abs(z)
    arg_up = arg + mp.pi / 2
    arg_down = arg - mp.pi / 2
    zeta_up = r * mp.expj(arg_up)
    zeta_down = r * mp.expj(arg_down)
    log_up = mp.log(r) + 1j * arg_up
    pow_plus = mp.exp(alpha * log_up)
    pow_minus = mp.exp(-alpha * log_up)
    e_minus = mp.expj(-z)
    e_plus = mp.expj(z)
    f11 = pow_plus * kummer_psi(alpha + beta, 1 + 2 * alpha, zeta_up, arg_up) * _ipow_i(alpha + 2 * beta) * e_minus
    f21 = (
        -mp.gamma(1 + alpha + beta)
        * mp.rgamma(alpha - beta)
        * pow_minus
        * kummer_psi(1 - alpha + beta, 1 - 2 * alpha, zeta_up, arg_up)
        * _ipow_i(-3 * alpha + beta)
        * e_minus
    )
    f12 = (
        -mp.gamma(1 + alpha - beta)
        * mp.rgamma(alpha + beta)
        * pow_plus
        * kummer_psi(1 + alpha - beta, 1 + 2 * alpha, zeta_down, arg_down)
        * _ipow_i(alpha + beta)
        * e_plus
    )
    f22 = pow_minus * kummer_psi(-alpha - beta, 1 - 2 * alpha, zeta_down, arg_down) * _ipow_i(-alpha) * e_plus
    c0 = (
        _sigma3_power(2, beta)
        @ _sigma3_power(mp.e, beta * mp.pi * 1j / 2)
        @ Mat2C.diag(_ipow_i(-(alpha + 2 * beta)), _ipow_i(2 * alpha + beta))
    )
    return c0 @ Mat2C(f11, f12, f21, f22)


def _chf_right_factor(sector: str, alpha, beta) -> Mat2C:
    """Matrix R with Phi = F R in ``sector``, F the continued closed form."""
    j = {k: chf_jump(k, alpha, beta) for k in range(1, 9)}
    ccw = {
        "I": Mat2C.identity(),
    }
    ccw["II"] = j[2]
    ccw["III"] = ccw["II"] @ j[3]
    ccw["IV"] = ccw["III"] @ j[4].inv()
    ccw["V"] = ccw["IV"] @ j[5].inv()
    ccw["VI"] = ccw["V"] @ j[6].inv()
    ccw["VIII"] = j[1].inv()
    ccw["VII"] = ccw["VIII"] @ j[8].inv()
    return ccw[sector]


def chf_param(pt: SectorPoint, alpha, beta, prec: int = DEFAULT_PREC) -> Mat2C:
    """Confluent hypergeometric model solution in the sector of ``pt``.

    ``beta`` may be complex; 2 alpha must not be an integer and
    alpha > -1/2.
    """
    if pt.family != "chf":
        raise ValidationError("chf_param needs a chf SectorPoint")
    z = mp.mpc(pt.z)
    # Columns of the closed form scale like exp(-+ i z); the right factor
    # mixes them, cancelling up to exp(2 |Im z|).
    guard = int(2 * float(abs(mp.im(z))) / math.log(2.0)) + 32
    with mp.workprec(prec + guard):
        alpha, beta = mp.mpf(alpha), mp.mpc(beta)
        if alpha <= -0.5:
            raise DomainError("chf_param requires alpha > -1/2")
        if mp.isint(2 * alpha):
            raise DomainError("chf_param requires 2 alpha not an integer")
        f = _chf_closed_form(z, pt.arg, alpha, beta)
        phi = f @ _chf_right_factor(pt.sector, alpha, beta)
    with mp.workprec(prec):
        return Mat2C(+phi.a, +phi.b, +phi.c, +phi.d)


# -- checks -------------------------------------------------------------------------

# (ray angle / pi, "+" sector, "-" sector, jump index) per family.
_RAYS = {
    "airy": [(Fr(0), "I", "IV", 1), (Fr(2, 3), "I", "II", 2), (Fr(1), "II", "III", 3), (Fr(-2, 3), "III", "IV", 4)],
    "bessel": [(Fr(2, 3), "I", "II", 1), (Fr(1), "II", "III", 2), (Fr(-2, 3), "III", "I", 3)],
    "chf": [
        (Fr(0), "I", "VIII", 1),
        (Fr(1, 4), "II", "I", 2),
        (Fr(1, 2), "III", "II", 3),
        (Fr(3, 4), "III", "IV", 4),
        (Fr(1), "IV", "V", 5),
        (Fr(5, 4), "V", "VI", 6),
        (Fr(3, 2), "VII", "VI", 7),
        (Fr(7, 4), "VIII", "VII", 8),
    ],
}

DEFAULT_RADII = (0.3, 0.8, 1.5, 3.0, 5.0)


def _evaluator(family: str, params: dict, prec: int):
    if family == "airy":
        return lambda pt: airy_param(pt, prec)
    if family == "bessel":
        return lambda pt: bessel_param(pt, params["two_alpha"], prec)
    if family == "chf":
        return lambda pt: chf_param(pt, params["alpha"], params["beta"], prec)
    raise ValidationError(f"unknown parametrix family {family!r}")


def _jump(family: str, ray: int, params: dict) -> Mat2C:
    if family == "airy":
        return airy_jump(ray)
    if family == "bessel":
        return bessel_jump(ray, params["two_alpha"])
    return chf_jump(ray, params["alpha"], params["beta"])


def jump_residuals(family: str, params: dict | None = None, radii=DEFAULT_RADII, prec: int = DEFAULT_PREC) -> dict:
    """Max relative residual |Phi+ - Phi- J| / (|Phi-| |J|) on each ray.

    Both boundary values are evaluated on the ray itself with the formulas
    of the two adjacent sectors.  Returns {ray index: residual}.
    """
    params = params or {}
    evaluate = _evaluator(family, params, prec)
    out = {}
    with mp.workprec(prec):
        for angle, plus, minus, ray in _RAYS[family]:
            jump = _jump(family, ray, params)
            worst = mp.mpf(0)
            for r in radii:
                z = mp.mpf(r) * mp.expjpi(_mp(angle))
                phi_plus = evaluate(SectorPoint(z, plus, family))
                phi_minus = evaluate(SectorPoint(z, minus, family))
                diff = phi_plus - phi_minus @ jump
                worst = max(worst, diff.norm() / (phi_minus.norm() * jump.norm()))
            out[ray] = worst
    return out


def det_spread(family: str, params: dict | None = None, points=None, prec: int = DEFAULT_PREC):
    """(relative spread, values) of det Phi over sample points in every sector."""
    params = params or {}
    evaluate = _evaluator(family, params, prec)
    with mp.workprec(prec):
        if points is None:
            points = []
            for name, (lo, hi) in _SECTORS[family].items():
                mid = _mp((lo + hi) / 2)
                for r in (0.7, 2.2):
                    points.append(SectorPoint(mp.mpf(r) * mp.expjpi(mid), name, family))
        dets = [evaluate(pt).det() for pt in points]
        ref = dets[0]
        spread = max(abs(d - ref) for d in dets) / abs(ref)
        return spread, dets


def airy_asymptotic_residual(z, prec: int = DEFAULT_PREC):
    """|((I + i sigma1)/sqrt 2)^-1 z^(sigma3/4) Phi e^((2/3) z^(3/2) sigma3) - I|."""
    with mp.workprec(prec):
        pt = SectorPoint.at(z, "airy")
        z = mp.mpc(z)
        phi = airy_param(pt, prec)
        lead = (Mat2C.identity() + _SIGMA1.scale(1j)).scale(1 / mp.sqrt(2))
        ex = _sigma3_power(mp.e, mp.mpf(2) / 3 * z**1.5)
        r = lead.inv() @ _sigma3_power(z, mp.mpf(1) / 4) @ phi @ ex - Mat2C.identity()
        return r.norm()


def bessel_first_correction(z, two_alpha, prec: int = DEFAULT_PREC) -> Mat2C:
    """8 sqrt z [((I + i sigma1)/sqrt 2)^-1 (pi^2 z)^(sigma3/4) Phi e^(-sqrt z sigma3) - I].

    Tends to ((-1 - 4 nu^2, -2i), (-2i, 1 + 4 nu^2)) as z -> infinity,
    nu = ``two_alpha``.
    """
    with mp.workprec(prec):
        pt = SectorPoint.at(z, "bessel")
        z = mp.mpc(z)
        phi = bessel_param(pt, two_alpha, prec)
        lead = (Mat2C.identity() + _SIGMA1.scale(1j)).scale(1 / mp.sqrt(2))
        root = mp.sqrt(z)
        r = lead.inv() @ _sigma3_power(mp.pi**2 * z, mp.mpf(1) / 4) @ phi @ _sigma3_power(mp.e, -root)
        return (r - Mat2C.identity()).scale(8 * root)


def chf_asymptotic_residual(z, alpha, beta, prec: int = DEFAULT_PREC):
    """|Phi e^(i z sigma3) z^(beta sigma3) R_sector^-1 - I| for the sector of z.

    R_sector is the constant right factor of the behaviour at infinity in
    the quadrant containing z.
    """
    with mp.workprec(prec):
        alpha, beta = mp.mpf(alpha), mp.mpc(beta)
        pt = SectorPoint.at(z, "chf")
        z = mp.mpc(z)
        phi = chf_param(pt, alpha, beta, prec)
        t = pt.arg / mp.pi
        if 0 <= t <= 0.5:
            right = Mat2C.identity()
        elif 0.5 < t <= 1:
            right = _sigma3_power(mp.e, mp.pi * 1j * alpha)
        elif 1 < t <= 1.5:
            right = Mat2C(mp.mpc(0), -_ipow_i(alpha + beta), _ipow_i(-(alpha + beta)), mp.mpc(0))
        else:
            right = Mat2C(mp.mpc(0), -_ipow_i(-beta), _ipow_i(beta), mp.mpc(0))
        log_z = mp.log(abs(z)) + 1j * pt.arg
        zb = Mat2C.diag(mp.exp(beta * log_z), mp.exp(-beta * log_z))
        r = phi @ right.inv() @ _sigma3_power(mp.e, 1j * z) @ zb - Mat2C.identity()
        return r.norm()


def bessel_origin_exponents(two_alpha, sector: str = "I", radii=None, prec: int = DEFAULT_PREC) -> Mat2C:
    """Log-log slopes of |Phi_ij| against |z| between the two smallest radii."""
    radii = radii or (mp.mpf(10) ** -12, mp.mpf(10) ** -16)
    with mp.workprec(prec):
        lo, hi = _SECTORS["bessel"][sector]
        direction = mp.expjpi(_mp((lo + hi) / 2))
        m1 = bessel_param(SectorPoint(radii[0] * direction, sector, "bessel"), two_alpha, prec)
        m2 = bessel_param(SectorPoint(radii[1] * direction, sector, "bessel"), two_alpha, prec)
        dl = mp.log(radii[1]) - mp.log(radii[0])
        slope = [(mp.log(abs(b)) - mp.log(abs(a))) / dl for a, b in zip((m1.a, m1.b, m1.c, m1.d), (m2.a, m2.b, m2.c, m2.d))]
        return Mat2C(*slope)


def bessel_origin_deviation(two_alpha, prec: int = DEFAULT_PREC):
    """Worst deviation of the sector-I behaviour at 0 from its predicted form.

    For nu != 0 the slopes of |Phi_ij| are (nu/2, -|nu|/2, nu/2, -|nu|/2).
    For nu = 0 the slopes of Phi_11, Phi_21, Phi_22 are (0, 1, 0) and
    Phi_12 ~ -(i/(2 pi)) ln z; the relative error of the latter enters.
    """
    nu = mp.mpf(two_alpha)
    with mp.workprec(prec):
        slopes = bessel_origin_exponents(nu, prec=prec)
        got = [mp.re(v) for v in (slopes.a, slopes.b, slopes.c, slopes.d)]
        if nu != 0:
            half = nu / 2
            return max(abs(g - e) for g, e in zip(got, (half, -abs(half), half, -abs(half))))
        dev = max(abs(got[0]), abs(got[2] - 1), abs(got[3]))
        lo, hi = _SECTORS["bessel"]["I"]
        z = mp.mpf(10) ** -16 * mp.expjpi(_mp((lo + hi) / 2))
        phi12 = bessel_param(SectorPoint(z, "I", "bessel"), nu, prec).b
        return max(dev, abs(phi12 / (-1j / (2 * mp.pi) * mp.log(z)) - 1))


def chf_cyclic_product(alpha, beta, prec: int = DEFAULT_PREC) -> Mat2C:
    """J2 J3 J4^-1 J5^-1 J6^-1 J7 J8 J1: continuation of Phi once around 0.

    For the closed form this is the inverse monodromy of the pair of
    solutions z^alpha, z^-alpha, hence trace 2 cos(2 pi alpha) and det 1.
    """
    with mp.workprec(prec):
        j = {k: chf_jump(k, alpha, beta) for k in range(1, 9)}
        return j[2] @ j[3] @ j[4].inv() @ j[5].inv() @ j[6].inv() @ j[7] @ j[8] @ j[1]
