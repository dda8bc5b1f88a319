"""Regularized integrals of w, q, H and u w' along tronquee trajectories.

Each integral splits at a cut point c into

* a subtracted integral from c up to the trajectory's seed point s0,
  evaluated by quadrature,
* the analytic integral of the subtracted large-s series beyond s0 plus an
  estimate of the exponentially small mode, and
* a principal-value integral between s and c across the simple poles of w.

Laurent data at a pole s* of w (sigma' = 0, sigma'' = 2 alpha):
w = 1/(s - s*) + O(s - s*) and u = -sigma''(s*) (s - s*) + ..., so
u w' = sigma''(s*)/(s - s*) + O(1).  The residue of u w' is sigma''(s*),
read off the trajectory.  q(x) has residue +1 at x* = -2^(1/3) s*.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import mpmath as mp

from .config import DEFAULT_PRECISION
from .errors import DomainError, ValidationError
from .painleve import Params, solve
from .painleve.expansions import plus_sigma_coeffs, plus_w_coeffs
from .painleve.trajectory import Pole, Trajectory
from .quadrature import integrate

__all__ = [
    "IntegralResult",
    "pv_quad",
    "I1",
    "I1_tilde",
    "I2",
    "I3",
    "identity_integral_H",
    "lemma_residuals",
    "alpha_derivative_residual",
    "tail_integral",
]

# Absolute quadrature tolerance per subinterval.
QUAD_TOL = mp.mpf(10) ** -32
# A pole closer than this (relative) to an integration endpoint is rejected.
ENDPOINT_TOL = 1e-12
# Neighbouring poles subtracted on each side of the pole owning a subinterval.
PV_NEIGHBOURS = 2
# Terms of the +inf expansions used for analytic tails.
TAIL_TERMS = 60


@dataclass(frozen=True)
class IntegralResult:
    """Value of a regularized integral with its error budget.

    ``tail_bound`` bounds the analytic tail beyond the trajectory's seed
    point; ``quad_error`` is the summed quadrature error estimate.
    """

    value: object
    c_used: object
    tail_bound: object
    pv_pole_count: int
    quad_error: object = 0

    def to_dict(self, digits: int = 40) -> dict:
        out = asdict(self)
        for key in ("value", "c_used", "tail_bound", "quad_error"):
            out[key] = mp.nstr(mp.mpf(out[key]), digits)
        return out


def _as_pole(p) -> Pole:
    if isinstance(p, Pole):
        return p
    loc, res = p
    return Pole(mp.mpf(loc), res)


def _pv_integrate(f: Callable, a, b, poles: Sequence, tol=QUAD_TOL, prec: int | None = None):
    """(value, error, poles crossed) of P.V. int_a^b f."""
    prec = prec or mp.mp.prec
    with mp.workprec(prec):
        a, b = mp.mpf(a), mp.mpf(b)
        if a == b:
            return mp.mpf(0), mp.mpf(0), 0
        sign = 1 if a < b else -1
        lo, hi = min(a, b), max(a, b)
        plist = sorted((_as_pole(p) for p in poles), key=lambda pl: pl.location)
        for pl in plist:
            for end in (lo, hi):
                if abs(pl.location - end) <= ENDPOINT_TOL * (1 + abs(end)):
                    raise DomainError(f"pole at {mp.nstr(pl.location, 15)} coincides with endpoint {mp.nstr(end, 15)}")
        inside = [pl for pl in plist if lo < pl.location < hi]
        if not inside:
            res = integrate(f, [lo, hi], tol=tol, prec=prec)
            return sign * res.value, res.error, 0
        cuts = [lo]
        cuts += [(p1.location + p2.location) / 2 for p1, p2 in zip(inside[:-1], inside[1:])]
        cuts.append(hi)
        total, error = mp.mpf(0), mp.mpf(0)
        for j, (left, right) in enumerate(zip(cuts[:-1], cuts[1:])):
            local = inside[max(0, j - PV_NEIGHBOURS) : j + PV_NEIGHBOURS + 1]

            def smooth(t, local=local):
                return f(t) - mp.fsum(pl.residue / (t - pl.location) for pl in local)

            res = integrate(smooth, [left, right], tol=tol, prec=prec)
            total += res.value
            total += mp.fsum(pl.residue * mp.log(abs((right - pl.location) / (left - pl.location))) for pl in local)
            error += res.error
        return sign * total, error, len(inside)


def pv_quad(f: Callable, a, b, poles: Sequence = (), tol=QUAD_TOL, prec: int | None = None):
    """Cauchy principal value of int_a^b f across simple poles.

    Each subinterval around a pole s_j is integrated with the nearby pole
    terms r_j/(t - s_j) removed, and their logarithmic integrals
    r_j ln|(b - s_j)/(a - s_j)| are added back exactly.

    Parameters
    ----------
    f : callable
        Integrand, called with an mpf.
    a, b : real
        Endpoints (either order); must not be poles.
    poles : sequence of Pole or (location, residue)
        Simple poles of ``f``; those outside [a, b] are ignored.

    Raises
    ------
    DomainError
        If a pole lies within ``ENDPOINT_TOL`` of an endpoint.
    """
    return _pv_integrate(f, a, b, poles, tol, prec)[0]


# -- analytic tails -----------------------------------------------------------------


def _exponents(count):
    return [mp.mpf(1) / 2 - mp.mpf(3 * k) / 2 for k in range(count)]


def _tail_coeffs(kind: str, alpha):
    """Coefficients a_k of the integrand's +inf series sum_k a_k s^(1/2 - 3k/2).

    The counterterms of each regularization cancel a_0 and a_1 exactly.
    """
    if kind == "w":
        return [-c for c in plus_w_coeffs(alpha, TAIL_TERMS)]
    h = list(plus_sigma_coeffs(alpha, TAIL_TERMS))
    if kind == "H":
        return h
    if kind == "uwH":
        big_w = plus_w_coeffs(alpha, TAIL_TERMS)
        e = _exponents(TAIL_TERMS)
        d = [h[0]]
        for k in range(1, TAIL_TERMS):
            d.append(h[k] + mp.fsum(h[i] * e[i] * big_w[k - 1 - i] * e[k - 1 - i] for i in range(k)))
        return d
    raise ValidationError(f"unknown integrand kind {kind!r}")


def _truncated(terms):
    """Optimally truncated sum of ``terms`` and the first omitted magnitude."""
    mags = [abs(t) for t in terms]
    best = len(terms)
    for k in range(1, len(terms)):
        if mags[k] != 0 and mags[k - 1] != 0 and mags[k] > mags[k - 1]:
            best = k
            break
    omitted = mags[best] if best < len(terms) else mp.mpf(0)
    return mp.fsum(terms[:best]), omitted


def tail_integral(kind: str, alpha, L):
    """(value, bound) of int_L^inf of the subtracted series for ``kind``.

    ``kind`` is ``"w"`` (w + sqrt s + (alpha + 1/4)/s), ``"H"``
    (H + 2 alpha sqrt s + alpha^2/s) or ``"uwH"``
    (u w' + H + 2 alpha sqrt s + alpha(2 alpha + 1)/(2s)).  Uses
    int_L^inf s^(1/2 - 3k/2) ds = 2 L^((3 - 3k)/2) / (3k - 3) for k >= 2.
    """
    L = mp.mpf(L)
    coeffs = _tail_coeffs(kind, alpha)
    terms = [coeffs[k] * 2 * L ** (mp.mpf(3 - 3 * k) / 2) / (3 * k - 3) for k in range(2, len(coeffs))]
    return _truncated(terms)


def _series_integrand(kind: str, alpha, s):
    coeffs = _tail_coeffs(kind, alpha)
    e = _exponents(len(coeffs))
    return _truncated([coeffs[k] * s ** e[k] for k in range(2, len(coeffs))])


# -- integrands ----------------------------------------------------------------------


def _integrand(traj: Trajectory, kind: str):
    if kind == "w":
        return traj.w_at
    if kind == "H":
        return lambda t: traj.sigma_derivs(t, 1)[0]
    if kind == "uwH":

        def uwh(t):
            sig, d1 = traj.sigma_derivs(t, 2)
            u = -d1
            w = traj.w_at(t)
            return u * (t + 2 * u - w * w) + sig

        return uwh
    raise ValidationError(f"unknown integrand kind {kind!r}")


def _counterterm(kind: str, alpha):
    quarter = mp.mpf(1) / 4
    if kind == "w":
        return lambda t: mp.sqrt(t) + (alpha + quarter) / t
    if kind == "H":
        return lambda t: 2 * alpha * mp.sqrt(t) + alpha**2 / t
    return lambda t: 2 * alpha * mp.sqrt(t) + alpha * (2 * alpha + 1) / (2 * t)


def _boundary(kind: str, alpha, c):
    quarter = mp.mpf(1) / 4
    if kind == "w":
        return mp.mpf(2) / 3 * c**1.5 + (alpha + quarter) * mp.log(c)
    if kind == "H":
        return mp.mpf(4) / 3 * alpha * c**1.5 + alpha**2 * mp.log(c)
    return mp.mpf(4) / 3 * alpha * c**1.5 + alpha * (alpha + mp.mpf(1) / 2) * mp.log(c)


def _poles_for(traj: Trajectory, kind: str):
    if kind == "w":
        return list(traj.poles)
    if kind == "uwH":
        # Residue of u w' at a pole of w is sigma''(s*).
        return [(pl.location, traj.sigma_derivs(pl.location, 3)[2]) for pl in traj.poles]
    return []


def _upper_part(traj: Trajectory, kind: str, c):
    """int_c^inf (integrand + counterterm): quadrature to s0, series beyond.

    Returns (value, tail_bound, quad_error).
    """
    alpha = traj.params.alpha
    s0 = mp.mpf(traj.s_max)
    f = _integrand(traj, kind)
    counter = _counterterm(kind, alpha)
    res = integrate(lambda t: f(t) + counter(t), [c, s0], tol=QUAD_TOL, prec=traj.prec)
    tail, tail_omitted = tail_integral(kind, alpha, s0)
    # Exponentially small remainder: its integrand decays like
    # exp(-(4/3) s^(3/2)), whose integral from s0 is delta(s0)/(2 sqrt(s0)).
    series_at_s0, series_omitted = _series_integrand(kind, alpha, s0)
    delta = f(s0) + counter(s0) - series_at_s0
    mode = delta / (2 * mp.sqrt(s0))
    bound = tail_omitted + series_omitted / (2 * mp.sqrt(s0)) + abs(mode) * 4 / s0**1.5
    return res.value + tail + mode, bound, res.error


def _trajectory(p: Params, s_low, traj: Trajectory | None, prec: int):
    s_low = mp.mpf(s_low)
    if traj is not None:
        if traj.s_min > s_low:
            raise DomainError(f"trajectory starts at {mp.nstr(traj.s_min, 8)}, integral needs {mp.nstr(s_low, 8)}")
        return traj
    end = min(mp.mpf(-2), mp.floor(s_low) - 1)
    return solve(p, s_end=end, prec=prec)


def _sigma_variable_integral(kind: str, s, p: Params, c, traj, prec):
    s, c = mp.mpf(s), mp.mpf(c)
    if c <= 0:
        raise ValidationError("c must be positive")
    traj = _trajectory(p, min(s, c), traj, prec)
    with mp.workprec(traj.prec):
        if c > traj.s_max:
            raise ValidationError(f"c = {mp.nstr(c, 8)} lies beyond the seed point {mp.nstr(traj.s_max, 8)}")
        if s > traj.s_max:
            raise DomainError(f"s = {mp.nstr(s, 8)} lies beyond the seed point {mp.nstr(traj.s_max, 8)}")
        poles = _poles_for(traj, kind)
        if any(loc > c for loc in _locations(poles)):
            raise ValidationError(f"integrand has poles on ({mp.nstr(c, 8)}, +inf); choose a larger c")
        upper, bound, err_up = _upper_part(traj, kind, c)
        lower, err_low, count = _pv_integrate(_integrand(traj, kind), s, c, poles, prec=traj.prec)
        value = upper + lower + _boundary(kind, p.alpha, c)
        return IntegralResult(+value, c, +bound, count, +(err_up + err_low))


def _locations(poles):
    return [pl.location if isinstance(pl, Pole) else pl[0] for pl in poles]


def I1_tilde(s, p: Params, c=1, traj: Trajectory | None = None, prec: int = DEFAULT_PRECISION) -> IntegralResult:
    """Regularized integral of w(s; 2 alpha + 1/2, omega).

    int_c^inf (w + sqrt t + (alpha + 1/4)/t) dt + P.V. int_s^c w dt
    + (2/3) c^(3/2) + (alpha + 1/4) ln c, with c > 0 above every pole of w.
    """
    return _sigma_variable_integral("w", s, p, c, traj, prec)


def I2(s, p: Params, c=1, traj: Trajectory | None = None, prec: int = DEFAULT_PRECISION) -> IntegralResult:
    """Regularized integral of the Hamiltonian H(s; 2 alpha, omega).

    int_c^inf (H + 2 alpha sqrt t + alpha^2/t) dt + int_s^c H dt
    + (4/3) alpha c^(3/2) + alpha^2 ln c, with c > 0.
    """
    return _sigma_variable_integral("H", s, p, c, traj, prec)


def I3(s, p: Params, c=1, traj: Trajectory | None = None, prec: int = DEFAULT_PRECISION) -> IntegralResult:
    """Regularized integral of u w' + H.

    int_c^inf (u w' + H + 2 alpha sqrt t + alpha(2 alpha + 1)/(2t)) dt
    + P.V. int_s^c (u w' + H) dt + (4/3) alpha c^(3/2) + alpha(alpha + 1/2) ln c.
    """
    return _sigma_variable_integral("uwH", s, p, c, traj, prec)


def I1(s, p: Params, c=-1, traj: Trajectory | None = None, prec: int = DEFAULT_PRECISION) -> IntegralResult:
    """Regularized integral of q(x; 2 alpha + 1/2, omega) in the PII variable x.

    int_-inf^c (q - sqrt(-x/2) + (alpha + 1/4)/x) dx + P.V. int_c^s q dx
    + (sqrt 2/3) c |c|^(1/2) - (alpha + 1/4) ln|c|, with c < 0, c < s and
    q pole-free on (-inf, c).

    The quadrature runs in x.  Below x0 = -2^(1/3) s0 the subtracted
    integrand equals -(w + sqrt t + (alpha + 1/4)/t) dt with t = -2^(-1/3) x,
    so that piece reuses the analytic w tail.
    """
    s, c = mp.mpf(s), mp.mpf(c)
    if c >= 0:
        raise ValidationError("c must be negative")
    if not c < s:
        raise ValidationError("c must be smaller than s")
    cbrt2 = mp.cbrt(2)
    t_s, t_c = -s / cbrt2, -c / cbrt2
    traj = _trajectory(p, t_s, traj, prec)
    with mp.workprec(traj.prec):
        cbrt2 = mp.cbrt(2)
        s0 = mp.mpf(traj.s_max)
        if t_c >= s0:
            raise ValidationError(f"c = {mp.nstr(c, 8)} lies beyond the seed point")
        if any(pl.location > t_c for pl in traj.poles):
            raise ValidationError(f"q has poles on (-inf, {mp.nstr(c, 8)}); choose a smaller c")
        alpha = p.alpha
        quarter = mp.mpf(1) / 4

        def q(x):
            return -traj.w_at(-x / cbrt2) / cbrt2

        x0 = -cbrt2 * s0
        head = integrate(
            lambda x: q(x) - mp.sqrt(-x / 2) + (alpha + quarter) / x, [x0, c], tol=QUAD_TOL, prec=traj.prec
        )
        tail, tail_omitted = tail_integral("w", alpha, s0)
        f_w = traj.w_at
        counter = _counterterm("w", alpha)
        series_at_s0, series_omitted = _series_integrand("w", alpha, s0)
        mode = (f_w(s0) + counter(s0) - series_at_s0) / (2 * mp.sqrt(s0))
        bound = tail_omitted + series_omitted / (2 * mp.sqrt(s0)) + abs(mode) * 4 / s0**1.5
        x_poles = [Pole(-cbrt2 * pl.location, 1) for pl in traj.poles]
        middle, err_mid, count = _pv_integrate(q, c, s, x_poles, prec=traj.prec)
        boundary = mp.sqrt(2) / 3 * c * mp.sqrt(abs(c)) - (alpha + quarter) * mp.log(abs(c))
        value = head.value - tail - mode + middle + boundary
        return IntegralResult(+value, c, +bound, count, +(head.error + err_mid))


def identity_integral_H(s, p: Params, c=1, traj: Trajectory | None = None, prec: int = DEFAULT_PRECISION):
    """|I2 - [-(u w + 2 s H + 2 alpha^2 + alpha)/3 + 2 alpha I1~ - I3]| at s."""
    s = mp.mpf(s)
    traj = _trajectory(p, min(s, mp.mpf(c)), traj, prec)
    with mp.workprec(traj.prec):
        alpha = p.alpha
        i2 = I2(s, p, c, traj).value
        i1t = I1_tilde(s, p, c, traj).value
        i3 = I3(s, p, c, traj).value
        sig, d1 = traj.sigma_derivs(s, 2)
        u, w = -d1, traj.w_at(s)
        rhs = -(u * w + 2 * s * sig + 2 * alpha**2 + alpha) / 3 + 2 * alpha * i1t - i3
        return abs(i2 - rhs)


def lemma_residuals(s, p: Params, traj: Trajectory | None = None, prec: int = DEFAULT_PRECISION) -> dict:
    """Pointwise residuals of the Hamiltonian-system identities at s.

    H is rebuilt from (u, w, s) as -u^2 + (w^2 - s) u + 2 alpha w and
    differentiated along the flow u' = 2 u w + 2 alpha, w' = s + 2u - w^2.
    Returned keys:

    * ``hamiltonian``: |H(u, w, s) - sigma|
    * ``H_u``: |dH/ds + u|
    * ``total_differential``: |(u w + 2 s H)' - 3(u w' + H) - 3(H - 2 alpha w)|
    * ``u_prime``: |u' - (2 u w + 2 alpha)| with u' = -sigma''

    Each is scaled by 1 + the magnitude of the largest term involved.
    """
    s = mp.mpf(s)
    traj = _trajectory(p, s, traj, prec)
    with mp.workprec(traj.prec):
        alpha = p.alpha
        sig, d1, d2 = traj.sigma_derivs(s, 3)
        u, w = -d1, traj.w_at(s)
        du_flow = 2 * u * w + 2 * alpha
        du = -d2
        dw = s + 2 * u - w * w
        ham = -(u**2) + (w * w - s) * u + 2 * alpha * w
        dham = -2 * u * du + (2 * w * dw - 1) * u + (w * w - s) * du + 2 * alpha * dw
        lhs = du * w + u * dw + 2 * sig + 2 * s * d1
        rhs = 3 * (u * dw + sig) + 3 * (sig - 2 * alpha * w)

        def scaled(diff, *terms):
            return abs(diff) / (1 + max(abs(t) for t in terms))

        return {
            "hamiltonian": scaled(ham - sig, u**2, w * w * u, s * u, alpha * w),
            "H_u": scaled(dham + u, u * du, w * dw * u, w * w * du, s * du),
            "total_differential": scaled(lhs - rhs, du * w, u * dw, s * d1, alpha * w),
            "u_prime": scaled(du - du_flow, u * w, du),
        }


def alpha_derivative_residual(s, p: Params, delta="1e-3", prec: int = DEFAULT_PRECISION):
    """|(u w' + H)_alpha - (u w_alpha)' - 2 w| at s by central differences in alpha.

    Uses trajectories at alpha +- delta with the same omega; the residual is
    O(delta^2).  Requires s away from poles of w for all three alphas.
    """
    s, delta = mp.mpf(s), mp.mpf(delta)
    with mp.workprec(prec):
        trajs = {k: _trajectory(Params(p.alpha + k * delta, p.omega), s, None, prec) for k in (-1, 0, 1)}

    def fields(traj):
        with mp.workprec(traj.prec):
            sig, d1, d2 = traj.sigma_derivs(s, 3)
            u, du = -d1, -d2
            w = traj.w_at(s)
            dw = s + 2 * u - w * w
            return u, du, w, dw, sig

    lo, mid, hi = fields(trajs[-1]), fields(trajs[0]), fields(trajs[1])
    with mp.workprec(prec):
        u, du, w, dw, _ = mid
        g_lo = lo[0] * lo[3] + lo[4]
        g_hi = hi[0] * hi[3] + hi[4]
        lhs = (g_hi - g_lo) / (2 * delta)
        w_a = (hi[2] - lo[2]) / (2 * delta)
        dw_a = (hi[3] - lo[3]) / (2 * delta)
        rhs = du * w_a + u * dw_a + 2 * w
        return abs(lhs - rhs)
