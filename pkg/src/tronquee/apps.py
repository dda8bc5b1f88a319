"""Random-matrix applications of the Hamiltonian integrals.

* Tracy-Widom: ln F_TW(x) = -int_x^inf H(t; 0, 0) dt, with the q route
  ln F_TW(x) = -int_x^inf (y - x) q(y)^2 dy on the Hastings-McLeod
  solution (alpha = -1/4, omega = 0).
* Thinned GUE: ln F(s) = -int_s^inf H(t; 0, omega) dt for 0 < omega < 1.
* P34 tail integrals and the soft/hard edge constants.
* Least-squares constant extraction on asymptotic bases.
"""

from __future__ import annotations

import functools
import inspect
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath as mp

from .config import DEFAULT_PRECISION
from .errors import ValidationError
from .painleve import Params
from .quadrature import integrate
from .regint import I1, I2, QUAD_TOL, _exponents, _tail_coeffs, _trajectory, _truncated, _upper_part
from .series import c0, rhs_I1, rhs_I2, theta, vartheta
from .specfun import ln_barnes_g, ln_gamma

__all__ = [
    "GapExpansionFit",
    "fit_gap_expansion",
    "fit_constant",
    "tw_log_cdf",
    "tw_log_cdf_q_route",
    "tw_left_tail_fit",
    "thinned_gue_log_cdf",
    "P34Tail",
    "p34_tail_identity",
    "transition_constants",
    "i2_growth",
    "predicted_i2_constant",
    "i2_constant_fit",
    "cosine_safe_nodes",
    "i1_offset_fit",
    "DecayCheck",
    "i1_decay_check",
]

GAP_BASIS = ("|s|^3", "|s|^(3/2)", "ln|s|", "1")


def _at_precision(func):
    """Run ``func`` at the working precision given by its ``prec`` argument."""
    sig = inspect.signature(func)

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        bound = sig.bind(*args, **kwargs)
        bound.apply_defaults()
        with mp.workprec(bound.arguments["prec"]):
            return func(*args, **kwargs)

    return wrapper


@dataclass(frozen=True)
class GapExpansionFit:
    """Least-squares fit of values against named basis functions of s.

    ``coefficients`` maps basis names to fitted values; ``residual_norm`` is
    the max absolute fit residual over the nodes in ``window``.
    """

    coefficients: dict
    residual_norm: object
    window: tuple
    nodes: int

    @property
    def constant(self):
        return self.coefficients["1"]


_BASIS_FUNCTIONS: dict[str, Callable] = {
    "|s|^3": lambda s: abs(s) ** 3,
    "|s|^(3/2)": lambda s: abs(s) ** mp.mpf(1.5),
    "ln|s|": lambda s: mp.log(abs(s)),
    "1": lambda s: mp.mpf(1),
    "|s|^(-3/2)": lambda s: abs(s) ** mp.mpf(-1.5),
    "|s|^(-3)": lambda s: abs(s) ** -3,
    "|s|^(-9/2)": lambda s: abs(s) ** mp.mpf(-4.5),
    "|s|^(-6)": lambda s: abs(s) ** -6,
    "ln|s| |s|^(-3/2)": lambda s: mp.log(abs(s)) * abs(s) ** mp.mpf(-1.5),
}


@_at_precision
def fit_constant(
    s_values: Sequence, values: Sequence, basis: Sequence, extra: dict | None = None, prec: int = DEFAULT_PRECISION
) -> GapExpansionFit:
    """Least squares of ``values`` on the named ``basis`` (QR solve at ``prec`` bits).

    ``extra`` adds caller-defined basis functions, e.g. oscillatory terms.
    """
    funcs = dict(_BASIS_FUNCTIONS)
    funcs.update(extra or {})
    missing = [b for b in basis if b not in funcs]
    if missing:
        raise ValidationError(f"unknown basis functions {missing}")
    if len(s_values) != len(values):
        raise ValidationError("s_values and values differ in length")
    if len(s_values) < max(4, len(basis)):
        raise ValidationError("need at least 4 nodes and one per basis function")
    s_values = [mp.mpf(s) for s in s_values]
    a = mp.matrix([[funcs[b](s) for b in basis] for s in s_values])
    y = mp.matrix([mp.mpf(v) for v in values])
    coef, _ = mp.qr_solve(a, y)
    fitted = a * coef
    residual = max(abs(fitted[i] - y[i]) for i in range(len(values)))
    return GapExpansionFit(
        {b: coef[i] for i, b in enumerate(basis)}, residual, (min(s_values), max(s_values)), len(s_values)
    )


@_at_precision
def fit_gap_expansion(
    s_values: Sequence, values: Sequence, decay: Sequence = ("|s|^(-3)",), prec: int = DEFAULT_PRECISION
) -> GapExpansionFit:
    """Fit {|s|^3, |s|^(3/2), ln|s|, 1} plus decaying correction terms."""
    return fit_constant(s_values, values, list(GAP_BASIS) + list(decay), prec=prec)


# -- Tracy-Widom ------------------------------------------------------------------------


@_at_precision
def tw_log_cdf(x, prec: int = DEFAULT_PRECISION):
    """ln F_TW(x) = -int_x^inf H(t; 0, 0) dt."""
    return -I2(x, Params(0, 0), c=1, prec=prec).value


@_at_precision
def tw_log_cdf_q_route(x, weight=1, prec: int = DEFAULT_PRECISION):
    """-weight * int_x^inf (y - x) q(y)^2 dy on the Hastings-McLeod solution.

    ``weight=1`` is the standard Tracy-Widom representation.  q is read
    from the alpha = -1/4, omega = 0 trajectory in the PII variable; it
    decays like Ai(y), so the integral is cut where q^2 underflows the
    working precision.
    """
    x = mp.mpf(x)
    p = Params("-0.25", 0)
    cbrt2 = mp.cbrt(2)
    # Ai(y)^2 ~ exp(-(4/3) y^(3/2)) drops below 2^-prec at this y.
    y_max = max(x + 1, (mp.mpf(3) / 4 * prec * mp.log(2)) ** (mp.mpf(2) / 3) + 2)
    traj = _trajectory(p, -y_max / cbrt2, None, prec)
    if -x / cbrt2 > traj.s_max:
        raise ValidationError(f"x = {mp.nstr(x, 8)} is left of the trajectory's seed point")

    def integrand(y):
        q = -traj.w_at(-y / cbrt2) / cbrt2
        return (y - x) * q * q

    pts = [x] + [v for v in (mp.mpf(0), mp.mpf(4), mp.mpf(10)) if x < v < y_max] + [y_max]
    res = integrate(integrand, pts, tol=QUAD_TOL, prec=traj.prec)
    return -mp.mpf(weight) * res.value


@_at_precision
def tw_left_tail_fit(window=(-14, -9), nodes: int = 11, prec: int = DEFAULT_PRECISION) -> GapExpansionFit:
    """Fit ln F_TW on ``window`` against the large-gap basis plus |x|^-3, |x|^-6."""
    lo, hi = (mp.mpf(v) for v in window)
    xs = [lo + (hi - lo) * k / (nodes - 1) for k in range(nodes)]
    vals = [tw_log_cdf(x, prec) for x in xs]
    return fit_gap_expansion(xs, vals, decay=("|s|^(-3)", "|s|^(-6)"), prec=prec)


# -- thinned GUE ------------------------------------------------------------------------


@_at_precision
def thinned_gue_log_cdf(s, omega, prec: int = DEFAULT_PRECISION):
    """ln F(s) = int_s^inf [H(t; 0, 1) - H(t; 0, omega)] dt = -int_s^inf H(t; 0, omega) dt."""
    omega = mp.mpf(omega)
    if not 0 < omega < 1:
        raise ValidationError("thinned GUE needs 0 < omega < 1")
    return -I2(s, Params(0, omega), c=1, prec=prec).value


# -- P34 tail identity ------------------------------------------------------------------


@dataclass(frozen=True)
class P34Tail:
    """The two tail integrals of the P34 large-gap formula at t > 0.

    ``weighted`` = int_t^inf (tau - t)(u - alpha/sqrt tau + alpha^2/tau^2),
    ``hamiltonian`` = int_t^inf (H + 2 alpha sqrt tau + alpha^2/tau).
    Integration by parts with H' = -u gives weighted = hamiltonian.
    """

    weighted: object
    hamiltonian: object

    @property
    def residual(self):
        """|weighted + hamiltonian|: the identity with weighted = -hamiltonian."""
        return abs(self.weighted + self.hamiltonian)

    @property
    def parts_residual(self):
        """|weighted - hamiltonian|: the integration-by-parts identity."""
        return abs(self.weighted - self.hamiltonian)


def _weighted_tail(alpha, t, L):
    """int_L^inf (tau - t) u_sub(tau) dtau from the +inf series, and the series u_sub(L).

    u_sub = u - alpha/sqrt(tau) + alpha^2/tau^2 = -sum_{k>=2} h_k e_k tau^(e_k - 1).
    """
    h = _tail_coeffs("H", alpha)
    e = _exponents(len(h))
    # int_L^inf tau^e = -L^(e+1)/(e+1) and int_L^inf tau^(e-1) = -L^e/e for e < -1.
    integral = [-h[k] * e[k] * (t * L ** e[k] / e[k] - L ** (e[k] + 1) / (e[k] + 1)) for k in range(2, len(h))]
    pointwise = [-h[k] * e[k] * L ** (e[k] - 1) for k in range(2, len(h))]
    return _truncated(integral)[0], _truncated(pointwise)[0]


@_at_precision
def p34_tail_identity(t, p: Params, prec: int = DEFAULT_PRECISION) -> P34Tail:
    """Both P34 tail integrals at t > 0, each from its own quadrature and series tail."""
    t = mp.mpf(t)
    if t <= 0:
        raise ValidationError("t must be positive")
    traj = _trajectory(p, min(t, mp.mpf(1)), None, prec)
    with mp.workprec(traj.prec):
        alpha = p.alpha
        s0 = mp.mpf(traj.s_max)
        if t >= s0:
            raise ValidationError("t must lie below the trajectory's seed point")

        def u_sub(tau):
            u = -traj.sigma_derivs(tau, 2)[1]
            return u - alpha / mp.sqrt(tau) + alpha**2 / tau**2

        head = integrate(lambda tau: (tau - t) * u_sub(tau), [t, s0], tol=QUAD_TOL, prec=traj.prec).value
        tail, series_at_s0 = _weighted_tail(alpha, t, s0)
        # Exponentially small remainder beyond s0, as in the regularized integrals.
        mode = (s0 - t) * (u_sub(s0) - series_at_s0) / (2 * mp.sqrt(s0))
        hamiltonian, _, _ = _upper_part(traj, "H", t)
        return P34Tail(+(head + tail + mode), +hamiltonian)


# -- soft/hard edge constants -----------------------------------------------------------


def transition_constants(alpha):
    """(soft, hard) = (c0, ln(G(1 + 2 alpha) / (2 pi)^alpha))."""
    alpha = mp.mpf(alpha)
    if alpha <= -0.5:
        raise ValidationError("alpha must exceed -1/2")
    return c0(), ln_barnes_g(1 + 2 * alpha) - alpha * mp.log(2 * mp.pi)


# -- constant extraction for the total integrals ----------------------------------------


def i2_growth(s, p: Params):
    """Growing part of I2 as s -> -inf: the |s|^3 or |s|^(3/2) term plus the log term."""
    a = abs(mp.mpf(s))
    if p.beta is None:
        return a**3 / 12 - (2 * p.alpha**2 - mp.mpf(1) / 8) * mp.log(a)
    beta = p.beta
    return mp.re(mp.mpf(4) / 3 * 1j * beta * a ** mp.mpf(1.5) + (3 * beta**2 - p.alpha**2) / 2 * mp.log(a))


@_at_precision
def predicted_i2_constant(p: Params, prec: int = DEFAULT_PRECISION):
    """Constant term of the closed-form large negative s expansion of I2."""
    return rhs_I2(-1, p) - i2_growth(-1, p)


@_at_precision
def i2_constant_fit(p: Params, window=(-16, -10), nodes: int = 13, prec: int = DEFAULT_PRECISION) -> GapExpansionFit:
    """Fit I2(s) - i2_growth(s) on ``window`` and extrapolate its constant.

    omega = 0 uses {1, |s|^-3, |s|^-6}; omega > 0 adds |s|^(-3/2) times
    {1, cos theta, sin theta}, the oscillation left by the sin theta / s
    term of H.
    """
    lo, hi = (mp.mpf(v) for v in window)
    if hi >= 0:
        raise ValidationError("the window must lie in s < 0")
    xs = [lo + (hi - lo) * k / (nodes - 1) for k in range(nodes)]
    vals = [I2(x, p, prec=prec).value - i2_growth(x, p) for x in xs]
    if p.beta is None:
        return fit_constant(xs, vals, ["1", "|s|^(-3)", "|s|^(-6)"])
    extra = {
        "cos(theta) |s|^(-3/2)": lambda x: mp.cos(theta(x, p)) * abs(x) ** mp.mpf(-1.5),
        "sin(theta) |s|^(-3/2)": lambda x: mp.sin(theta(x, p)) * abs(x) ** mp.mpf(-1.5),
    }
    return fit_constant(xs, vals, ["1", "|s|^(-3/2)", *extra], extra)


def _i1_phase(s, p: Params):
    return vartheta(s, p) / 2 + mp.im(ln_gamma(1 + p.alpha - p.beta)) - mp.pi / 4


def cosine_safe_nodes(p: Params, window=(15, 40), step="0.75", min_abs_cos="0.5"):
    """Grid points of ``window`` where the cosine in the omega > 0 I1 expansion is not small."""
    if p.beta is None:
        raise ValidationError("cosine-safe nodes need omega > 0")
    lo, hi, step = mp.mpf(window[0]), mp.mpf(window[1]), mp.mpf(step)
    count = int(mp.floor((hi - lo) / step)) + 1
    grid = [lo + k * step for k in range(count)]
    return [s for s in grid if abs(mp.cos(_i1_phase(s, p))) >= mp.mpf(min_abs_cos)]


@_at_precision
def i1_offset_fit(p: Params, nodes=None, prec: int = DEFAULT_PRECISION) -> GapExpansionFit:
    """Fit I1(s) - rhs_I1(s) on cosine-safe nodes by {1, s^(-3/2), s^(-3/2) tan phi}.

    phi is the cosine argument of the expansion; tan phi s^(-3/2) is the
    first-order effect of the phase correction on ln|cos phi|.  The constant
    coefficient is the extrapolated offset.
    """
    nodes = cosine_safe_nodes(p) if nodes is None else [mp.mpf(s) for s in nodes]
    vals = [I1(s, p, prec=prec).value - rhs_I1(s, p) for s in nodes]
    extra = {"tan(phi) s^(-3/2)": lambda s: mp.tan(_i1_phase(s, p)) * s ** mp.mpf(-1.5)}
    return fit_constant(nodes, vals, ["1", "|s|^(-3/2)", *extra], extra)


@dataclass(frozen=True)
class DecayCheck:
    """Residuals r_i = I1(s_i) - rhs_I1(s_i) with their decay summary.

    ``slope`` is the least-squares slope of ln|r| against ln s; ``offset`` is
    the constant C of r = C + a s^p fitted exactly through the last three
    nodes (Aitken's delta-squared on a geometric grid).
    """

    nodes: tuple
    residuals: tuple
    slope: object
    offset: object


@_at_precision
def i1_decay_check(p: Params, nodes=(20, 40, 80), prec: int = DEFAULT_PRECISION) -> DecayCheck:
    """Decay of I1 - rhs_I1 on a geometric grid of large positive s."""
    nodes = tuple(mp.mpf(s) for s in nodes)
    if len(nodes) < 3:
        raise ValidationError("need at least three nodes")
    ratios = {mp.nstr(b / a, 12) for a, b in zip(nodes, nodes[1:])}
    if len(ratios) != 1:
        raise ValidationError("nodes must form a geometric sequence")
    res = tuple(I1(s, p, prec=prec).value - rhs_I1(s, p) for s in nodes)
    xs = [mp.log(s) for s in nodes]
    ys = [mp.log(abs(r)) for r in res]
    xm, ym = mp.fsum(xs) / len(xs), mp.fsum(ys) / len(ys)
    slope = mp.fsum((x - xm) * (y - ym) for x, y in zip(xs, ys)) / mp.fsum((x - xm) ** 2 for x in xs)
    r1, r2, r3 = res[-3:]
    denom = r1 + r3 - 2 * r2
    offset = (r1 * r3 - r2 * r2) / denom if denom != 0 else r3
    return DecayCheck(nodes, res, slope, offset)
