"""Taylor-series integrator for the pole-free third-order sigma equation.

The state is (sigma, sigma', sigma'') together with optional pairs (y, y')
solving the linear equation y'' = (s - 2 sigma') y, whose logarithmic
derivative is the Riccati variable w.  Taylor coefficients about s_n follow
from

    (k+1)(k+2)(k+3) a_{k+3} = 4 (s_n p_k + p_{k-1}) - 6 (p*p)_k - 2 a_k,
    (k+1)(k+2) b_{k+2}      = s_n b_k + b_{k-1} - 2 (p*b)_k,

with p_k = (k+1) a_{k+1} the coefficients of sigma'.  Arithmetic runs in
gmpy2 ``mpfr`` at the requested precision; conversions to and from mpmath
are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
import mpmath as mp
from gmpy2 import mpfr
from mpmath.libmp import from_man_exp

from ..errors import IntegrationError, StiffnessError

__all__ = [
    "to_mpfr",
    "to_mpf",
    "TaylorStep",
    "step_coefficients",
    "StepController",
    "march",
    "MarchResult",
]


def to_mpfr(x) -> "mpfr":
    """Exact conversion of an mpmath real (or int/float) to mpfr."""
    if isinstance(x, type(mpfr(0))):
        return x
    x = mp.mpf(x)
    if x == 0:
        return mpfr(0)
    sign, man, exp, bits = x._mpf_
    if sign:
        man = -man
    return gmpy2.mul_2exp(mpfr(man, max(int(bits), 2)), exp)


def to_mpf(x) -> mp.mpf:
    """Exact conversion of mpfr to an mpmath mpf."""
    if not gmpy2.is_finite(x):
        return mp.mpf(float(x))
    if x == 0:
        return mp.mpf(0)
    man, exp = x.as_mantissa_exp()
    return mp.mpf(from_man_exp(int(man), int(exp)))


def step_coefficients(s, state, ys, order):
    """Taylor coefficients of sigma and each y about ``s``.

    Parameters
    ----------
    s : mpfr
        Expansion point.
    state : tuple of mpfr
        (sigma, sigma', sigma'').
    ys : sequence of (y, y')
        Linear companions; may be empty.
    order : int
        Highest retained power.
    """
    zero = mpfr(0)
    a = [state[0], state[1], state[2] / 2] + [zero] * (order - 1)
    p = [zero] * (order + 1)
    bs = [[y, yp] + [zero] * (order - 1) for (y, yp) in ys]
    for k in range(order + 1):
        if k + 1 <= order:
            p[k] = (k + 1) * a[k + 1]
        if k + 3 <= order:
            pp = gmpy2.fsum([p[i] * p[k - i] for i in range(k + 1)])
            lin = s * p[k] + (p[k - 1] if k >= 1 else zero)
            a[k + 3] = (4 * lin - 6 * pp - 2 * a[k]) / ((k + 1) * (k + 2) * (k + 3))
        if k + 2 <= order:
            for b in bs:
                pb = gmpy2.fsum([p[i] * b[k - i] for i in range(k + 1)])
                b[k + 2] = (s * b[k] + (b[k - 1] if k >= 1 else zero) - 2 * pb) / ((k + 1) * (k + 2))
    return a, bs


def _horner(c, h):
    r = mpfr(0)
    for x in reversed(c):
        r = r * h + x
    return r


def _horner_derivs(c, h, count):
    """Values of the polynomial and its first ``count - 1`` derivatives."""
    out = []
    cur = list(c)
    for _ in range(count):
        out.append(_horner(cur, h))
        cur = [k * cur[k] for k in range(1, len(cur))]
    return out


@dataclass
class TaylorStep:
    """One accepted step: polynomial data about ``s`` valid on [s, s+h]."""

    s: object
    h: object
    sigma: list
    ys: list

    def contains(self, t) -> bool:
        lo, hi = (self.s, self.s + self.h) if self.h > 0 else (self.s + self.h, self.s)
        return lo <= t <= hi

    def eval_sigma(self, t, derivs: int = 3):
        return _horner_derivs(self.sigma, t - self.s, derivs)

    def eval_y(self, t, index: int = 0):
        return _horner_derivs(self.ys[index], t - self.s, 2)

    def end_state(self):
        vals = _horner_derivs(self.sigma, self.h, 3)
        ys = [tuple(_horner_derivs(b, self.h, 2)) for b in self.ys]
        return tuple(vals), ys


@dataclass(frozen=True)
class StepController:
    """Order and local tolerance of the Taylor method."""

    order: int
    local_tol: object
    min_step: float = 1e-14
    max_steps: int = 200000

    def step_size(self, a, bs, scale_sigma, scale_ys):
        n = self.order
        tol = to_mpfr(self.local_tol)
        best = None
        for j in (n - 1, n):
            mag = abs(a[j]) / scale_sigma
            for b, sc in zip(bs, scale_ys):
                mag = max(mag, abs(b[j]) / sc)
            if mag == 0:
                continue
            cand = (tol / mag) ** (mpfr(1) / j)
            best = cand if best is None else min(best, cand)
        if best is None:
            return mpfr(1)
        return best * mpfr("0.9")


def first_integral(s, state, alpha):
    """(sigma'')^2 + 4 sigma' (sigma'^2 - s sigma' + sigma) - 4 alpha^2."""
    sig, d1, d2 = state
    return d2 * d2 + 4 * d1 * (d1 * d1 - s * d1 + sig) - 4 * alpha * alpha


@dataclass
class MarchResult:
    """Outcome of :func:`march`."""

    steps: list
    s: object
    state: tuple
    ys: list
    completed: bool
    reason: str
    max_drift: object


def march(
    s0,
    state,
    ys,
    s_end,
    controller: StepController,
    alpha=None,
    drift_limit=None,
    blowup=None,
    keep_steps: bool = True,
    fixed_mesh=None,
):
    """Integrate from ``s0`` to ``s_end`` (either direction).

    The first-integral residual is monitored when ``alpha`` is given; if it
    exceeds ``drift_limit`` an :class:`IntegrationError` is raised.  With
    ``blowup`` set, the march stops quietly (``completed=False``) once the
    scaled state magnitude exceeds it, which shooting uses to classify
    trajectories.  ``fixed_mesh`` replays a previous list of step sizes.
    """
    s = to_mpfr(s0)
    s_end = to_mpfr(s_end)
    state = tuple(to_mpfr(v) for v in state)
    ys = [tuple(to_mpfr(v) for v in pair) for pair in ys]
    direction = 1 if s_end > s else -1
    steps = []
    alpha_r = to_mpfr(alpha) if alpha is not None else None
    max_drift = mpfr(0)
    count = 0
    while (s_end - s) * direction > 0:
        a, bs = step_coefficients(s, state, ys, controller.order)
        scale_sigma = max(mpfr(1), abs(state[0]), abs(state[1]), abs(state[2]))
        if not gmpy2.is_finite(scale_sigma):
            return MarchResult(steps, s, state, ys, False, "nonfinite", max_drift)
        if blowup is not None and scale_sigma > blowup * (1 + s * s):
            return MarchResult(steps, s, state, ys, False, "blowup", max_drift)
        scale_ys = [max(abs(y), abs(yp), mpfr("1e-300")) for (y, yp) in ys]
        if fixed_mesh is not None:
            if count >= len(fixed_mesh):
                return MarchResult(steps, s, state, ys, False, "mesh-exhausted", max_drift)
            h = fixed_mesh[count]
        else:
            h = controller.step_size(a, bs, scale_sigma, scale_ys)
            if h < controller.min_step * (1 + abs(s)):
                if blowup is not None:
                    return MarchResult(steps, s, state, ys, False, "underflow", max_drift)
                raise StiffnessError(f"step size underflow at s = {float(s):.6g}")
            h = min(h, abs(s_end - s)) * direction
        step = TaylorStep(s, h, a, bs)
        state, ys = step.end_state()
        s = s + h
        if fixed_mesh is None and (s_end - s) * direction < 0:
            s = s_end
        if keep_steps:
            steps.append(step)
        count += 1
        if alpha_r is not None:
            drift = abs(first_integral(s, state, alpha_r))
            max_drift = max(max_drift, drift)
            if drift_limit is not None and drift > drift_limit:
                if blowup is not None:
                    return MarchResult(steps, s, state, ys, False, "drift", max_drift)
                raise IntegrationError(
                    f"first integral drifted to {float(drift):.3e} at s = {float(s):.6g}"
                )
        if count > controller.max_steps:
            raise StiffnessError("maximum number of steps exceeded")
    return MarchResult(steps, s, state, ys, True, "ok", max_drift)


def mesh_of(result: MarchResult):
    """Step sizes of a march, for replay through ``fixed_mesh``."""
    return [st.h for st in result.steps]
