"""Quantities derived from the sigma state; pole location and classification.

Relations used (u = -sigma', H = sigma):

* w = (sigma'' + 2 alpha) / (2 sigma') from u' = 2 u w + 2 alpha;
* w' = s + 2u - w^2 from -w' = w^2 - 2u - s;
* q(x) = -2^(-1/3) w(t) with t = -2^(-1/3) x, hence q'(x) = 2^(-2/3) w'(t).

At a zero s* of sigma' with alpha != 0 the first integral forces
sigma''(s*) = +-2 alpha.  If sigma'' = -2 alpha the zero is removable and
w(s*) = sigma'''/(2 sigma'') = sigma(s*)/(2 alpha); if sigma'' = 2 alpha, w
has a simple pole with residue (sigma'' + 2 alpha)/(2 sigma'') = 1.  At
alpha = 0 zeros of sigma' are double and are poles of w whenever the
companion y (w = y'/y) vanishes there.
"""

from __future__ import annotations

import mpmath as mp

from ..errors import ClassificationError, PoleError
from .params import Params
from .taylor import to_mpf, to_mpfr
from .trajectory import Pole, SigmaState, TaylorSegment, Trajectory

__all__ = ["derived_fields", "pii_residual", "locate_poles", "q_from_w", "w_prime"]

def _cbrt2():
    return mp.cbrt(2)


def w_prime(s, u, w):
    """w' = s + 2u - w^2."""
    return s + 2 * u - w * w


def q_from_w(s, u, w):
    """(x, q(x), q'(x)) corresponding to (s, u, w) through the rescaling."""
    c = _cbrt2()
    x = -c * s
    q = -w / c
    q_prime = w_prime(s, u, w) / (c * c)
    return x, q, q_prime


def derived_fields(state: SigmaState, p: Params, w=None):
    """(u, w, H, q, q') at the state's s.

    ``q`` and ``q'`` refer to the PII variable x = -2^(1/3) s.  ``w`` may be
    supplied (e.g. from the pole-free companion y) when the state alone does
    not determine it, as for sigma identically zero.

    Raises
    ------
    PoleError
        If sigma' = 0 with sigma'' != -2 alpha (a pole of w).
    """
    alpha = p.alpha
    s, sig, d1, d2 = state.s, state.sigma, state.dsigma, state.d2sigma
    u = -d1
    if w is None:
        if d1 != 0:
            w = (d2 + 2 * alpha) / (2 * d1)
        elif alpha != 0 and abs(d2 + 2 * alpha) <= abs(d2 - 2 * alpha):
            w = sig / (2 * alpha)
        else:
            raise PoleError(f"w has a pole at s = {mp.nstr(s, 15)}", Pole(s, 1))
    _, q, q_prime = q_from_w(s, u, w)
    return u, w, sig, q, q_prime


def pii_residual(q, q1, q2, s, p: Params):
    """|q'' - 2 q^3 - s q + nu|."""
    return abs(q2 - 2 * q**3 - s * q + p.nu)


def _refine_root(f, a, b, iters=200):
    """Bisection-secant (Illinois) root of f on [a, b] with f(a) f(b) < 0."""
    fa, fb = f(a), f(b)
    side = 0
    for _ in range(iters):
        c = (a * fb - b * fa) / (fb - fa)
        fc = f(c)
        if fc == 0:
            return c
        if (fc > 0) == (fb > 0):
            b, fb = c, fc
            if side == -1:
                fa /= 2
            side = -1
        else:
            a, fa = c, fc
            if side == 1:
                fb /= 2
            side = 1
        if abs(b - a) <= abs(c) * mp.mpf(2) ** (-mp.mp.prec + 8) + mp.mpf(2) ** (-mp.mp.prec):
            break
    return (a * fb - b * fa) / (fb - fa)


def _sign_changes(f, grid):
    out = []
    prev_t, prev_v = grid[0], f(grid[0])
    for t in grid[1:]:
        v = f(t)
        if prev_v == 0:
            out.append((prev_t, prev_t))
        elif (v > 0) != (prev_v > 0) and v != 0:
            out.append((prev_t, t))
        prev_t, prev_v = t, v
    return out


def locate_poles_in(traj: Trajectory, subdivisions: int = 8):
    """Poles of w and removable zeros of sigma' within Taylor segments."""
    alpha = traj.params.alpha
    poles, removable = [], []
    with mp.workprec(traj.internal_prec):
        root_tol = mp.mpf(10) ** (-int(traj.prec * 0.3))
        class_tol = mp.mpf(10) ** -6
        for seg in traj.segments:
            if not isinstance(seg, TaylorSegment):
                continue
            grid = []
            for st in seg.steps:
                lo, hi = to_mpf(min(st.s, st.s + st.h)), to_mpf(max(st.s, st.s + st.h))
                grid.extend(lo + (hi - lo) * k / subdivisions for k in range(subdivisions))
            grid.append(to_mpf(seg.hi))
            grid = sorted(set(grid))

            def y_of(t):
                return to_mpf(seg.y(to_mpfr(t))[0])

            def d1_of(t):
                return to_mpf(seg.sigma(to_mpfr(t), 2)[1])

            y_roots = []
            if seg.steps[0].ys:
                for a, b in _sign_changes(y_of, grid):
                    y_roots.append(a if a == b else _refine_root(y_of, a, b))
            for r in y_roots:
                sig, d1, d2 = (to_mpf(v) for v in seg.sigma(to_mpfr(r), 3))
                scale = 1 + abs(r)
                if abs(d1) > root_tol * scale**2 * 1e6:
                    raise ClassificationError(
                        f"zero of y at s = {mp.nstr(r, 12)} without a zero of sigma' ({mp.nstr(d1, 5)})"
                    )
                if alpha != 0 and abs(d2 - 2 * alpha) > class_tol * (1 + abs(alpha)):
                    raise ClassificationError(
                        f"pole at s = {mp.nstr(r, 12)} has sigma'' = {mp.nstr(d2, 8)}, expected 2 alpha"
                    )
                # w = y'/y ~ 1/(s - s*) at a simple zero of y.
                poles.append(Pole(+r, 1))
            if alpha == 0:
                continue
            for a, b in _sign_changes(d1_of, grid):
                r = a if a == b else _refine_root(d1_of, a, b)
                if any(abs(r - pr) <= 1e-8 * (1 + abs(r)) for pr in y_roots):
                    continue
                d2 = to_mpf(seg.sigma(to_mpfr(r), 3)[2])
                if abs(d2 + 2 * alpha) <= class_tol * (1 + abs(alpha)):
                    removable.append(+r)
                elif abs(d2 - 2 * alpha) <= class_tol * (1 + abs(alpha)):
                    # A pole the sign scan of y missed (e.g. a double crossing).
                    poles.append(Pole(+r, 1))
                else:
                    raise ClassificationError(
                        f"zero of sigma' at s = {mp.nstr(r, 12)} with sigma'' = {mp.nstr(d2, 8)} "
                        f"matches neither -2 alpha nor 2 alpha"
                    )
    with mp.workprec(traj.prec):
        poles = sorted((Pole(+pl.location, pl.residue) for pl in poles), key=lambda pl: pl.location)
        removable = sorted(+r for r in removable)
    return poles, removable


def locate_poles(t: Trajectory):
    """Poles of w along a trajectory (already located at construction)."""
    return list(t.poles)
