"""Trajectory construction: seeding at +inf, shooting, and integration.

The pole-free member (omega = 0) is a separatrix: a pure initial-value
integration from s0 loses it within a few units of s.  It is therefore
computed as a two-point connection problem.  A right shot carries the
unknown mode coefficient kappa; a left shot from the -inf expansion at
``s_left`` carries an unknown perturbation L of its recessive mode.  Newton's
method matches (sigma', sigma'') at ``s_match``, where the first integral
makes sigma follow.  Below ``s_left`` the -inf expansion itself is
exponentially accurate and serves as dense output.

For omega > 0 the mode coefficient is (kappa_0 - omega) with kappa_0 the
connection value found above (exactly 1 at alpha = 0, where the power series
vanishes and sigma = (1 - omega)(Ai'^2 - s Ai^2) to leading order).  The
optimal-truncation error of the power series at s0 has a component along
the mode; kappa_0 absorbs it, so kappa_0 is tied to (s0, order) and is
cached per that key.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import gmpy2
import mpmath as mp
from gmpy2 import mpfr

from ..config import DEFAULT_PRECISION, DEFAULT_S0, DEFAULT_TOL, TaylorSettings
from ..errors import IntegrationError, NumericalError, SeedError, ValidationError
from .params import Params
from .seeds import SeedData, left_seed, right_seed
from .taylor import StepController, first_integral, march, mesh_of, to_mpf, to_mpfr
from .trajectory import SeedMeta, SeriesSegment, SigmaState, TaylorSegment, Trajectory

__all__ = [
    "GUARD_BITS",
    "S_LEFT",
    "S_MATCH",
    "SEED_TARGET",
    "ConnectionResult",
    "connection_coefficient",
    "seed_at_plus_infinity",
    "integrate",
    "solve",
]

# Extra mantissa bits carried internally; shooting amplifies rounding errors
# by up to exp(82) ~ 2^118 between the seeds and the matching point.
GUARD_BITS = 128
# Left seed for omega = 0; the recessive mode there is ~1e-37.
S_LEFT = -20
S_MATCH = -2
# Largest acceptable truncation error of the +inf power series at s0.
SEED_TARGET = 1e-20


def _ctx(prec):
    return gmpy2.context(gmpy2.get_context(), precision=prec)


def _weighted_march(s0, state, ys, s_end, order, local_tol, floor, **kw):
    """March backward from s0 > 0 with an s-dependent local tolerance.

    The interval (max(s_end, 0), s0] is split into unit-length pieces, each
    integrated with tolerance local_tol * exp(-(4/3) s^(3/2)) at its right
    end (floored at ``floor``); the rest uses ``local_tol``.
    """
    s0 = mp.mpf(s0)
    s_end = mp.mpf(s_end)
    stop = max(s_end, mp.mpf(0))
    pieces = []
    s = s0
    while s > stop:
        nxt = max(stop, s - 1)
        pieces.append((s, nxt))
        s = nxt
    if s_end < stop:
        pieces.append((stop, s_end))
    steps = []
    max_drift = mpfr(0)
    cur_state, cur_ys = state, ys
    result = None
    for a, b in pieces:
        weight = mp.exp(-mp.mpf(4) / 3 * max(a, 0) ** 1.5) if a > 0 else mp.mpf(1)
        tol = max(mp.mpf(local_tol) * weight, mp.mpf(floor))
        ctl = StepController(order, tol)
        result = march(a, cur_state, cur_ys, b, ctl, **kw)
        steps.extend(result.steps)
        max_drift = max(max_drift, result.max_drift)
        if not result.completed:
            break
        cur_state, cur_ys = result.state, result.ys
    result.steps = steps
    result.max_drift = max_drift
    return result


@dataclass(frozen=True)
class ConnectionResult:
    """Solution of the omega = 0 connection problem."""

    kappa: object
    perturbation: object
    residual: object
    iterations: int
    s_match: object
    s_left: object


def _shot_settings(prec: int):
    """Order and tolerances used inside the connection solver."""
    internal = prec + GUARD_BITS
    local = mp.mpf(2) ** (-(prec + 40))
    floor = mp.mpf(2) ** (-(internal - 24))
    order = max(24, min(90, int(-mp.log(local) / 2) + 2))
    return internal, order, local, floor


class _Shooter:
    """Right and left shots for one (alpha, s0, order, prec)."""

    def __init__(self, alpha, s0, order, prec):
        self.alpha = mp.mpf(alpha)
        self.s0 = mp.mpf(s0)
        self.order = order
        self.prec = prec
        self.internal, self.taylor_order, self.local, self.floor = _shot_settings(prec)

    def right(self, kappa, s_stop, blowup=None, fixed_mesh=None, cheap=False):
        seed = right_seed(self.alpha, self.s0, kappa, self.order)
        ys = [(1, seed.w)]
        if cheap:
            ctl = StepController(28, mp.mpf(10) ** -28)
            return march(self.s0, seed.state, ys, s_stop, ctl, blowup=blowup, keep_steps=False)
        if fixed_mesh is not None:
            ctl = StepController(self.taylor_order, self.local)
            return march(self.s0, seed.state, ys, s_stop, ctl, blowup=blowup, fixed_mesh=fixed_mesh)
        return _weighted_march(
            self.s0, seed.state, ys, s_stop, self.taylor_order, self.local, self.floor, blowup=blowup
        )

    def left(self, perturbation, s_stop, s_left=S_LEFT, fixed_mesh=None, cheap=False):
        seed = left_seed(self.alpha, s_left, perturbation)
        ys = [(1, seed.w)]
        if cheap:
            ctl = StepController(28, mp.mpf(10) ** -28)
        else:
            ctl = StepController(self.taylor_order, self.local)
        return march(s_left, seed.state, ys, s_stop, ctl, fixed_mesh=fixed_mesh)


def _classify(shooter: _Shooter, kappa, ref_d1, s_check):
    """+1 if kappa lies above the separatrix value, -1 below, with the gap.

    Above, the backward shot blows up (sigma' -> -inf) before s_check or
    arrives with sigma' below the left reference; below, it arrives with
    sigma' above.
    """
    res = shooter.right(kappa, s_check, blowup=mpfr(10) ** 4, cheap=True)
    if not res.completed:
        return 1, None
    gap = res.state[1] - ref_d1
    return (1 if gap < 0 else -1), abs(gap)


def _bracket(shooter: _Shooter, s_check=-6):
    """Bisection bracket for kappa_0 from the blow-up/oscillation dichotomy."""
    ref = shooter.left(0, s_check, cheap=True)
    ref_d1 = ref.state[1]
    start = mp.mpf(1)
    side, _ = _classify(shooter, start, ref_d1, s_check)
    # Expand geometrically away from the starting point.
    lo = hi = None
    if side > 0:
        hi = start
        step = mp.mpf(1)
        cand = start - step
        while True:
            sgn, _ = _classify(shooter, cand, ref_d1, s_check)
            if sgn < 0:
                lo = cand
                break
            hi = cand
            step *= 4
            cand = start - step
            if step > 1e40:
                raise NumericalError("could not bracket the connection coefficient")
    else:
        lo = start
        step = mp.mpf(1)
        cand = start + step
        while True:
            sgn, _ = _classify(shooter, cand, ref_d1, s_check)
            if sgn > 0:
                hi = cand
                break
            lo = cand
            step *= 4
            cand = start + step
            if step > 1e40:
                raise NumericalError("could not bracket the connection coefficient")
    for _ in range(400):
        if lo * hi > 0 and hi / lo > 4 or lo * hi > 0 and lo / hi > 4:
            mid = mp.sign(lo) * mp.sqrt(lo * hi)
        else:
            mid = (lo + hi) / 2
        sgn, gap = _classify(shooter, mid, ref_d1, s_check)
        if sgn > 0:
            hi = mid
        else:
            lo = mid
        if gap is not None and gap < 1e-6:
            return mid
        if abs(hi - lo) <= 1e-20 * max(1, abs(mid)):
            return mid
    return (lo + hi) / 2


def _residual(shooter: _Shooter, kappa, pert, s_match, meshes=None):
    right = shooter.right(kappa, s_match, fixed_mesh=None if meshes is None else meshes[0])
    left = shooter.left(pert, s_match, fixed_mesh=None if meshes is None else meshes[1])
    if not (right.completed and left.completed):
        return None, right, left
    r = [to_mpf(right.state[1] - left.state[1]), to_mpf(right.state[2] - left.state[2])]
    return r, right, left


def _newton(shooter: _Shooter, kappa, pert, s_match, max_iter=40):
    best = None
    stagnant = 0
    for it in range(max_iter):
        r, right, left = _residual(shooter, kappa, pert, s_match)
        if r is None:
            raise NumericalError(f"shot failed during Newton iteration at kappa = {mp.nstr(kappa, 20)}")
        size = max(abs(r[0]), abs(r[1]))
        if best is not None and size >= best * 0.5:
            stagnant += 1
        else:
            stagnant = 0
        best = size if best is None else min(best, size)
        if stagnant >= 2 or size < mp.mpf(2) ** (-(shooter.prec + 32)):
            return kappa, pert, size, it
        meshes = (mesh_of(right), mesh_of(left))
        dk = mp.mpf(10) ** -24 * max(1, abs(kappa))
        dl = mp.mpf(10) ** -24 * max(1, abs(pert))
        rk, _, _ = _residual(shooter, kappa + dk, pert, s_match, meshes)
        rl, _, _ = _residual(shooter, kappa, pert + dl, s_match, meshes)
        # Baseline on the same mesh so the difference quotients are smooth.
        r0, _, _ = _residual(shooter, kappa, pert, s_match, meshes)
        jac = mp.matrix(
            [[(rk[0] - r0[0]) / dk, (rl[0] - r0[0]) / dl], [(rk[1] - r0[1]) / dk, (rl[1] - r0[1]) / dl]]
        )
        dx = mp.lu_solve(jac, mp.matrix(r))
        # Damp steps that leave the linear regime of the left perturbation.
        scale = 1
        while abs(dx[1]) * scale > 10 * max(1, abs(pert)) and scale > 1e-3:
            scale /= 2
        kappa -= scale * dx[0]
        pert -= scale * dx[1]
    return kappa, pert, best, max_iter


@lru_cache(maxsize=64)
def _connection_cached(alpha_key, s0_key, order, prec):
    alpha = mp.mpf(alpha_key)
    with mp.workprec(prec + GUARD_BITS), _ctx(prec + GUARD_BITS):
        shooter = _Shooter(alpha, mp.mpf(s0_key), order, prec)
        kappa = _bracket(shooter)
        kappa, pert, res, its = _newton(shooter, kappa, mp.mpf(0), mp.mpf(S_MATCH))
        # Verify sigma as well: it follows from the first integral.
        _, right, left = _residual(shooter, kappa, pert, mp.mpf(S_MATCH))
        sig_gap = abs(to_mpf(right.state[0] - left.state[0]))
        if sig_gap > mp.mpf(10) ** -10 or res > mp.mpf(10) ** -20:
            raise NumericalError(
                f"connection problem for alpha = {alpha_key} did not converge "
                f"(residual {mp.nstr(res, 5)}, sigma gap {mp.nstr(sig_gap, 5)})"
            )
        return ConnectionResult(+kappa, +pert, +max(res, sig_gap), its, mp.mpf(S_MATCH), mp.mpf(S_LEFT))


def connection_coefficient(alpha, s0=DEFAULT_S0, order: int | None = None, prec: int = DEFAULT_PRECISION):
    """Mode coefficient kappa_0 of the pole-free member at the seed (s0, order)."""
    return _connection_cached(mp.nstr(mp.mpf(alpha), 60), mp.nstr(mp.mpf(s0), 30), order, prec)


def _kappa0(alpha, s0, order, prec):
    if mp.mpf(alpha) == 0:
        return mp.mpf(1)
    return connection_coefficient(alpha, s0, order, prec).kappa


def seed_at_plus_infinity(
    p: Params, s0=DEFAULT_S0, order: int | None = None, prec: int = DEFAULT_PRECISION
) -> SigmaState:
    """(sigma, sigma', sigma'') at s0 from the +inf expansion and the mode term.

    ``order=None`` selects optimal truncation.  Raises :class:`SeedError` if
    the truncation error estimate exceeds ``SEED_TARGET``.
    """
    seed = _seed(p, s0, order, prec)
    with mp.workprec(prec):
        return SigmaState(+seed.s, *(+v for v in seed.state))


def _seed(p: Params, s0, order, prec) -> SeedData:
    s0 = mp.mpf(s0)
    if s0 <= 0:
        raise ValidationError("s0 must be positive")
    with mp.workprec(prec + GUARD_BITS):
        probe = right_seed(p.alpha, s0, 0, order)
        if probe.error > SEED_TARGET:
            suggestion = _suggest_s0(p.alpha, order, prec)
            raise SeedError(
                f"series truncation error {mp.nstr(probe.error, 3)} at s0 = {mp.nstr(s0, 6)} exceeds "
                f"{SEED_TARGET:g}; try s0 >= {suggestion:g}",
                suggested_s0=suggestion,
            )
        kappa0 = _kappa0(p.alpha, s0, order, prec)
        return right_seed(p.alpha, s0, kappa0 - p.omega, order)


def _suggest_s0(alpha, order, prec):
    s = 4.0
    with mp.workprec(prec + GUARD_BITS):
        while s < 200:
            if right_seed(alpha, s, 0, order).error <= SEED_TARGET:
                return s
            s += 1.0
    return s


def _settings(tol, prec):
    return TaylorSettings.for_tolerance(tol, prec + GUARD_BITS)


def integrate(
    p: Params,
    s0=DEFAULT_S0,
    s_end=-8,
    tol: float = DEFAULT_TOL,
    order: int | None = None,
    prec: int = DEFAULT_PRECISION,
) -> Trajectory:
    """Trajectory of H(s; 2 alpha, omega) on [s_end, s0]."""
    from .fields import locate_poles_in

    s0 = mp.mpf(s0)
    s_end = mp.mpf(s_end)
    if not s_end < s0:
        raise ValidationError("s_end must be smaller than s0")
    if tol <= 0:
        raise ValidationError("tol must be positive")
    internal = prec + GUARD_BITS
    drift_limit = mpfr(10 * tol)
    with mp.workprec(internal), _ctx(internal):
        if p.omega == 0:
            traj = _integrate_pole_free(p, s0, s_end, tol, order, prec, drift_limit)
        else:
            seed = _seed(p, s0, order, prec)
            kappa0 = _kappa0(p.alpha, s0, order, prec)
            _, local_order, local, floor = _shot_settings(prec)
            settings = _settings(tol, prec)
            res = _weighted_march(
                s0,
                seed.state,
                [(1, seed.w)],
                s_end,
                max(settings.order, local_order),
                min(mp.mpf(settings.local_tol), local),
                floor,
                alpha=p.alpha,
                drift_limit=drift_limit,
            )
            meta = SeedMeta(s0, seed.order, seed.error, kappa0, kappa0 - p.omega)
            traj = Trajectory(
                p, meta, [TaylorSegment(res.steps)], prec, internal, tol, max_drift=to_mpf(res.max_drift)
            )
        traj.poles, traj.removable = locate_poles_in(traj)
    return traj


def _integrate_pole_free(p, s0, s_end, tol, order, prec, drift_limit):
    internal = prec + GUARD_BITS
    conn = connection_coefficient(p.alpha, s0, order, prec)
    kappa = conn.kappa
    shooter = _Shooter(p.alpha, s0, order, prec)
    seed = right_seed(p.alpha, s0, kappa, order)
    s_match = max(mp.mpf(S_MATCH), s_end)
    right = shooter.right(kappa, s_match)
    if not right.completed:
        raise IntegrationError("right shot failed")
    segments = [TaylorSegment(right.steps)]
    match_residual = None
    if s_end < s_match:
        s_left = mp.mpf(S_LEFT)
        left = shooter.left(conn.perturbation, s_match)
        if not left.completed:
            raise IntegrationError("left shot failed")
        y_right = right.ys[0][0]
        y_left = left.ys[0][0]
        segments.append(TaylorSegment(left.steps, y_scale=y_right / y_left))
        match_residual = max(abs(to_mpf(right.state[i] - left.state[i])) for i in range(3))
        if s_end < s_left:
            segments.append(SeriesSegment(p.alpha, s_end, s_left, internal))
        # Trim the left segment's unused part below s_end.
        if s_end > s_left:
            segments[1] = _trimmed(segments[1], s_end)
    meta = SeedMeta(
        s0, seed.order, seed.error, kappa, kappa - p.omega,
        s_left=conn.s_left,
        s_match=s_match,
        match_residual=match_residual,
    )
    traj = Trajectory(p, meta, segments, prec, internal, tol)
    # The shots do not monitor the first integral; measure it on the mesh.
    drift = max(
        abs(to_mpf(first_integral(st.s, st.eval_sigma(st.s, 3), to_mpfr(p.alpha))))
        for seg in segments
        if isinstance(seg, TaylorSegment)
        for st in seg.steps
    )
    traj.max_drift = drift
    if drift > drift_limit:
        raise IntegrationError(f"first integral drifted to {float(drift):.3e}")
    return traj


def _trimmed(segment: TaylorSegment, s_end):
    s_end = to_mpfr(s_end)
    keep = [st for st in segment.steps if max(st.s, st.s + st.h) > s_end]
    seg = TaylorSegment(keep, segment.y_scale)
    seg.lo = max(seg.lo, s_end)
    return seg


_SOLVE_CACHE: dict = {}


def solve(p: Params, s_end=-8, tol: float = DEFAULT_TOL, s0=DEFAULT_S0, order=None, prec=DEFAULT_PRECISION):
    """Cached :func:`integrate`; reuses a trajectory that already reaches ``s_end``."""
    key = (p.key(), float(tol), mp.nstr(mp.mpf(s0), 20), order, prec)
    traj = _SOLVE_CACHE.get(key)
    if traj is not None and traj.s_min <= s_end:
        return traj
    traj = integrate(p, s0, s_end, tol, order, prec)
    _SOLVE_CACHE[key] = traj
    return traj
