"""Dense-output trajectories of the sigma equation."""

from __future__ import annotations

import bisect
import csv
import io
import json
import math
from dataclasses import dataclass, field

import gmpy2
import mpmath as mp

from ..errors import DomainError, PoleError
from . import expansions as ex
from .params import Params
from .taylor import TaylorStep, to_mpf, to_mpfr

__all__ = ["SigmaState", "Pole", "SeedMeta", "Trajectory", "TaylorSegment", "SeriesSegment"]


@dataclass(frozen=True)
class SigmaState:
    """(sigma, sigma', sigma'') = (H, -u, -u') at ``s``."""

    s: object
    sigma: object
    dsigma: object
    d2sigma: object

    def first_integral_residual(self, alpha):
        s, sig, d1, d2 = self.s, self.sigma, self.dsigma, self.d2sigma
        return d2**2 + 4 * d1 * (d1**2 - s * d1 + sig) - 4 * mp.mpf(alpha) ** 2


@dataclass(frozen=True)
class Pole:
    """Simple pole of w at ``location`` with residue +1 or -1."""

    location: object
    residue: int


@dataclass(frozen=True)
class SeedMeta:
    """Provenance of a trajectory.

    ``mode_coeff`` is the coefficient (kappa - omega) of the unit
    exponentially small mode added at ``s0``; ``kappa`` the connection value
    for the omega = 0 member.  ``s_left``/``s_match`` and ``match_residual``
    are set for the two-sided (omega = 0) construction.
    """

    s0: object
    order: int
    error: object
    kappa: object
    mode_coeff: object
    s_left: object = None
    s_match: object = None
    match_residual: object = None


class TaylorSegment:
    """Contiguous run of Taylor steps, stored in increasing s.

    ``y_scale`` rescales the stored y polynomials so y is continuous across
    segments; only the ratio y'/y = w is meaningful.
    """

    def __init__(self, steps: list[TaylorStep], y_scale=1):
        # Normalise every step to be described by its left end for bisect.
        self.steps = sorted(steps, key=lambda st: min(st.s, st.s + st.h))
        self.left = [min(st.s, st.s + st.h) for st in self.steps]
        self.lo = self.left[0]
        self.hi = max(self.steps[-1].s, self.steps[-1].s + self.steps[-1].h)
        self.y_scale = to_mpfr(y_scale)

    def _step(self, t):
        i = bisect.bisect_right(self.left, t) - 1
        return self.steps[max(0, min(i, len(self.steps) - 1))]

    def sigma(self, t, derivs: int = 3):
        return self._step(t).eval_sigma(t, derivs)

    def y(self, t):
        st = self._step(t)
        if not st.ys:
            return None
        y, yp = st.eval_y(t)
        return y * self.y_scale, yp * self.y_scale

    def grid(self):
        pts = [self.lo] + [max(st.s, st.s + st.h) for st in self.steps]
        return pts


class SeriesSegment:
    """Region s <= hi < 0 served by the optimally truncated -inf expansion."""

    def __init__(self, alpha, lo, hi, prec: int):
        self.alpha = mp.mpf(alpha)
        self.lo = to_mpfr(lo)
        self.hi = to_mpfr(hi)
        self.prec = prec

    def sigma(self, t, derivs: int = 3):
        with mp.workprec(self.prec):
            s = to_mpf(t)
            sv = ex.minus_sigma(self.alpha, s)
            vals = list(sv.values)
            if derivs > 3:
                d1 = vals[1]
                vals.append(4 * s * d1 - 6 * d1**2 - 2 * vals[0])
            return [to_mpfr(v) for v in vals[:derivs]]

    def y(self, t):
        return None

    def grid(self, spacing: float = 0.5):
        lo, hi = float(self.lo), float(self.hi)
        n = max(1, int(math.ceil((hi - lo) / spacing)))
        return [self.lo + (self.hi - self.lo) * k / n for k in range(n + 1)]


@dataclass
class Trajectory:
    """Solution record over [s_min, s_max] with dense output.

    Values are returned as mpmath numbers at the trajectory's precision.
    """

    params: Params
    seed_meta: SeedMeta
    segments: list
    prec: int
    internal_prec: int
    tol: float
    poles: list = field(default_factory=list)
    removable: list = field(default_factory=list)
    max_drift: object = 0

    @property
    def s_min(self):
        return to_mpf(min(seg.lo for seg in self.segments))

    @property
    def s_max(self):
        return to_mpf(max(seg.hi for seg in self.segments))

    def _segment(self, t):
        for seg in self.segments:
            if seg.lo <= t <= seg.hi:
                return seg
        raise DomainError(f"s = {float(t):.6g} outside trajectory [{float(self.s_min):.6g}, {float(self.s_max):.6g}]")

    def _ctx(self):
        return gmpy2.context(gmpy2.get_context(), precision=self.internal_prec)

    def sigma_derivs(self, s, derivs: int = 3):
        """[sigma, sigma', ...] at s (up to 4 entries)."""
        with self._ctx(), mp.workprec(self.prec):
            t = to_mpfr(mp.mpf(s))
            vals = self._segment(t).sigma(t, derivs)
            return [+to_mpf(v) for v in vals]

    def state_at(self, s) -> SigmaState:
        sig, d1, d2 = self.sigma_derivs(s, 3)
        return SigmaState(mp.mpf(s), sig, d1, d2)

    def y_at(self, s):
        """(y, y') with w = y'/y, or None where y is not carried."""
        with self._ctx(), mp.workprec(self.prec):
            t = to_mpfr(mp.mpf(s))
            pair = self._segment(t).y(t)
            if pair is None:
                return None
            return +to_mpf(pair[0]), +to_mpf(pair[1])

    def w_at(self, s):
        """Riccati variable w at s (pole-free representation y'/y when available)."""
        pair = self.y_at(s)
        with mp.workprec(self.prec):
            if pair is not None:
                y, yp = pair
                if y == 0:
                    raise PoleError(f"w has a pole at s = {mp.nstr(s, 15)}", self.pole_near(s))
                return yp / y
            sig, d1, d2 = self.sigma_derivs(s, 3)
            alpha = self.params.alpha
            if d1 == 0:
                raise PoleError(f"sigma' vanishes at s = {mp.nstr(s, 15)}", self.pole_near(s))
            return (d2 + 2 * alpha) / (2 * d1)

    def pole_near(self, s, radius=1e-6):
        for pole in self.poles:
            if abs(pole.location - s) <= radius:
                return pole
        return None

    def grid(self):
        pts = set()
        for seg in self.segments:
            pts.update(seg.grid())
        return sorted(pts)

    @property
    def states(self) -> tuple:
        """Ordered states at the dense-output nodes."""
        return tuple(self.state_at(to_mpf(t)) for t in self.grid())

    # -- export ---------------------------------------------------------------

    def table(self, points=None):
        """Rows (s, sigma, dsigma, d2sigma, u, w or nan, H) as mpmath numbers."""
        pts = [to_mpf(t) for t in self.grid()] if points is None else [mp.mpf(t) for t in points]
        rows = []
        for s in pts:
            st = self.state_at(s)
            try:
                w = self.w_at(s)
            except PoleError:
                w = mp.nan
            rows.append((s, st.sigma, st.dsigma, st.d2sigma, -st.dsigma, w, st.sigma))
        return rows

    def to_csv(self, points=None, digits: int | None = None) -> str:
        digits = digits or max(15, int(self.prec * math.log10(2)))
        header = ["s", "sigma", "dsigma", "d2sigma", "u", "w_or_NaN", "H", "sigma_rounded"]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in self.table(points):
            writer.writerow([_fmt(v, digits) for v in row] + [_fmt(row[1], 12)])
        return buf.getvalue()

    def to_json(self, points=None, digits: int | None = None) -> str:
        digits = digits or max(15, int(self.prec * math.log10(2)))
        rows = [[_fmt(v, digits) for v in row] for row in self.table(points)]
        payload = {
            "alpha": _fmt(self.params.alpha, digits),
            "omega": _fmt(self.params.omega, digits),
            "precision_bits": self.prec,
            "tol": repr(self.tol),
            "seed": {
                "s0": _fmt(self.seed_meta.s0, digits),
                "order": self.seed_meta.order,
                "error": _fmt(self.seed_meta.error, 6),
                "kappa": _fmt(self.seed_meta.kappa, digits),
            },
            "columns": ["s", "sigma", "dsigma", "d2sigma", "u", "w_or_NaN", "H"],
            "rows": rows,
            "poles": [{"location": _fmt(p.location, digits), "residue": p.residue} for p in self.poles],
            "removable_zeros": [_fmt(r, digits) for r in self.removable],
        }
        return json.dumps(payload, indent=1, sort_keys=True)


def _fmt(x, digits: int) -> str:
    if x is None:
        return "null"
    x = mp.mpf(x) if not isinstance(x, mp.mpf) else x
    if mp.isnan(x):
        return "NaN"
    return mp.nstr(x, digits, min_fixed=-4, max_fixed=8, strip_zeros=False) if x != 0 else "0"
