"""Numerical defaults and precision-dependent crossover points.

Crossovers between convergent and asymptotic representations are not fixed
numbers: each is the point where the asymptotic series' smallest term drops
below one unit in the last place at the requested precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_PRECISION = 192
DEFAULT_S0 = 12.0
DEFAULT_TOL = 1e-30


def airy_crossover(prec: int) -> float:
    """|z| above which the Airy asymptotic series reaches ``prec`` bits.

    The optimally truncated series has relative error about exp(-2|zeta|)
    with zeta = (2/3) z^(3/2).
    """
    zeta = 0.5 * prec * math.log(2.0) + 2.0
    return (1.5 * zeta) ** (2.0 / 3.0)


def kummer_crossover(prec: int) -> float:
    """|z| above which the large-argument series for psi reaches ``prec`` bits.

    The smallest term of the divergent series is about exp(-|z|).
    """
    return prec * math.log(2.0) + 4.0


@dataclass(frozen=True)
class TaylorSettings:
    """Order and local error target for the Taylor integrator."""

    order: int
    local_tol: float

    @classmethod
    def for_tolerance(cls, tol: float, prec: int) -> "TaylorSettings":
        # Local steps run well below the global tolerance; first-integral
        # derivatives grow like |s|^2 on the negative axis and errors
        # accumulate over a few thousand steps.
        floor = 2.0 ** (-prec + 24)
        local = max(min(tol * 1e-12, 1e-40), floor)
        # Cost per unit length is minimised near order = -ln(tol)/2.
        order = max(16, min(64, int(-math.log(local) / 2.0) + 2))
        return cls(order=order, local_tol=local)
