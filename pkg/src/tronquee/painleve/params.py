"""Parameters of the tronquee family and its Stokes data."""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp

from ..errors import ValidationError

__all__ = ["Params", "stokes_triple", "stokes_constraint"]


@dataclass(frozen=True)
class Params:
    """Parameter pair (alpha, omega) with derived beta and nu.

    ``beta`` is the purely imaginary number with omega = exp(-2 pi i beta),
    i.e. beta = i ln(omega) / (2 pi); it is ``None`` when omega = 0.
    """

    alpha: float
    omega: float
    beta: complex | None = field(init=False, compare=False)
    nu: float = field(init=False, compare=False)

    def __post_init__(self):
        # Parse decimal strings exactly enough for any working precision.
        with mp.workprec(max(mp.mp.prec, 256)):
            alpha = mp.mpf(self.alpha)
            omega = mp.mpf(self.omega)
        if not mp.isfinite(alpha) or alpha <= -0.5:
            raise ValidationError(f"alpha must exceed -1/2, got {self.alpha}")
        if not mp.isfinite(omega) or omega < 0:
            raise ValidationError(f"omega must be non-negative, got {self.omega}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "omega", omega)
        with mp.workprec(max(mp.mp.prec, 256)):
            beta = None if omega == 0 else mp.mpc(0, mp.log(omega) / (2 * mp.pi))
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "nu", 2 * alpha + mp.mpf(1) / 2)

    @classmethod
    def from_beta(cls, alpha, beta_imag) -> "Params":
        """Build from Im(beta); omega = exp(2 pi Im(beta))."""
        return cls(alpha, mp.exp(2 * mp.pi * mp.mpf(beta_imag)))

    @property
    def beta_defined(self) -> bool:
        return self.beta is not None

    def key(self) -> tuple[str, str]:
        """Hashable exact identity used by caches."""
        return (mp.nstr(self.alpha, 60), mp.nstr(self.omega, 60))


def stokes_triple(p: Params):
    """(s1, s2, s3) = (-exp(-2 pi i alpha), omega, -exp(2 pi i alpha))."""
    s1 = -mp.expjpi(-2 * p.alpha)
    s3 = -mp.expjpi(2 * p.alpha)
    return s1, mp.mpc(p.omega), s3


def stokes_constraint(p: Params):
    """Residual s1 - s2 + s3 + s1 s2 s3 + 2 sin(nu pi) of the monodromy relation."""
    s1, s2, s3 = stokes_triple(p)
    return s1 - s2 + s3 + s1 * s2 * s3 + 2 * mp.sin(p.nu * mp.pi)
