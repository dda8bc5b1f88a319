"""Initial data for the sigma equation from the expansions at +/- infinity."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from . import expansions as ex

__all__ = ["SeedData", "right_seed", "left_seed", "project_sigma", "w_from_sigma"]


@dataclass(frozen=True)
class SeedData:
    """Seed state with bookkeeping.

    ``state`` is (sigma, sigma', sigma''), ``w`` the Riccati variable at the
    seed, ``order`` the number of series terms kept and ``error`` the
    magnitude of the first omitted term.
    """

    s: object
    state: tuple
    w: object
    order: int
    error: object


def project_sigma(s, d1, d2, alpha):
    """sigma fixed by the first integral from (sigma', sigma'')."""
    return (4 * alpha**2 - d2**2 - 4 * d1**3 + 4 * s * d1**2) / (4 * d1)


def w_from_sigma(d1, d2, alpha):
    """w = (sigma'' + 2 alpha) / (2 sigma')."""
    return (d2 + 2 * alpha) / (2 * d1)


def right_seed(alpha, s0, mode_coeff, order: int | None = None) -> SeedData:
    """State at s0 > 0: power series plus ``mode_coeff`` times the unit mode.

    ``mode_coeff`` multiplies C_alpha/2 * f(s), f the exponentially small
    solution of the linearised equation (see :mod:`.expansions`).  For
    alpha != 0, sigma is re-projected onto the first integral so the seed is
    exactly on the constraint surface.
    """
    alpha = mp.mpf(alpha)
    s = mp.mpf(s0)
    series = ex.plus_sigma(alpha, s, order)
    mode = ex.mode_function(alpha, s)
    amp = mp.mpf(mode_coeff) * ex.mode_amplitude_unit(alpha)
    state = [series.values[d] + amp * mode.values[d] for d in range(3)]
    if alpha != 0:
        state[0] = project_sigma(s, state[1], state[2], alpha)
    if state[1] != 0:
        w = w_from_sigma(state[1], state[2], alpha)
    else:
        # sigma vanishes identically (alpha = 0, no mode): Airy-type w.
        w = ex.plus_w(alpha, s).values[0]
    return SeedData(s, tuple(state), w, series.terms, series.error)


def left_seed(alpha, s_left, perturbation=0, order: int | None = None) -> SeedData:
    """State at s_left < 0 for the pole-free member, omega = 0.

    ``perturbation`` adds perturbation * exp(-(2 sqrt 2/3)|s|^(3/2)) to
    sigma' (the size of the recessive mode there); sigma is then projected.
    """
    alpha = mp.mpf(alpha)
    s = mp.mpf(s_left)
    series = ex.minus_sigma(alpha, s, order)
    d1 = series.values[1] + mp.mpf(perturbation) * mp.exp(-2 * mp.sqrt(2) / 3 * abs(s) ** 1.5)
    d2 = series.values[2]
    sig = project_sigma(s, d1, d2, alpha)
    return SeedData(s, (sig, d1, d2), w_from_sigma(d1, d2, alpha), series.terms, series.error)
