"""Tronquee solutions of Painleve II through the Hamiltonian sigma-form."""

from .fields import derived_fields, locate_poles, pii_residual, q_from_w, w_prime
from .params import Params, stokes_constraint, stokes_triple
from .solver import connection_coefficient, integrate, seed_at_plus_infinity, solve
from .taylor import first_integral
from .trajectory import Pole, SeedMeta, SigmaState, Trajectory

__all__ = [
    "Params",
    "stokes_triple",
    "stokes_constraint",
    "SigmaState",
    "Trajectory",
    "Pole",
    "SeedMeta",
    "seed_at_plus_infinity",
    "connection_coefficient",
    "integrate",
    "solve",
    "derived_fields",
    "pii_residual",
    "locate_poles",
    "q_from_w",
    "w_prime",
    "first_integral",
]
