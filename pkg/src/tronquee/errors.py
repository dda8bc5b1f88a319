"""Exception hierarchy shared by all modules.

Every failure raised by the library derives from :class:`TronqueeError` so the
command line can map it onto an exit code without inspecting messages.
"""

from __future__ import annotations


class TronqueeError(Exception):
    """Base class for library errors."""


class ValidationError(TronqueeError, ValueError):
    """Input parameters violate a documented precondition."""


class DomainError(TronqueeError, ValueError):
    """A special function or evaluator was called outside its domain."""


class NumericalError(TronqueeError, ArithmeticError):
    """A numerical procedure failed to reach its accuracy target."""


class SeedError(NumericalError):
    """Asymptotic seed data cannot meet the requested truncation target."""

    def __init__(self, message: str, suggested_s0: float | None = None):
        super().__init__(message)
        self.suggested_s0 = suggested_s0


class IntegrationError(NumericalError):
    """ODE integration drifted off the first integral or stalled."""


class StiffnessError(IntegrationError):
    """Step size underflow during integration."""


class PoleError(NumericalError):
    """A field was evaluated exactly at a pole of w."""

    def __init__(self, message: str, pole=None):
        super().__init__(message)
        self.pole = pole


class ClassificationError(NumericalError):
    """A zero of the Hamiltonian derivative could not be classified."""


class ConditioningWarning(UserWarning):
    """Evaluation close to a zero or singularity of an asymptotic formula."""
