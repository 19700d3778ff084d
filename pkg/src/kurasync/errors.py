"""Exception hierarchy shared across the toolkit.

The CLI maps these onto process exit codes: configuration problems exit
with 2, numerical failures with 3.
"""

from __future__ import annotations


class KurasyncError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(KurasyncError):
    """Invalid configuration: bad schema, bad field value, bad file."""


class NumericalFailure(KurasyncError):
    """A numerical procedure did not produce a usable result."""

    def __init__(self, message: str, *, step: int | None = None, time: float | None = None):
        super().__init__(message)
        self.step = step
        self.time = time


class BracketError(NumericalFailure):
    """Root bracketing failed; carries the residuals at both bracket ends."""

    def __init__(self, message: str, *, lo: float, hi: float, residual_lo: float, residual_hi: float):
        super().__init__(message)
        self.lo = lo
        self.hi = hi
        self.residual_lo = residual_lo
        self.residual_hi = residual_hi


class EquilibriumNotFound(NumericalFailure):
    """Neither Newton iteration nor simulation located a phase-locked state."""

    def __init__(self, message: str, *, residual: float):
        super().__init__(message)
        self.residual = residual


class NoSynchronizationGuarantee(KurasyncError):
    """Coupling does not exceed the critical value; no envelope exists."""
