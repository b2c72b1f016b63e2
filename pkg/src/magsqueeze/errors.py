"""Exception types shared across the package.

The CLI maps these onto distinct process exit codes, so library code
should raise the most specific type that applies.
"""

from __future__ import annotations


class MagsqueezeError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(MagsqueezeError, ValueError):
    """An argument violates a documented precondition."""


class InvalidStateError(MagsqueezeError, ValueError):
    """A state object is malformed or unphysical for the requested operation."""


class ConfigError(MagsqueezeError, ValueError):
    """A run configuration is missing keys, has unknown keys, or bad values."""


class NoSteadyStateError(MagsqueezeError, RuntimeError):
    """The drift matrix is not strictly stable, so no steady state exists."""


class ParametricResonanceError(MagsqueezeError, RuntimeError):
    """The steady amplitude diverges (drive denominator at or past resonance)."""


class NoMeasuresError(MagsqueezeError, RuntimeError):
    """Neither phase setting of a directional comparison admits a steady state."""


class NumericalError(MagsqueezeError, RuntimeError):
    """A numerical routine produced a result outside its accuracy contract."""

    def __init__(self, message: str, residual: float | None = None) -> None:
        super().__init__(message)
        self.residual = residual
