"""Exceptions raised by stablehit."""


class StableHitError(Exception):
    """Base class for all library errors."""


class DomainError(StableHitError, ValueError):
    """Argument outside the domain of a law or function."""


class StripError(DomainError):
    """Mellin exponent outside the open strip of finite moments."""


class SeriesConvergenceError(StableHitError, ArithmeticError):
    """A series hit its term budget before the truncation criterion."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class QuadratureError(StableHitError, ArithmeticError):
    """Adaptive quadrature could not reach the requested tolerance."""


class UnsupportedAsymptoticError(StableHitError, KeyError):
    """No leading asymptotic is available for this (law, end, derivative)."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""
