"""Exception types shared across the package."""


class OpofarError(Exception):
    """Base class for all package-specific errors."""


class DegenerateDenominatorError(OpofarError):
    """Input/output denominator fell below the configured epsilon.

    Happens only on a critical mode at its resonance frequency in the
    limit a0 -> 1; regular below-threshold parameters never trigger it.
    """


class NoInstabilityError(OpofarError):
    """No critical rings exist for these parameters (radicand < 0 or
    non-negative total detuning)."""


class QuadratureConvergenceError(OpofarError):
    """Adaptive frequency quadrature failed to meet its tolerance
    within the panel budget."""


class DegenerateModeError(OpofarError):
    """Two-detector quantity requested at k = 0 where the +k and -k
    modes coincide."""


class ZeroDenominatorError(OpofarError):
    """Gain-optimization denominator spectrum is not positive."""


class UndefinedPolarizationError(OpofarError):
    """Polarization degree requested in a dark region (s0 below the
    masking threshold)."""


class OddMomentError(OpofarError):
    """Vacuum moment of an odd number of operators was requested."""


class MomentBudgetError(OpofarError):
    """Operator list exceeds the pairing-enumeration budget."""


class ConfigError(OpofarError):
    """Malformed or invalid run configuration."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
