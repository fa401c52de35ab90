"""Typed errors raised by the toolkit.

Every error carries a stable ``code`` string that the command-line layer
copies into its machine-readable error payload.
"""


class HardyCknError(Exception):
    """Base class for all domain errors."""

    code = "error"


class OutOfRange(HardyCknError, ValueError):
    code = "out_of_range"


class DiscriminantNegative(OutOfRange):
    code = "discriminant_negative"


class DegenerateIndicial(OutOfRange):
    code = "degenerate_indicial"


class NonFinite(HardyCknError, ValueError):
    code = "non_finite"


class ZeroDenominator(HardyCknError, ZeroDivisionError):
    code = "zero_denominator"


class NonPositive(HardyCknError, ValueError):
    code = "non_positive"


class NotAdmissibleWeight(HardyCknError, ValueError):
    code = "not_admissible_weight"


class IntegrationFailure(HardyCknError, RuntimeError):
    code = "integration_failure"


class FitUnstable(HardyCknError, RuntimeError):
    code = "fit_unstable"


class BracketFailure(HardyCknError, RuntimeError):
    code = "bracket_failure"


class MissingInput(HardyCknError):
    code = "missing_input"


class TailWarning(UserWarning):
    """A truncated integral still carries a non-negligible tail."""
