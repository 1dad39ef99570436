"""Exception hierarchy shared by every module of the package."""


class CoolingError(Exception):
    """Base class for all errors raised by sideband_cooling."""


class ParameterError(CoolingError, ValueError):
    """Invalid physical parameters or configuration."""


class NonPositiveRate(ParameterError):
    pass


class OutOfRange(ParameterError):
    pass


class ConfigError(ParameterError):
    """Malformed configuration file or unknown key."""

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)


class NumericalError(CoolingError, ArithmeticError):
    """A computation could not be carried out for the given inputs."""


class DivisionByZero(NumericalError, ZeroDivisionError):
    pass


class PoleAtSideband(NumericalError):
    """Strong-confinement rates evaluated at (or next to) Delta = +-nu."""


class NoClosedForm(NumericalError):
    pass


class SingularGenerator(NumericalError):
    pass


class StepUnstable(NumericalError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class CutoffTooSmall(NumericalError):
    pass


class TruncationLeak(NumericalError):
    pass


class TraceDrift(NumericalError):
    pass


class LambDickeWarning(UserWarning):
    """eta is large enough that expansions in eta become unreliable."""
