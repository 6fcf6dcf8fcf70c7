"""Exception types raised across the package."""


class CPBError(Exception):
    """Base class for all package errors."""


class NumericalError(CPBError):
    """Base class for failures of a numerical routine (CLI exit code 3)."""


class TargetBelowMinimum(CPBError, ValueError):
    pass


class DimensionOverflow(CPBError, ValueError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class DispersiveRegimeViolation(CPBError, ValueError):
    pass


class NegativeProduct(CPBError, ValueError):
    pass


class FitDiverged(NumericalError):
    pass


class DegenerateData(CPBError, ValueError):
    pass


class NegativeIntercept(NumericalError):
    pass


class ShapeMismatch(CPBError, ValueError):
    pass


class StepSizeTooCoarse(NumericalError):
    pass


class NotConverged(NumericalError):
    """Steady cycle not reached; ``result`` carries the last cycle with ``converged=False``."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ShuntShortCircuit(CPBError, ValueError):
    pass


class SingularNetwork(NumericalError):
    pass


class ConfigError(CPBError):
    """Base class for configuration problems (CLI exit code 2)."""


class ParseError(ConfigError):
    def __init__(self, message, line=None, field=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(f"field {field!r}")
        super().__init__(f"{', '.join(loc)}: {message}" if loc else message)
        self.line = line
        self.field = field


class ValidationError(ConfigError):
    def __init__(self, message, field=None, line=None):
        prefix = f"{field}: " if field else ""
        if line is not None:
            prefix = f"line {line}, {prefix}"
        super().__init__(prefix + message)
        self.field = field
        self.line = line


class ColumnMissing(CPBError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "column missing"
