"""Exception hierarchy shared by the numerical modules and the CLI."""


class RobinDiscError(Exception):
    """Base class for every error raised by this package."""


class NumericFailure(RobinDiscError):
    """A numerical procedure did not produce a trustworthy answer.

    The CLI maps every subclass to exit code 3.
    """


class PoleParameter(NumericFailure, ValueError):
    pass


class NoConvergence(NumericFailure):
    pass


class UnsupportedBranch(NumericFailure, ValueError):
    pass


class BracketFailure(NumericFailure):
    pass


class CertificationFailure(NumericFailure):
    def __init__(self, message, root=None, fd_value=None, count=None):
        super().__init__(message)
        self.root = root
        self.fd_value = fd_value
        self.count = count


class PivotBreakdown(NumericFailure):
    pass


class ZeroVector(NumericFailure, ValueError):
    pass


class QuadratureUnderResolved(NumericFailure):
    pass


class ConfigError(RobinDiscError):
    """Problem with a Little-Parks config file (CLI exit code 4)."""


class ParseError(ConfigError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MissingKey(ConfigError):
    pass


class UnknownKey(ConfigError):
    pass


class MissingPhysicalBlock(ConfigError):
    pass
