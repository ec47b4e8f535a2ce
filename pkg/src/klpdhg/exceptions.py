"""Exception hierarchy shared by the solvers, oracle and CLI."""


class KLPDHGError(Exception):
    """Base class for every error raised by this package."""


class ContractError(KLPDHGError, ValueError):
    """Shapes or types do not match what an operation expects."""


class DomainError(KLPDHGError, ValueError):
    """A point lies outside the domain of an entropy function."""


class ParameterError(KLPDHGError, ValueError):
    """A tuning or step-size parameter is out of range."""


class DataError(KLPDHGError, ValueError):
    """Input data is empty, non-finite or carries non-binary labels."""


class ParseError(DataError):
    """A data file line could not be parsed."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class UnsupportedPenaltyError(KLPDHGError, TypeError):
    """The penalty does not provide an exact proximal map."""


class OracleFailure(KLPDHGError, RuntimeError):
    """The reference solver hit its iteration cap before reaching tolerance."""


class EmptyPathError(KLPDHGError, ValueError):
    """The response carries no signal at zero, so no path can be built."""
