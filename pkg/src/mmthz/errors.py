"""Exception types shared across the package.

Each class carries the CLI exit code it maps to, so the front end can turn
any library failure into a machine-readable error object.
"""


class MmthzError(Exception):
    exit_code = 1


class DomainError(MmthzError, ValueError):
    """An argument lies outside the domain of the model."""

    exit_code = 1


class ConfigurationError(MmthzError, ValueError):
    """A scenario, table or simulation setup is inconsistent."""

    exit_code = 2


class ExtrapolationError(MmthzError, ValueError):
    """A tabulated quantity was requested outside the tabulated range."""

    exit_code = 3


class UnsupportedRegimeError(ExtrapolationError):
    pass


class NumericalError(MmthzError, ArithmeticError):
    """Quadrature or root finding failed to meet its tolerance."""

    exit_code = 3


class UndefinedHpbwError(NumericalError):
    pass
