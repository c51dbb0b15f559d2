"""Exception hierarchy shared by every module.

The CLI maps these onto process exit codes, so each class corresponds to a
distinct failure category rather than a distinct call site.
"""


class MagicMinorsError(Exception):
    """Base class for all package errors."""


class DimensionError(MagicMinorsError, ValueError):
    """Matrix shape does not satisfy an operation's requirements."""


class DomainError(MagicMinorsError, ValueError):
    """A scalar argument (Rényi index, power, size) is outside its domain."""


class SpecError(MagicMinorsError, ValueError):
    """A model specification violates its divisibility or parity constraints."""


class CapacityError(MagicMinorsError, RuntimeError):
    """An exhaustive enumeration would exceed the configured term budget."""


class ModelError(MagicMinorsError, RuntimeError):
    """A built matrix fails a physical consistency check such as purity."""


class SingularSymbolError(ModelError):
    """A momentum grid point lands on a zero of the dispersion polynomial."""


class FitError(MagicMinorsError, ValueError):
    """The scaling design matrix is rank deficient or too small."""
