"""Exception taxonomy used across the package.

The CLI maps these onto exit codes: usage, parse and parameter errors exit
with 2, while profiles that fail validation and windows that do not fit the
truncated model exit with 1.
"""


class MassflatError(Exception):
    """Base class for all package errors."""


class DomainError(MassflatError, ValueError):
    """A parameter is outside the mathematical domain of an operation."""


class RangeError(DomainError):
    """A radius or arclength query falls outside the model's range."""


class ProfileFormatError(MassflatError, ValueError):
    """A serialized profile does not match the schema."""


class InvalidProfileError(MassflatError, ValueError):
    """A profile failed validation and cannot back a manifold model."""


class WindowOverflowError(MassflatError, RuntimeError):
    """The requested tubular window does not fit below r_cap."""


class QuadratureError(MassflatError, RuntimeError):
    """Adaptive quadrature failed to converge on some interval."""


class CertificateError(MassflatError, RuntimeError):
    """An internal consistency assertion of a certificate failed."""
