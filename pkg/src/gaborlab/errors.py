"""Exception types with CLI exit codes.

Exit code convention: 1 = invalid configuration, 2 = density violation
(no dual window exists at or above critical density), 3 = accuracy or
resource failure.
"""


class GaborlabError(Exception):
    """Base class for all library errors."""

    exit_code = 3


class ConfigError(GaborlabError):
    """Invalid user-supplied configuration (flags, files, parameters)."""

    exit_code = 1


class OrderCapError(ConfigError):
    """Hermite order above the supported stability cap."""


class DensityError(GaborlabError):
    """Lattice density at or above the critical value 1/(n+1)."""

    exit_code = 2


class AccuracyError(GaborlabError):
    """A numerical target (residual, tolerance, certificate) was not met."""

    exit_code = 3


class ResourceError(GaborlabError):
    """A configured size cap (enumeration count, Gram size) was exceeded."""

    exit_code = 3


class PoleError(AccuracyError):
    """Evaluation requested at (or within threshold of) a pole."""


class DivergenceError(AccuracyError):
    """Integral certified divergent (growth certificate theta >= 1)."""


class TruncationDomainError(AccuracyError):
    """Sampled-signal grid does not cover the effective integrand support."""
