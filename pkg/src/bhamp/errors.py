"""Exception types shared across the package.

Validation-style failures (bad inputs, violated preconditions) derive from
``ValueError`` so they map onto the CLI's exit code 2; numeric failures
(integration breakdown, non-finite results) derive from ``RuntimeError``
and map onto exit code 3.
"""


class DomainError(ValueError):
    """An input lies outside the physical/mathematical domain of an operation."""


class StabilityError(DomainError):
    """Mirror orbit radius violates the stable-orbit requirement r0 > 3."""


class SupportError(DomainError):
    """A mode was evaluated where its step-function support vanishes."""


class ConfigError(ValueError):
    """A scenario configuration failed validation."""


class NumericError(RuntimeError):
    """A numeric routine produced a non-finite or untrustworthy result."""


class IntegrationError(NumericError):
    """An ODE integration failed to reach its target.

    Carries the last accepted sample so callers can diagnose where the
    integrator gave up.
    """

    def __init__(self, message, last_sample=None):
        super().__init__(message)
        self.last_sample = last_sample
