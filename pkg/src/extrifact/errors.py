"""Exception types shared across the package."""


class ExtrifactError(Exception):
    """Base class for all package errors."""


class InputError(ExtrifactError, ValueError):
    """Malformed input: bad shapes, unknown labels, schema violations."""


class CapabilityError(ExtrifactError):
    """The operation needs a realization model the presentation does not carry."""


class DomainError(ExtrifactError, ValueError):
    """A morphism is outside the domain of the operation (e.g. not an inflation)."""


class PreconditionError(ExtrifactError):
    """A documented precondition (e.g. a verified torsion pair) does not hold."""
