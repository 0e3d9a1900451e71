"""Exception hierarchy shared by every module of the package."""


class OrliczError(Exception):
    """Base class for all errors raised by :mod:`orlicz`."""


class DomainError(OrliczError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConstructionError(OrliczError, ValueError):
    """A descriptor or step function failed validation."""


class PreconditionError(OrliczError, ValueError):
    """The inputs do not satisfy the hypotheses the operation relies on."""


class NotInSpaceError(OrliczError):
    """The modular of the function is infinite for every scaling."""


class DegenerateInputError(OrliczError, ValueError):
    """The question asked has no meaningful answer for this input."""
