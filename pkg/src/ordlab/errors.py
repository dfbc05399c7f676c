"""Exception hierarchy shared by all ordlab modules."""


class OrdlabError(Exception):
    """Base class for every error raised by ordlab."""


class DomainError(OrdlabError, ValueError):
    """An argument lies outside the domain of the operation."""


class TermSyntaxError(DomainError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class OutOfRangeError(OrdlabError):
    """A requested stage or rank is beyond what is supported (above omega)."""


class BudgetError(OrdlabError):
    """A bounded search ran out of budget; ``partial`` holds what was found."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class UnsupportedPresentation(OrdlabError):
    pass


class IncompleteWitness(OrdlabError):
    """A witness is undefined on a point it was asked to map."""


class WitnessInvalid(OrdlabError):
    pass


class ViolationError(OrdlabError):
    """A claimed embedding fails to preserve order or leaves its target."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class InternalConsistencyError(OrdlabError, AssertionError):
    """Two independent computations disagreed; this indicates a bug."""
