"""Exception hierarchy shared by all modules."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class UndecidableError(ArithmeticError):
    """A certified comparison could not be settled within the refinement budget."""


class ReducibleError(PreconditionError):
    """Raised when an irreducible polynomial is required; carries the factor found."""

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class WindowTooSmall(PreconditionError):
    pass


class BranchingUnavailable(PreconditionError):
    pass


class InvalidPath(PreconditionError):
    pass
