"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class PreconditionError(ValueError):
    """Inputs violate a stated hypothesis of a geometric or combinatorial check."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ResourceLimitError(RuntimeError):
    """A configured size cap or search budget was exceeded."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class StageError(RuntimeError):
    """Wraps a failure inside one stage of the construction pipeline."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
