"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the physical/mathematical domain of an operation."""


class AmbiguousDepthError(DomainError):
    """A zero-interocular rig maps every depth to zero disparity; the inverse
    is undefined for d = 0 (ambiguous) and impossible for d != 0."""


class MonotonicityError(DomainError):
    """A requested disparity transfer would not be monotone."""

    def __init__(self, message: str, offending_pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.offending_pair = offending_pair


class InfeasibleError(ValueError):
    """No shooting parameters satisfy the request; names the binding check."""

    def __init__(self, message: str, binding: str):
        super().__init__(message)
        self.binding = binding


class IngestError(ValueError):
    """A project document failed schema validation or an invariant check."""
