"""Exception hierarchy shared by all curvelink modules."""


class CurvelinkError(ValueError):
    """Base class for every error raised on bad input or bad geometry."""


class DimensionError(CurvelinkError):
    pass


class SingularityError(CurvelinkError):
    """Coincident or antipodal points where a formula has no value."""


class DomainError(CurvelinkError):
    """Argument outside the domain of a kernel or operator."""


class PreconditionError(CurvelinkError):
    """A documented precondition (disjointness, orthonormality, ...) failed."""


class DegenerateProjectionError(CurvelinkError):
    """No generic projection direction was found for the crossing oracle."""
