"""Exception hierarchy shared across the package."""


class DickeError(Exception):
    """Base class for all model-specific errors."""


class DomainError(DickeError):
    """A state or request lies outside the model's domain of validity."""


class SingularityError(DomainError):
    """The atomic coordinates are too close to the disk boundary, where the
    flow denominators diverge."""


class NoRealRootError(DomainError):
    """The requested energy shell does not intersect the chosen atomic slice."""


class WellNotPresentError(DomainError):
    """The requested energy well does not exist at these parameters."""


class ConvergenceError(DickeError):
    """A numerical procedure failed to converge to its tolerance."""
