"""Exception types raised across the package."""


class LatticeqError(ValueError):
    """Base class for input errors."""


class DomainError(LatticeqError):
    """An argument lies outside the domain of the operation."""


class InvalidQuadError(LatticeqError):
    """Four points do not form a convex quadrilateral."""


class ValidationError(LatticeqError):
    """A profile function violates a required property."""

    def __init__(self, prop, worst_point, message):
        self.prop = prop
        self.worst_point = worst_point
        super().__init__(message)
