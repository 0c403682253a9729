"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for invalid geometric data."""


class NoSuchTriangle(GeometryError):
    """The prescribed triangle data admits no triangle."""


class ApexOutside(GeometryError):
    """The cone apex is not strictly enclosed by the triangle."""


class NonexistentComparisonTriangle(GeometryError):
    """No comparison triangle on a cone was found for the given data."""


class DecompositionFailed(GeometryError):
    """Splitting rays did not produce a three-triangle decomposition."""


class MeshError(GeometryError):
    """Malformed or non-manifold PL surface."""


class DomainExit(GeometryError):
    """A geodesic left the chart domain.

    ``location`` holds the parameter-plane point where the exit was detected.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class NoConvergence(GeometryError):
    """An iterative solve did not converge."""
