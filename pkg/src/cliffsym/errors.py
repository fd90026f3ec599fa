"""Exception hierarchy.

Every error raised on bad input derives from :class:`GeometryError`, which is
itself a ``ValueError`` so callers that only care about "bad argument" can
catch that.
"""


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class DimensionError(GeometryError):
    pass


class NotOrthogonal(GeometryError):
    pass


class DeterminantMinusOne(GeometryError):
    """Orthogonal matrix with determinant -1, i.e. a reflection."""


class PoleProjection(GeometryError):
    """Point at (or numerically at) the projection pole."""


class NotOnSphere(GeometryError):
    pass


class DegenerateIntersection(GeometryError):
    pass


class GreatCircle(GeometryError):
    """A great circle has no cone point."""


class CenterInversion(GeometryError):
    """Inverting the center of a sphere would send it to infinity."""


class NotGreatSphere(GeometryError):
    pass


class NotOnLine(GeometryError):
    pass


class CenterInForbiddenSegment(GeometryError):
    pass


class NotBlockForm(GeometryError):
    pass


class DecompositionError(RuntimeError):
    """Internal consistency check failed; indicates a bug, not bad input."""
