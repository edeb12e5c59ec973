"""Exception types shared across the package."""


class WarpGeoError(Exception):
    """Base class for all errors raised by this package."""


class ExprSyntaxError(WarpGeoError):
    """Malformed expression text, with the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifier(WarpGeoError):
    """Name that is neither a bound variable, a constant nor a function."""

    def __init__(self, name, offset=None):
        where = "" if offset is None else f" (at offset {offset})"
        super().__init__(f"unknown identifier {name!r}{where}")
        self.name = name
        self.offset = offset


class DomainError(WarpGeoError):
    """Evaluation left the domain of an elementary function.

    ``expression`` holds the offending subexpression when available.
    """

    def __init__(self, message, expression=None):
        super().__init__(message)
        self.expression = expression


class SingularMetric(WarpGeoError):
    """Chart metric is numerically singular (condition number too large)."""


class DegenerateImmersion(WarpGeoError):
    """Tangent vectors failed to be linearly independent at a probe point."""


class BoundaryTooClose(WarpGeoError):
    """A finite-difference stencil would leave the chart box."""


class GridTooCoarse(WarpGeoError):
    """Grid spacing too large for the requested finite-difference check."""


class QuadratureFailure(WarpGeoError):
    """Adaptive quadrature did not reach the requested tolerance."""


class SigmaZero(WarpGeoError):
    """Rotational radius function vanished where a formula divides by it."""


class MeshUnsupported(WarpGeoError):
    """Mesh export requested for an unsupported surface dimension."""


class SceneError(WarpGeoError):
    """Scene file failed validation; ``field`` names the offending entry."""

    def __init__(self, message, field=None):
        prefix = f"scene field {field!r}: " if field else ""
        super().__init__(prefix + message)
        self.field = field
