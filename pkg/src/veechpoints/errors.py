"""Exception hierarchy shared by the pipeline and the CLI exit codes."""


class VeechPointsError(Exception):
    """Base class."""


class ValidationError(VeechPointsError):
    """A surface description violates an invariant."""

    def __init__(self, message: str, where=None):
        super().__init__(message if where is None else f"{message} (at {where})")
        self.where = where


class SquareTiledUnsupported(VeechPointsError):
    """The input is (or behaves like) a square-tiled surface."""


class CapExceeded(VeechPointsError):
    """A defensive iteration cap was hit."""


class NotPeriodicDirection(CapExceeded):
    """Contraction never produced a cylinder refinement in the requested direction."""


class NotVeechData(VeechPointsError):
    """Cylinder moduli in one direction are not commensurable."""


class NotInVeechGroup(VeechPointsError):
    """A matrix does not stabilize the surface."""


class MissingGenerators(VeechPointsError):
    """The orbit filter needs Veech group elements that were not supplied."""
