"""Exception types shared across the package."""


class NeumannOptError(Exception):
    """Base class for all package-specific errors."""


class InvalidShape(NeumannOptError):
    """Input data does not describe a valid convex body."""


class DegenerateShape(NeumannOptError):
    """A construction produced an empty or lower-dimensional region."""


class CollapsedShape(NeumannOptError):
    """The body is thinner than the collapse threshold and the caller
    did not opt in to thin-domain handling."""


class DegenerateMesh(NeumannOptError):
    """Mesh generation produced unusable elements."""


class DegenerateMass(DegenerateMesh):
    """Assembled mass matrix is singular (zero-area elements)."""


class SolverFailure(NeumannOptError):
    """The sparse eigensolver failed to converge or returned residuals
    above the accepted tolerance."""


class SolverDivergence(SolverFailure):
    """An iterative procedure moved away from any feasible optimum."""


class NotContained(NeumannOptError):
    """An inclusion between two bodies that an operation requires does
    not hold."""


class NoFeasibleStart(NeumannOptError):
    """No starting point satisfying the linear constraints was found."""


class UnsupportedParameter(NeumannOptError):
    """A parameter is outside the supported range."""
