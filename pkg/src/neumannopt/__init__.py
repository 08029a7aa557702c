"""Shape optimization of Neumann Laplacian eigenvalues over planar
convex bodies.

The package parametrizes convex bodies by support functions (Fourier or
piecewise-affine), enforces convexity and inclusion through linear
inequalities, evaluates eigenvalues with a P1 finite-element solver,
and provides optimizers for the interior problem (minimize mu_k inside
a convex box) and the exterior problem (maximize mu_k over convex
bodies containing an obstacle), together with eigenvalue bounds and an
alternating interior/exterior scheme.
"""

from .errors import (
    CollapsedShape,
    DegenerateMesh,
    DegenerateShape,
    InvalidShape,
    NeumannOptError,
    NoFeasibleStart,
    NotContained,
    SolverFailure,
    UnsupportedParameter,
)
from .fem import Spectrum, mu_k, solve_spectrum, spectrum_of
from .geometry import ConvexPolygon, hausdorff_distance
from .mesh import TriangleMesh, refine, triangulate
from .reference import (
    bessel_deriv_zero,
    bessel_zero,
    disk_neumann_spectrum,
    rectangle_neumann_spectrum,
    square_neumann_spectrum,
)
from .support import (
    EPS_WIDTH,
    ConstraintSystem,
    HullShape,
    Parametrization,
    SupportFunction,
    assemble_constraints,
    area_of,
    contains,
    diameter_of,
    hausdorff,
    min_width_of,
    perp_width_of,
    to_polygon,
    width_of,
)

__version__ = "0.1.0"

__all__ = [
    "CollapsedShape",
    "ConstraintSystem",
    "ConvexPolygon",
    "DegenerateMesh",
    "DegenerateShape",
    "EPS_WIDTH",
    "HullShape",
    "InvalidShape",
    "NeumannOptError",
    "NoFeasibleStart",
    "NotContained",
    "Parametrization",
    "SolverFailure",
    "Spectrum",
    "SupportFunction",
    "TriangleMesh",
    "UnsupportedParameter",
    "assemble_constraints",
    "area_of",
    "bessel_deriv_zero",
    "bessel_zero",
    "contains",
    "diameter_of",
    "disk_neumann_spectrum",
    "hausdorff",
    "hausdorff_distance",
    "min_width_of",
    "mu_k",
    "perp_width_of",
    "rectangle_neumann_spectrum",
    "refine",
    "solve_spectrum",
    "spectrum_of",
    "square_neumann_spectrum",
    "to_polygon",
    "triangulate",
    "width_of",
    "mu_k",
]
