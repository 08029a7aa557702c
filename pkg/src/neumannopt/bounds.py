"""Eigenvalue bounds and inequality diagnostics for convex planar domains.

Everything here is a closed-form or partition-based estimate that brackets
the finite element value: diameter bounds from below (Payne-Weinberger,
Buser-type grid partitions) and above (Cheng/Kroger), the computable
constants entering the study of the inner-monotonicity ratio, and a
Poincare bound for the cusped regions left between a convex arc and its
tangent lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateShape, InvalidShape, NotContained, UnsupportedParameter
from .fem import mu_k as _fem_mu_k
from .fem import spectrum_of
from .geometry import ConvexPolygon
from .reference import bessel_deriv_zero, bessel_zero
from .support import area_of, contains, diameter_of, min_width_of, to_polygon

# relative slack granted to finite element values in pass/fail checks
TOL_FEM = 0.01


def _poly(shape) -> ConvexPolygon:
    return shape if isinstance(shape, ConvexPolygon) else to_polygon(shape)


def payne_weinberger(shape) -> float:
    """Lower bound pi^2/diam^2 for mu_1 of a convex body."""
    return math.pi**2 / diameter_of(shape) ** 2


def diameter_upper(shape, k: int) -> float:
    """Upper bound (2 j_{0,1} + (k-1) pi)^2 / diam^2 for mu_k."""
    if k < 1:
        raise UnsupportedParameter("mode index k must be at least 1")
    top = 2.0 * bessel_zero(0, 1) + (k - 1) * math.pi
    return top**2 / diameter_of(shape) ** 2


def buser_grid_lower(shape, k: int) -> float:
    """Partition lower bound for mu_k.

    Cuts the bounding box into an N x N grid with N = floor(sqrt(k)).
    Each nonempty piece is convex, so its mu_1 exceeds pi^2/diam^2, and
    splitting k across the at most N^2 <= k pieces gives
    mu_k >= pi^2 / max_piece diam^2.  Exact clipping makes this sharper
    than the generic estimate sqrt(2) diam/N for the piece diameters.
    """
    if k < 1:
        raise UnsupportedParameter("mode index k must be at least 1")
    poly = _poly(shape)
    n = math.isqrt(k)
    if n <= 1:
        return payne_weinberger(poly)
    xmin, ymin, xmax, ymax = poly.bounding_box()
    xs = np.linspace(xmin, xmax, n + 1)
    ys = np.linspace(ymin, ymax, n + 1)
    worst = 0.0
    for i in range(n):
        for j in range(n):
            try:
                piece = poly.clip_box(xs[i], ys[j], xs[i + 1], ys[j + 1])
            except DegenerateShape:
                continue
            worst = max(worst, piece.diameter())
    if worst <= 0:
        raise DegenerateShape("no grid cell meets the shape")
    return math.pi**2 / worst**2


def c_k(k: int, C: float = 6.0) -> float:
    """Computable constant C_k in the lower bound mu_k >= C_k/diam^2.

    C is the constant from the quantitative sharpening of the
    Payne-Weinberger inequality; its numerical value is around 6 and it
    stays configurable.
    """
    if k < 2:
        raise UnsupportedParameter("c_k needs k >= 2; k = 1 is payne_weinberger")
    pi2 = math.pi**2
    if k == 2:
        root = math.sqrt(1.0 + 7.0 * C / (2.0 * pi2) + C**2 / (16.0 * pi2**2))
        return pi2 / 2.0 * (1.0 + root) - C / 8.0
    if k == 3:
        root = math.sqrt(1.0 + 34.0 * C / (9.0 * pi2) + C**2 / (81.0 * pi2**2))
        return pi2 / 2.0 * (1.0 + root) - C / 18.0
    return math.isqrt(k) ** 2 * pi2 / 2.0


@dataclass(frozen=True)
class MkBounds:
    """Interval bracketing the infimum M_k of the ratio J_k.

    raw_lower keeps the unclamped constant-based value: for small k it can
    exceed the upper bound, in which case lower is clamped and the clamped
    flag is set rather than silently emitting an inconsistent interval.
    """

    lower: float
    upper: float
    raw_lower: float
    clamped: bool

    def __iter__(self):
        return iter((self.lower, self.upper))


def m_k_bounds(k: int, C: float = 6.0) -> MkBounds:
    if k < 1:
        raise UnsupportedParameter("mode index k must be at least 1")
    if k == 1:
        exact = math.pi**2 / (4.0 * bessel_zero(0, 1) ** 2)
        return MkBounds(exact, exact, exact, False)
    denom = (2.0 * bessel_zero(0, 1) + (k - 1) * math.pi) ** 2
    upper = k**2 * math.pi**2 / denom
    raw_lower = c_k(k, C) * math.pi**2 / denom
    return MkBounds(min(raw_lower, upper), upper, raw_lower, raw_lower > upper)


def existence_criterion(
    box,
    candidate,
    k: int,
    *,
    tol_fem: float = TOL_FEM,
    h_target: float | None = None,
) -> bool:
    """Whether the candidate witnesses mu_k <= k^2 pi^2 / diam^2(box).

    A True answer certifies that minimizing sequences for the interior
    problem at index k cannot all collapse to segments, since a segment
    limit would force the value k^2 pi^2 / diam^2 from thin rectangles.
    """
    if k < 2:
        raise UnsupportedParameter("existence criterion needs k >= 2")
    if not contains(box, candidate):
        raise NotContained("candidate must lie inside the box")
    threshold = k**2 * math.pi**2 / diameter_of(box) ** 2
    value = _fem_mu_k(candidate, k, h_target=h_target)
    return value <= threshold * (1.0 + tol_fem)


def k0_bound(shape) -> float:
    """8 diam / (pi w): above this index the interior minimum cannot be
    approached by collapsing shapes, w being the minimal width."""
    return 8.0 * diameter_of(shape) / (math.pi * min_width_of(shape))


def cusp_poincare_lower(a: float, b: float, c: float, L: float = 0.0) -> float:
    """mu_1 >= 1/(16 (L^2+1) max{(a+b)^2, c^2}) for the cusped region
    between a concave boundary arc over [-a, b] and its tangent lines
    meeting at height c; L is the Lipschitz constant of the arc."""
    if min(a, b, c) <= 0 or L < 0:
        raise UnsupportedParameter("cusp data needs a, b, c > 0 and L >= 0")
    return 1.0 / (16.0 * (L**2 + 1.0) * max((a + b) ** 2, c**2))


def cusp_configuration(shape, p, q):
    """Tangent-line data (a, b, c, L) behind cusp_poincare_lower.

    p is a boundary point of the convex body and q an exterior point on
    the outward normal through p.  In the frame whose y-axis is the ray
    p -> q, the boundary near p is the graph of a concave function; the
    two tangent lines from q touch it at x = -a and x = b, q sits at
    height c above p, and L is the largest slope of the arc in between.
    """
    poly = _poly(shape)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    scale = max(poly.scale, 1.0)
    if poly.contains_points(q[None, :], tol=0.0)[0]:
        raise InvalidShape("q must lie strictly outside the body")
    height = float(np.hypot(*(q - p)))
    u = (q - p) / height
    if float(p @ u) < float((poly.vertices @ u).max()) - 1e-9 * scale:
        raise InvalidShape("the segment p-q is not an outward normal at p")

    # frame: x along t, y along u, origin at p
    t = np.array([u[1], -u[0]])
    xs = (poly.vertices - p) @ t
    ys = (poly.vertices - p) @ u
    rel = np.column_stack([xs, ys - height])

    # a vertex is a tangency point when every other vertex lies on one
    # side of its line through q; ties along a common edge resolve to the
    # endpoint nearest the top so the arc stays strictly below the lines
    cross = rel[:, 0, None] * rel[None, :, 1] - rel[:, 1, None] * rel[None, :, 0]
    tol = 1e-9 * scale**2
    tangent = np.all(cross <= tol, axis=1) | np.all(cross >= -tol, axis=1)
    candidates_l = np.flatnonzero(tangent & (xs < 0))
    candidates_r = np.flatnonzero(tangent & (xs > 0))
    if len(candidates_l) == 0 or len(candidates_r) == 0:
        raise InvalidShape("tangent lines touch at p itself; move q farther out")
    i_left = candidates_l[np.argmax(ys[candidates_l])]
    i_right = candidates_r[np.argmax(ys[candidates_r])]

    a = -float(xs[i_left])
    b = float(xs[i_right])

    # the arc is the counterclockwise vertex chain from the right tangency
    # to the left one, which passes over the top of the body
    n = len(xs)
    chain = [i_right]
    i = i_right
    while i != i_left:
        i = (i + 1) % n
        chain.append(i)
        if len(chain) > n:
            raise InvalidShape("boundary chain failed to close")
    lip = 0.0
    for i0, i1 in zip(chain[:-1], chain[1:]):
        dx = xs[i1] - xs[i0]
        dy = ys[i1] - ys[i0]
        if abs(dx) <= 1e-12 * scale:
            raise InvalidShape("boundary is vertical in the tangent frame")
        if dx > 0:
            raise InvalidShape("boundary arc is not a graph over [-a, b]")
        lip = max(lip, abs(dy / dx))
    return a, b, height, lip


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: float
    rhs: float
    passed: bool

    def as_tuple(self):
        return (self.name, self.lhs, self.rhs, self.passed)


def inequality_suite(
    shape,
    k: int = 1,
    *,
    spectrum=None,
    h_target: float | None = None,
    tol_fem: float = TOL_FEM,
) -> list[InequalityCheck]:
    """Evaluate the classical inequalities against FEM values.

    Checks, each normalized to lhs <= rhs with tol_fem slack:
    Payne-Weinberger, Cheng/Kroger diameter bound at k, the area bound
    |Omega| mu_1 <= pi j'_{1,1}^2 with disk equality, the width bound
    mu_1 <= pi^2 w^2/|Omega|^2 with rectangle equality, and the grid
    partition bound at k.
    """
    if k < 1:
        raise UnsupportedParameter("mode index k must be at least 1")
    if spectrum is None:
        spectrum = spectrum_of(shape, k, h_target=h_target)
    mu1 = spectrum.mu(1)
    muk = spectrum.mu(k)
    area = area_of(shape)
    width = min_width_of(shape)
    slack = 1.0 + tol_fem
    pairs = [
        ("payne_weinberger", payne_weinberger(shape), mu1),
        ("diameter_upper", muk, diameter_upper(shape, k)),
        ("szego_weinberger", area * mu1, math.pi * bessel_deriv_zero(1, 1) ** 2),
        ("hll_width", mu1, math.pi**2 * width**2 / area**2),
        ("buser_grid", buser_grid_lower(shape, k), muk),
    ]
    return [
        InequalityCheck(name, float(lhs), float(rhs), bool(lhs <= rhs * slack))
        for name, lhs, rhs in pairs
    ]


@dataclass(frozen=True)
class BoundsReport:
    """All computable bounds for one shape and mode index."""

    shape_id: str
    k: int
    pw_lower: float
    diam_upper: float
    buser_lower: float
    c_k_lower: float
    c_used: float
    mu_fem: float | None
    inequality_checks: list[InequalityCheck]

    def as_dict(self) -> dict:
        return {
            "shape_id": self.shape_id,
            "k": self.k,
            "pw_lower": self.pw_lower,
            "diam_upper": self.diam_upper,
            "buser_lower": self.buser_lower,
            "c_k_lower": self.c_k_lower,
            "c_used": self.c_used,
            "mu_fem": self.mu_fem,
            "inequality_checks": [c.as_tuple() for c in self.inequality_checks],
        }


def bounds_report(
    shape,
    k: int,
    *,
    C: float = 6.0,
    shape_id: str = "shape",
    with_fem: bool = True,
    h_target: float | None = None,
    tol_fem: float = TOL_FEM,
) -> BoundsReport:
    if k < 1:
        raise UnsupportedParameter("mode index k must be at least 1")
    diam = diameter_of(shape)
    ck_lower = c_k(k, C) / diam**2 if k >= 2 else math.pi**2 / diam**2
    mu_fem = None
    checks: list[InequalityCheck] = []
    if with_fem:
        spectrum = spectrum_of(shape, k, h_target=h_target)
        mu_fem = spectrum.mu(k)
        checks = inequality_suite(
            shape, k, spectrum=spectrum, tol_fem=tol_fem
        )
    return BoundsReport(
        shape_id=shape_id,
        k=k,
        pw_lower=payne_weinberger(shape),
        diam_upper=diameter_upper(shape, k),
        buser_lower=buser_grid_lower(shape, k),
        c_k_lower=ck_lower,
        c_used=C,
        mu_fem=mu_fem,
        inequality_checks=checks,
    )
