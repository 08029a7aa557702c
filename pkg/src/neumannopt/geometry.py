"""Convex polygon primitives.

All polygons are stored as counter-clockwise vertex arrays of shape
(n, 2).  Operations that build polygons (halfplane intersection,
clipping) merge duplicate and collinear vertices at a tolerance that is
relative to the polygon scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateShape, InvalidShape

# Relative tolerance for merging vertices and classifying collinearity.
TOL_GEOM = 1e-12


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidShape(f"expected an (n, 2) array of points, got shape {pts.shape}")
    return pts


def shoelace_area(vertices: np.ndarray) -> float:
    """Signed area of a polygon (positive when counter-clockwise)."""
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def convex_hull(points) -> np.ndarray:
    """Counter-clockwise convex hull via the monotone chain scan."""
    pts = _as_points(points)
    pts = np.unique(pts, axis=0)
    if len(pts) < 3:
        raise DegenerateShape("hull of fewer than three distinct points")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    scale = max(np.ptp(pts[:, 0]), np.ptp(pts[:, 1]), 1e-300)
    eps = 1e-12 * scale * scale

    def half(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2:
                o, a = chain[-2], chain[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= eps:
                    chain.pop()
                else:
                    break
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3 or abs(shoelace_area(hull)) <= eps:
        raise DegenerateShape("points are (nearly) collinear")
    return hull


def _dedupe_ring(vertices: np.ndarray, tol: float) -> np.ndarray:
    """Drop consecutive near-duplicate and collinear vertices."""
    verts = vertices
    keep = np.linalg.norm(verts - np.roll(verts, 1, axis=0), axis=1) > tol
    verts = verts[keep]
    if len(verts) < 3:
        return verts
    prev = np.roll(verts, 1, axis=0)
    nxt = np.roll(verts, -1, axis=0)
    cross = (verts[:, 0] - prev[:, 0]) * (nxt[:, 1] - prev[:, 1]) - (
        verts[:, 1] - prev[:, 1]
    ) * (nxt[:, 0] - prev[:, 0])
    return verts[np.abs(cross) > tol * tol]


def clip_halfplane(vertices: np.ndarray, normal, offset: float) -> np.ndarray:
    """Intersect a convex polygon with {x : normal . x <= offset}.

    Returns the (possibly empty) clipped vertex ring.  One vectorized
    Sutherland-Hodgman pass; the input must be counter-clockwise.
    """
    n = np.asarray(normal, dtype=float)
    d = vertices @ n - offset
    if np.all(d <= 0.0):
        return vertices
    if np.all(d >= 0.0):
        return vertices[:0]
    d_next = np.roll(d, -1)
    nxt = np.roll(vertices, -1, axis=0)
    out = []
    crossing = d * d_next < 0.0
    t = np.zeros(len(vertices))
    t[crossing] = d[crossing] / (d[crossing] - d_next[crossing])
    for i in range(len(vertices)):
        if d[i] <= 0.0:
            out.append(vertices[i])
        if crossing[i]:
            out.append(vertices[i] + t[i] * (nxt[i] - vertices[i]))
    return np.array(out) if out else vertices[:0]


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex polygon with counter-clockwise vertices."""

    vertices: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        verts = _as_points(self.vertices)
        if len(verts) < 3:
            raise DegenerateShape("polygon needs at least three vertices")
        if shoelace_area(verts) < 0:
            verts = verts[::-1]
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def from_points(cls, points) -> "ConvexPolygon":
        return cls(convex_hull(points))

    @classmethod
    def regular(cls, n: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0):
        ang = phase + 2.0 * np.pi * np.arange(n) / n
        verts = np.column_stack([np.cos(ang), np.sin(ang)]) * radius + np.asarray(center)
        return cls(verts)

    @classmethod
    def box(cls, xmin: float, ymin: float, xmax: float, ymax: float) -> "ConvexPolygon":
        return cls(np.array([[xmin, ymin], [xmax, ymin], [xmax, ymax], [xmin, ymax]]))

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def scale(self) -> float:
        v = self.vertices
        return float(max(np.ptp(v[:, 0]), np.ptp(v[:, 1])))

    def area(self) -> float:
        return shoelace_area(self.vertices)

    def perimeter(self) -> float:
        edges = np.roll(self.vertices, -1, axis=0) - self.vertices
        return float(np.linalg.norm(edges, axis=1).sum())

    def centroid(self) -> np.ndarray:
        v = self.vertices
        nxt = np.roll(v, -1, axis=0)
        cross = v[:, 0] * nxt[:, 1] - nxt[:, 0] * v[:, 1]
        a = cross.sum() / 2.0
        cx = np.dot(v[:, 0] + nxt[:, 0], cross) / (6.0 * a)
        cy = np.dot(v[:, 1] + nxt[:, 1], cross) / (6.0 * a)
        return np.array([cx, cy])

    def edge_lengths(self) -> np.ndarray:
        edges = np.roll(self.vertices, -1, axis=0) - self.vertices
        return np.linalg.norm(edges, axis=1)

    def diameter(self) -> float:
        """Largest pairwise vertex distance (exact for polygons)."""
        if "diameter" not in self._cache:
            v = self.vertices
            if len(v) > 700:
                # antipodal pair search via rotating calipers
                self._cache["diameter"] = _calipers_diameter(v)
            else:
                d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=-1)
                self._cache["diameter"] = float(np.sqrt(d2.max()))
        return self._cache["diameter"]

    def diameter_direction(self) -> np.ndarray:
        """Unit vector along a segment realizing the diameter."""
        v = self.vertices
        if len(v) > 700:
            i, j = _calipers_pair(v)
        else:
            d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=-1)
            i, j = np.unravel_index(np.argmax(d2), d2.shape)
        u = v[j] - v[i]
        return u / np.linalg.norm(u)

    def min_width(self) -> float:
        """Smallest distance between parallel supporting lines."""
        if "min_width" not in self._cache:
            self._cache["min_width"] = self._min_width_dir()[0]
        return self._cache["min_width"]

    def min_width_direction(self) -> np.ndarray:
        """Unit normal of the supporting-line pair realizing min width."""
        return self._min_width_dir()[1]

    def _min_width_dir(self):
        # min width of a convex polygon is attained normal to an edge
        v = self.vertices
        edges = np.roll(v, -1, axis=0) - v
        lens = np.linalg.norm(edges, axis=1)
        ok = lens > 0
        tangents = edges[ok] / lens[ok, None]
        normals = np.column_stack([-tangents[:, 1], tangents[:, 0]])
        # distance from each vertex to each edge line, max over vertices
        heights = np.abs((v[None, :, :] - v[ok][:, None, :]) @ normals[:, :, None])
        widths = heights[:, :, 0].max(axis=1)
        i = int(np.argmin(widths))
        return float(widths[i]), normals[i]

    def width(self, direction) -> float:
        u = np.asarray(direction, dtype=float)
        u = u / np.linalg.norm(u)
        proj = self.vertices @ u
        return float(proj.max() - proj.min())

    def support(self, angles) -> np.ndarray:
        """Support function values h(theta) = max_v v . u(theta)."""
        ang = np.atleast_1d(np.asarray(angles, dtype=float))
        u = np.column_stack([np.cos(ang), np.sin(ang)])
        return (u @ self.vertices.T).max(axis=1)

    def support_point(self, angle: float) -> np.ndarray:
        u = np.array([np.cos(angle), np.sin(angle)])
        return self.vertices[int(np.argmax(self.vertices @ u))]

    def contains_points(self, points, tol: float = 0.0) -> np.ndarray:
        """Boolean mask; tol > 0 accepts points slightly outside."""
        pts = _as_points(np.atleast_2d(points))
        v = self.vertices
        edges = np.roll(v, -1, axis=0) - v
        # inside iff left of (or on) every directed edge
        rel = pts[:, None, :] - v[None, :, :]
        cross = edges[None, :, 0] * rel[:, :, 1] - edges[None, :, 1] * rel[:, :, 0]
        return np.all(cross >= -tol, axis=1)

    def contains_polygon(self, other: "ConvexPolygon", tol: float = 0.0) -> bool:
        return bool(np.all(self.contains_points(other.vertices, tol=tol)))

    def clip(self, normal, offset: float) -> "ConvexPolygon":
        """Intersect with the halfplane {normal . x <= offset}."""
        ring = clip_halfplane(self.vertices, normal, offset)
        ring = _dedupe_ring(ring, TOL_GEOM * max(self.scale, 1.0))
        if len(ring) < 3 or shoelace_area(ring) <= 0:
            raise DegenerateShape("clipped polygon is empty or degenerate")
        return ConvexPolygon(ring)

    def clip_box(self, xmin, ymin, xmax, ymax) -> "ConvexPolygon":
        poly = self
        for normal, off in (
            ((1.0, 0.0), xmax),
            ((-1.0, 0.0), -xmin),
            ((0.0, 1.0), ymax),
            ((0.0, -1.0), -ymin),
        ):
            poly = poly.clip(normal, off)
        return poly

    def translated(self, shift) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.asarray(shift, dtype=float))

    def rotated(self, angle: float, about=(0.0, 0.0)) -> "ConvexPolygon":
        c, s = np.cos(angle), np.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        about = np.asarray(about, dtype=float)
        return ConvexPolygon((self.vertices - about) @ rot.T + about)

    def scaled(self, factor: float, about=(0.0, 0.0)) -> "ConvexPolygon":
        if factor <= 0:
            raise InvalidShape("scale factor must be positive")
        about = np.asarray(about, dtype=float)
        return ConvexPolygon((self.vertices - about) * factor + about)

    def stretched(self, t: float, axis: int = 1) -> "ConvexPolygon":
        """Apply (x, y) -> (x, t*y) (or the x analogue for axis=0)."""
        if t <= 0:
            raise InvalidShape("stretch factor must be positive")
        verts = self.vertices.copy()
        verts[:, axis] *= t
        return ConvexPolygon(verts)

    def bounding_box(self):
        v = self.vertices
        return (
            float(v[:, 0].min()),
            float(v[:, 1].min()),
            float(v[:, 0].max()),
            float(v[:, 1].max()),
        )


def _calipers_hull_order(v: np.ndarray) -> np.ndarray:
    return v


def _calipers_pair(v: np.ndarray):
    """Indices of a farthest vertex pair on a CCW convex ring."""
    n = len(v)
    j = 1
    best = (0.0, 0, 0)
    edges = np.roll(v, -1, axis=0) - v
    for i in range(n):
        # advance j while the next vertex is farther from edge i
        while True:
            jn = (j + 1) % n
            cur = np.cross(edges[i], v[j] - v[i])
            nxt = np.cross(edges[i], v[jn] - v[i])
            if nxt > cur:
                j = jn
            else:
                break
        for cand in (j, (j + 1) % n):
            d = float(np.sum((v[cand] - v[i]) ** 2))
            if d > best[0]:
                best = (d, i, cand)
    return best[1], best[2]


def _calipers_diameter(v: np.ndarray) -> float:
    i, j = _calipers_pair(v)
    return float(np.linalg.norm(v[j] - v[i]))


def halfplane_intersection(angles, offsets, *, bound: float | None = None) -> ConvexPolygon:
    """Intersection of halfplanes {x . u(angle) <= offset}.

    Implemented by clipping a generous bounding box with each halfplane
    in turn.  Raises DegenerateShape when the intersection is empty or
    has no interior.
    """
    ang = np.asarray(angles, dtype=float)
    off = np.asarray(offsets, dtype=float)
    if ang.shape != off.shape or ang.ndim != 1 or len(ang) < 3:
        raise InvalidShape("need matching 1-d arrays of at least three halfplanes")
    if bound is None:
        bound = float(np.abs(off).max()) * 4.0 + 1.0
    ring = ConvexPolygon.box(-bound, -bound, bound, bound).vertices
    normals = np.column_stack([np.cos(ang), np.sin(ang)])
    scale = max(float(np.abs(off).max()), 1e-9)
    for k in range(len(ang)):
        ring = clip_halfplane(ring, normals[k], off[k])
        if len(ring) < 3:
            raise DegenerateShape("halfplane intersection is empty")
    ring = _dedupe_ring(ring, 1e-12 * scale)
    if len(ring) < 3 or shoelace_area(ring) <= (1e-12 * scale) ** 2:
        raise DegenerateShape("halfplane intersection has no interior")
    poly = ConvexPolygon(ring)
    if poly.width((1.0, 0.0)) >= 2.0 * bound * 0.999 or poly.width((0.0, 1.0)) >= 2.0 * bound * 0.999:
        raise DegenerateShape("halfplane intersection is unbounded at the given angles")
    return poly


def hausdorff_distance(a: ConvexPolygon, b: ConvexPolygon, n_angles: int = 2048) -> float:
    """Hausdorff distance between convex bodies.

    For convex bodies this equals the sup-norm distance between their
    support functions; a dense angular scan gives it to high accuracy.
    """
    ang = np.linspace(0.0, 2.0 * np.pi, n_angles, endpoint=False)
    return float(np.abs(a.support(ang) - b.support(ang)).max())
