"""Triangulation of convex polygons for P1 finite elements.

Regular bodies are meshed from the polygon boundary (original vertices
plus subdivision of long edges) and a staggered interior grid,
triangulated with a Delaunay pass.  Grid lines are anchored to absolute
coordinates so node positions vary continuously as the polygon deforms;
this keeps finite-difference derivatives of eigenvalues usable.

Bodies much thinner than the target spacing get a structured
column-strip mesh in a frame aligned with the minimal-width direction:
at least two element layers across the thickness, vertical node columns
conforming to every polygon vertex, and consistently oriented diagonals.
Staggering is deliberately avoided there because it produces element
angles close to pi once the aspect ratio is large, which destroys the
interpolation accuracy of P1 elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .errors import CollapsedShape, DegenerateMesh
from .geometry import ConvexPolygon
from .support import EPS_WIDTH

# fraction of the local spacing kept clear between interior grid points
# and the boundary
_BOUNDARY_MARGIN = 0.45
# a body is 'thin' when its minimal width is below this many spacings
_THIN_FACTOR = 3.0


@dataclass(frozen=True)
class TriangleMesh:
    """P1 triangle mesh: nodes (n, 2), triangles (m, 3) with
    counter-clockwise node indices."""

    nodes: np.ndarray
    triangles: np.ndarray
    h_target: float
    quality_floor: float
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def corners(self) -> np.ndarray:
        """Node coordinates per triangle, shape (m, 3, 2)."""
        return self.nodes[self.triangles]

    def areas(self) -> np.ndarray:
        p = self.corners()
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    def total_area(self) -> float:
        return float(self.areas().sum())

    def min_altitude(self) -> float:
        p = self.corners()
        a = np.abs(self.areas())
        edges = np.stack(
            [p[:, 2] - p[:, 1], p[:, 0] - p[:, 2], p[:, 1] - p[:, 0]], axis=1
        )
        longest = np.linalg.norm(edges, axis=2).max(axis=1)
        return float((2.0 * a / longest).min())

    def boundary_edges(self) -> np.ndarray:
        """Edges owned by exactly one triangle, as (b, 2) index pairs."""
        if "boundary" not in self._cache:
            t = self.triangles
            edges = np.vstack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
            key = np.sort(edges, axis=1)
            _, idx, counts = np.unique(
                key, axis=0, return_index=True, return_counts=True
            )
            self._cache["boundary"] = edges[idx[counts == 1]]
        return self._cache["boundary"]


# ----------------------------------------------------------------------
# regular (near-isotropic) meshing
# ----------------------------------------------------------------------


def _resample_ring(vertices: np.ndarray, h: float) -> np.ndarray:
    """Polygon vertices plus equal subdivision of edges longer than h."""
    out = []
    nxt = np.roll(vertices, -1, axis=0)
    for a, b in zip(vertices, nxt):
        d = b - a
        length = float(np.hypot(d[0], d[1])) / h
        parts = max(1, int(np.ceil(length * (1.0 - 1e-12))))
        ts = np.arange(parts) / parts
        out.append(a + ts[:, None] * d[None, :])
    return np.vstack(out)


def _interior_grid(poly: ConvexPolygon, h: float) -> np.ndarray:
    """Staggered grid points inside the polygon, anchored to absolute
    coordinates, kept a margin away from the boundary."""
    xmin, ymin, xmax, ymax = poly.bounding_box()
    j0 = int(np.floor(ymin / h)) - 1
    j1 = int(np.ceil(ymax / h)) + 1
    i0 = int(np.floor(xmin / h)) - 1
    i1 = int(np.ceil(xmax / h)) + 1
    base = np.arange(i0, i1 + 1) * h
    pts = []
    for j in range(j0, j1 + 1):
        xs = base + (0.5 * h if j % 2 else 0.0)
        pts.append(np.column_stack([xs, np.full(len(xs), j * h)]))
    pts = np.vstack(pts)

    verts = poly.vertices
    edges = np.roll(verts, -1, axis=0) - verts
    lens = np.linalg.norm(edges, axis=1)
    rel = pts[:, None, :] - verts[None, :, :]
    cross = edges[None, :, 0] * rel[:, :, 1] - edges[None, :, 1] * rel[:, :, 0]
    # signed distance to every edge line; inside with margin
    dist = cross / np.maximum(lens, 1e-300)[None, :]
    keep = np.all(dist >= _BOUNDARY_MARGIN * h, axis=1)
    return pts[keep]


def _delaunay_mesh(poly: ConvexPolygon, h: float):
    ring = _resample_ring(poly.vertices, h)
    interior = _interior_grid(poly, h)
    pts = np.vstack([ring, interior]) if len(interior) else ring
    try:
        tri = Delaunay(pts / h)
    except QhullError:
        tri = Delaunay(pts / h, qhull_options="QJ Qbb Qz")
    simplices = tri.simplices.copy()
    p = pts[simplices]
    e1 = p[:, 1] - p[:, 0]
    e2 = p[:, 2] - p[:, 0]
    areas = 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    flip = areas < 0
    simplices[flip] = simplices[flip][:, [0, 2, 1]]
    areas = np.abs(areas)
    good = areas > 1e-10 * h * h
    simplices = simplices[good]
    used = np.unique(simplices)
    remap = -np.ones(len(pts), dtype=int)
    remap[used] = np.arange(len(used))
    return pts[used], remap[simplices]


# ----------------------------------------------------------------------
# thin (anisotropic) meshing
# ----------------------------------------------------------------------


def _boundary_chains(verts: np.ndarray):
    """Lower and upper boundary of a convex CCW ring as functions of x."""
    i_min = int(np.argmin(verts[:, 0] + 1e-12 * verts[:, 1]))
    i_max = int(np.argmax(verts[:, 0] + 1e-12 * verts[:, 1]))
    n = len(verts)
    lower = [verts[(i_min + j) % n] for j in range((i_max - i_min) % n + 1)]
    upper = [verts[(i_max + j) % n] for j in range((i_min - i_max) % n + 1)]
    lower = np.array(lower)
    upper = np.array(upper)[::-1]
    return lower, upper


def _chain_eval(chain: np.ndarray, xs: np.ndarray, take_max: bool) -> np.ndarray:
    """Piecewise-linear boundary height along a monotone chain; vertical
    edges collapse to their upper (take_max) or lower end."""
    x = chain[:, 0]
    y = chain[:, 1]
    scale = max(float(np.ptp(x)), 1e-300)
    xo: list[float] = []
    yo: list[float] = []
    for xi, yi in zip(x, y):
        if xo and xi - xo[-1] <= 1e-12 * scale:
            yo[-1] = max(yo[-1], yi) if take_max else min(yo[-1], yi)
        else:
            xo.append(float(xi))
            yo.append(float(yi))
    return np.interp(xs, xo, yo)


def _cluster(values: np.ndarray, tol: float) -> np.ndarray:
    """Merge sorted values closer than tol, keeping the first of a run."""
    if len(values) == 0:
        return values
    out = [values[0]]
    for v in values[1:]:
        if v - out[-1] > tol:
            out.append(v)
    return np.array(out)


def _column_positions(verts: np.ndarray, hx: float) -> np.ndarray:
    xmin = verts[:, 0].min()
    xmax = verts[:, 0].max()
    # vertices sharing an x up to rounding (vertical edges, possibly
    # rotated) must land in one column or the strip degenerates
    tol = 1e-12 * max(xmax - xmin, 1e-300)
    vx = _cluster(np.unique(verts[:, 0]), tol)
    i0 = int(np.ceil(xmin / hx))
    i1 = int(np.floor(xmax / hx))
    grid = np.arange(i0, i1 + 1) * hx
    # grid columns too close to a vertex column would create needle
    # quads; the vertex columns are the ones that must stay
    if len(grid):
        near = np.min(np.abs(grid[:, None] - vx[None, :]), axis=1)
        grid = grid[near > 0.25 * hx]
    xs = _cluster(np.unique(np.concatenate([vx, grid])), tol)
    # subdivide any remaining gap wider than hx
    out = [xs[:1]]
    for a, b in zip(xs[:-1], xs[1:]):
        gap = b - a
        if gap > hx * (1.0 + 1e-12):
            parts = int(np.ceil(gap / hx - 1e-12))
            out.append(a + gap * np.arange(1, parts) / parts)
        out.append(np.array([b]))
    return np.concatenate(out)


def _structured_thin_mesh(poly: ConvexPolygon, hx: float, rot: np.ndarray):
    """Column-strip mesh of a thin body in the rotated frame."""
    verts = poly.vertices @ rot.T
    work = ConvexPolygon(verts)
    lower, upper = _boundary_chains(work.vertices)
    xs = _column_positions(work.vertices, hx)
    ylo = _chain_eval(lower, xs, take_max=False)
    yhi = _chain_eval(upper, xs, take_max=True)
    thickness = np.maximum(yhi - ylo, 0.0)
    t_max = thickness.max()
    n_layers = max(2, int(np.ceil(t_max / hx)))
    scale = max(work.scale, 1e-300)

    nodes = []
    columns = []
    frac = np.arange(n_layers + 1) / n_layers
    for j in range(len(xs)):
        if thickness[j] < 1e-12 * scale:
            columns.append([len(nodes)])
            nodes.append((xs[j], 0.5 * (ylo[j] + yhi[j])))
        else:
            ids = list(range(len(nodes), len(nodes) + n_layers + 1))
            columns.append(ids)
            for f in frac:
                nodes.append((xs[j], ylo[j] + f * thickness[j]))
    tris = []
    for a_col, b_col in zip(columns[:-1], columns[1:]):
        if len(a_col) == 1 and len(b_col) == 1:
            continue
        if len(a_col) == 1:
            s = a_col[0]
            for i in range(len(b_col) - 1):
                tris.append((s, b_col[i], b_col[i + 1]))
        elif len(b_col) == 1:
            s = b_col[0]
            for i in range(len(a_col) - 1):
                tris.append((a_col[i], s, a_col[i + 1]))
        else:
            for i in range(n_layers):
                tris.append((a_col[i], b_col[i], b_col[i + 1]))
                tris.append((a_col[i], b_col[i + 1], a_col[i + 1]))
    nodes = np.array(nodes) @ rot
    tris = np.array(tris, dtype=int)
    p = nodes[tris]
    e1 = p[:, 1] - p[:, 0]
    e2 = p[:, 2] - p[:, 0]
    areas = 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    flip = areas < 0
    tris[flip] = tris[flip][:, [0, 2, 1]]
    areas = np.abs(areas)
    good = areas > 1e-13 * max(float(np.median(areas)), 1e-300)
    tris = tris[good]
    used = np.unique(tris)
    remap = -np.ones(len(nodes), dtype=int)
    remap[used] = np.arange(len(used))
    return nodes[used], remap[tris]


# ----------------------------------------------------------------------
# entry points
# ----------------------------------------------------------------------


def triangulate(
    poly: ConvexPolygon,
    h_target: float | None = None,
    *,
    allow_thin: bool = False,
    collapse_tol: float = EPS_WIDTH,
) -> TriangleMesh:
    """Mesh a convex polygon at spacing h_target (default diameter/60).

    Raises CollapsedShape for bodies thinner than collapse_tol unless
    allow_thin is set.
    """
    diam = poly.diameter()
    if h_target is None:
        h_target = diam / 60.0
    if h_target <= 0:
        raise DegenerateMesh("mesh spacing must be positive")
    w, w_dir = poly._min_width_dir()
    if w < collapse_tol and not allow_thin:
        raise CollapsedShape(
            f"body of width {w:.3e} is below the collapse threshold {collapse_tol:.1e}"
        )

    if w < _THIN_FACTOR * h_target:
        # rotate the minimal-width direction onto the y axis
        c, s = w_dir[1], w_dir[0]
        rot = np.array([[c, -s], [s, c]])
        nodes, triangles = _structured_thin_mesh(poly, h_target, rot)
        quality_floor = min(1e-3 * diam, 0.2 * w)
    else:
        nodes, triangles = _delaunay_mesh(poly, h_target)
        quality_floor = min(1e-3 * diam, 0.25 * h_target)
        if len(triangles) >= 2:
            probe = TriangleMesh(nodes, triangles, h_target, quality_floor)
            if probe.min_altitude() < quality_floor:
                # retry once with a shifted anchor; unlucky grid/boundary
                # alignment occasionally produces a near-degenerate sliver
                shift = np.array([0.37 * h_target, 0.41 * h_target])
                n2, t2 = _delaunay_mesh(ConvexPolygon(poly.vertices + shift), h_target)
                m2 = TriangleMesh(n2 - shift, t2, h_target, quality_floor)
                if m2.min_altitude() > probe.min_altitude():
                    nodes, triangles = m2.nodes, m2.triangles

    if len(triangles) < 2:
        raise DegenerateMesh("triangulation produced too few elements")
    mesh = TriangleMesh(nodes, triangles, h_target, quality_floor)
    area_err = abs(mesh.total_area() - poly.area())
    if area_err > 1e-8 * max(poly.area(), 1e-300):
        raise DegenerateMesh(f"mesh area differs from polygon area by {area_err:.3e}")
    return mesh


def refine(mesh: TriangleMesh) -> TriangleMesh:
    """Uniform red refinement: each triangle splits into four via edge
    midpoints; node count roughly quadruples."""
    nodes = mesh.nodes
    tris = mesh.triangles
    edge_mid: dict[tuple[int, int], int] = {}
    new_pts: list[np.ndarray] = []
    next_id = len(nodes)

    def midpoint(i: int, j: int) -> int:
        nonlocal next_id
        key = (i, j) if i < j else (j, i)
        if key not in edge_mid:
            edge_mid[key] = next_id
            new_pts.append(0.5 * (nodes[key[0]] + nodes[key[1]]))
            next_id += 1
        return edge_mid[key]

    out = np.empty((4 * len(tris), 3), dtype=int)
    for t, (a, b, c) in enumerate(tris):
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        out[4 * t + 0] = (a, ab, ca)
        out[4 * t + 1] = (ab, b, bc)
        out[4 * t + 2] = (ca, bc, c)
        out[4 * t + 3] = (ab, bc, ca)
    all_nodes = np.vstack([nodes, np.array(new_pts).reshape(-1, 2)])
    return TriangleMesh(all_nodes, out, mesh.h_target / 2.0, mesh.quality_floor / 2.0)
