"""Support-function representations of planar convex bodies.

A convex body is described by its support function
``f(theta) = sup_{x in body} x . (cos theta, sin theta)``.
Two finite-dimensional representations are used:

* truncated Fourier series, coefficients ``[a0, a1..aN, b1..bN]``;
* periodic piecewise-affine samples ``f_m = f(2 pi m / M)``.

Convexity of the body is equivalent to ``f + f'' >= 0``; sampling that
inequality (or its second-difference analogue) at the node angles gives
the linear constraint rows used by the optimizer.  Inclusion between
bodies is pointwise ordering of support functions, which is linear as
well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidShape, UnsupportedParameter
from .geometry import ConvexPolygon, halfplane_intersection

# Bodies with minimal width below this are treated as collapsed.
EPS_WIDTH = 1e-4


def node_angles(m: int) -> np.ndarray:
    """Equispaced sample angles 2*pi*j/m for j = 0..m-1."""
    return 2.0 * np.pi * np.arange(m) / m


@dataclass(frozen=True)
class Parametrization:
    """Finite-dimensional family used by the optimizer.

    kind is 'fourier' (size = highest harmonic N, dimension 2N+1) or
    'pwa' (size = number of support samples M, dimension M).
    """

    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in ("fourier", "pwa"):
            raise UnsupportedParameter(f"unknown parametrization kind {self.kind!r}")
        if self.kind == "fourier" and self.size < 1:
            raise UnsupportedParameter("need at least one harmonic")
        if self.kind == "pwa" and self.size < 8:
            raise UnsupportedParameter("need at least eight support samples")

    @classmethod
    def fourier(cls, n_harmonics: int) -> "Parametrization":
        return cls("fourier", n_harmonics)

    @classmethod
    def pwa(cls, n_samples: int) -> "Parametrization":
        return cls("pwa", n_samples)

    @property
    def dimension(self) -> int:
        return 2 * self.size + 1 if self.kind == "fourier" else self.size

    def shape_from_coeffs(self, coeffs) -> "SupportFunction":
        vec = np.asarray(coeffs, dtype=float)
        if vec.shape != (self.dimension,):
            raise InvalidShape(
                f"coefficient vector has shape {vec.shape}, expected ({self.dimension},)"
            )
        return SupportFunction(self.kind, vec)


class SupportFunction:
    """A convex body given by support values, Fourier or piecewise-affine."""

    def __init__(self, kind: str, data):
        if kind not in ("fourier", "pwa"):
            raise UnsupportedParameter(f"unknown support representation {kind!r}")
        vec = np.asarray(data, dtype=float)
        if vec.ndim != 1:
            raise InvalidShape("support data must be a 1-d array")
        if not np.all(np.isfinite(vec)):
            raise InvalidShape("support data contains non-finite entries")
        if kind == "fourier":
            if len(vec) % 2 == 0 or len(vec) < 3:
                raise InvalidShape("fourier data must be [a0, a1..aN, b1..bN]")
        else:
            if len(vec) < 8:
                raise InvalidShape("piecewise-affine data needs at least eight samples")
        self.kind = kind
        self.data = vec

    # -- constructors -------------------------------------------------

    @classmethod
    def fourier(cls, coeffs) -> "SupportFunction":
        return cls("fourier", coeffs)

    @classmethod
    def pwa(cls, samples) -> "SupportFunction":
        return cls("pwa", samples)

    @classmethod
    def disk(cls, radius: float = 1.0, center=(0.0, 0.0)) -> "SupportFunction":
        if radius <= 0:
            raise InvalidShape("disk radius must be positive")
        cx, cy = center
        return cls("fourier", [radius, cx, cy])

    @classmethod
    def from_callable(cls, func, parametrization: Parametrization, n_fit: int | None = None):
        """Sample (pwa) or least-squares fit (fourier) a support callable."""
        p = parametrization
        if p.kind == "pwa":
            return cls("pwa", func(node_angles(p.size)))
        m = n_fit or max(8 * p.size, 256)
        ang = node_angles(m)
        return cls("fourier", fit_fourier(func(ang), ang, p.size))

    @classmethod
    def from_shape(cls, shape, parametrization: Parametrization) -> "SupportFunction":
        return cls.from_callable(lambda ang: support_values(shape, ang), parametrization)

    # -- basic access -------------------------------------------------

    @property
    def n_harmonics(self) -> int:
        if self.kind != "fourier":
            raise UnsupportedParameter("n_harmonics only applies to fourier data")
        return (len(self.data) - 1) // 2

    @property
    def n_samples(self) -> int:
        if self.kind != "pwa":
            raise UnsupportedParameter("n_samples only applies to piecewise-affine data")
        return len(self.data)

    def angles(self) -> np.ndarray:
        """Native node angles (pwa only)."""
        return node_angles(self.n_samples)

    def evaluate(self, theta) -> np.ndarray:
        """Support values; pwa data is interpolated linearly in angle."""
        ang = np.atleast_1d(np.asarray(theta, dtype=float))
        if self.kind == "fourier":
            n = self.n_harmonics
            k = np.arange(1, n + 1)
            ka = np.outer(ang, k)
            vals = (
                self.data[0]
                + np.cos(ka) @ self.data[1 : n + 1]
                + np.sin(ka) @ self.data[n + 1 :]
            )
        else:
            vals = np.interp(ang, self.angles(), self.data, period=2.0 * np.pi)
        return vals

    def support(self, angles) -> np.ndarray:
        return self.evaluate(angles)

    def __call__(self, theta):
        return self.evaluate(theta)

    # -- convexity ----------------------------------------------------

    def convexity_residual(self, angles=None) -> np.ndarray:
        """Sampled values of f + f'' (Fourier) or its second-difference
        analogue at the pwa nodes.  Nonnegative values certify convexity
        at the samples."""
        if self.kind == "fourier":
            ang = node_angles(2048) if angles is None else np.atleast_1d(angles)
            n = self.n_harmonics
            k = np.arange(1, n + 1)
            weight = 1.0 - k.astype(float) ** 2
            ka = np.outer(ang, k)
            return (
                self.data[0]
                + np.cos(ka) @ (weight * self.data[1 : n + 1])
                + np.sin(ka) @ (weight * self.data[n + 1 :])
            )
        if angles is not None:
            raise UnsupportedParameter("piecewise-affine residuals live on the native nodes")
        tau = 2.0 * np.pi / self.n_samples
        f = self.data
        second = (np.roll(f, -1) - 2.0 * f + np.roll(f, 1)) / tau**2
        return f + second

    def is_convex(self, tol: float | None = None) -> bool:
        if tol is None:
            tol = 1e-9 * max(abs(self.coeff_scale()), 1.0)
        return bool(self.convexity_residual().min() >= -tol)

    def coeff_scale(self) -> float:
        if self.kind == "fourier":
            return float(abs(self.data[0]))
        return float(np.abs(self.data).max())

    # -- transforms ---------------------------------------------------

    def translated(self, shift) -> "SupportFunction":
        cx, cy = float(shift[0]), float(shift[1])
        if self.kind == "fourier":
            out = self.data.copy()
            n = self.n_harmonics
            out[1] += cx
            out[n + 1] += cy
            return SupportFunction("fourier", out)
        ang = self.angles()
        return SupportFunction("pwa", self.data + cx * np.cos(ang) + cy * np.sin(ang))

    def scaled(self, factor: float) -> "SupportFunction":
        if factor <= 0:
            raise InvalidShape("scale factor must be positive")
        return SupportFunction(self.kind, self.data * factor)

    def steiner_point(self) -> np.ndarray:
        """Curvature-weighted center; for Fourier data it is (a1, b1)."""
        if self.kind == "fourier":
            n = self.n_harmonics
            return np.array([self.data[1], self.data[n + 1]])
        ang = self.angles()
        f = self.data
        return np.array(
            [np.mean(f * np.cos(ang)) * 2.0, np.mean(f * np.sin(ang)) * 2.0]
        )

    def to_pwa(self, m: int) -> "SupportFunction":
        return SupportFunction("pwa", self.evaluate(node_angles(m)))

    def to_fourier(self, n_harmonics: int, n_fit: int | None = None) -> "SupportFunction":
        m = n_fit or max(8 * n_harmonics, 256)
        ang = node_angles(m)
        return SupportFunction("fourier", fit_fourier(self.evaluate(ang), ang, n_harmonics))


class HullShape:
    """Convex hull of shapes and loose points, via pointwise max of
    support functions."""

    def __init__(self, shapes=(), points=()):
        self.shapes = list(shapes)
        self.points = np.asarray(list(points), dtype=float).reshape(-1, 2)
        if not self.shapes and len(self.points) < 3:
            raise InvalidShape("hull needs at least one shape or three points")

    def support(self, angles) -> np.ndarray:
        ang = np.atleast_1d(np.asarray(angles, dtype=float))
        parts = [support_values(s, ang) for s in self.shapes]
        if len(self.points):
            u = np.column_stack([np.cos(ang), np.sin(ang)])
            parts.append((u @ self.points.T).max(axis=1))
        return np.max(parts, axis=0)


def hull_with_points(f: "SupportFunction", points) -> "SupportFunction":
    """Convex hull of a body and extra points, in the body's representation.

    The pointwise max of support functions is resampled, so for Fourier
    data the result is a least-squares fit that smooths the hull's kinks.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)

    def hull_support(angles):
        u = np.column_stack([np.cos(angles), np.sin(angles)])
        return np.maximum(f.evaluate(angles), (u @ pts.T).max(axis=1))

    if f.kind == "pwa":
        return SupportFunction("pwa", hull_support(f.angles()))
    n = f.n_harmonics
    ang = node_angles(max(8 * n, 256))
    return SupportFunction("fourier", fit_fourier(hull_support(ang), ang, n))


def fit_fourier(values, angles, n_harmonics: int) -> np.ndarray:
    """Least-squares Fourier coefficients of sampled support values."""
    ang = np.asarray(angles, dtype=float)
    vals = np.asarray(values, dtype=float)
    k = np.arange(1, n_harmonics + 1)
    ka = np.outer(ang, k)
    design = np.hstack([np.ones((len(ang), 1)), np.cos(ka), np.sin(ka)])
    coeffs, *_ = np.linalg.lstsq(design, vals, rcond=None)
    return coeffs


# ----------------------------------------------------------------------
# shape protocol helpers: ConvexPolygon, SupportFunction and HullShape
# all expose support values over angles
# ----------------------------------------------------------------------


def support_values(shape, angles) -> np.ndarray:
    if isinstance(shape, ConvexPolygon):
        return shape.support(angles)
    if isinstance(shape, (SupportFunction, HullShape)):
        return shape.support(angles)
    if callable(shape):
        return np.atleast_1d(np.asarray(shape(np.atleast_1d(angles)), dtype=float))
    raise InvalidShape(f"object of type {type(shape).__name__} is not a supported shape")


def to_polygon(shape, m_out: int | None = None) -> ConvexPolygon:
    """Polygonal realization of a shape.

    Piecewise-affine support data reconstructs exactly from its native
    halfplanes when m_out is omitted; other shapes use a dense angular
    sampling.
    """
    if isinstance(shape, ConvexPolygon) and m_out is None:
        return shape
    if isinstance(shape, SupportFunction) and shape.kind == "pwa" and (
        m_out is None or m_out == shape.n_samples
    ):
        ang = shape.angles()
        return halfplane_intersection(ang, shape.data)
    m = m_out or 512
    ang = node_angles(m)
    return halfplane_intersection(ang, support_values(shape, ang))


def width_of(shape, theta: float) -> float:
    vals = support_values(shape, np.array([theta, theta + np.pi]))
    return float(vals[0] + vals[1])


def _width_scan(shape, n: int = 1024):
    ang = np.linspace(0.0, np.pi, n, endpoint=False)
    vals = support_values(shape, np.concatenate([ang, ang + np.pi]))
    return ang, vals[:n] + vals[n:]


def _golden_refine(func, lo: float, hi: float, n_iter: int = 40) -> float:
    """Golden-section search for a maximizer of func on [lo, hi]."""
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(n_iter):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = func(d)
    return 0.5 * (a + b)

def diameter_of(shape) -> float:
    """Maximal width, located by a dense scan plus local refinement."""
    if isinstance(shape, ConvexPolygon):
        return shape.diameter()
    ang, widths = _width_scan(shape)
    i = int(np.argmax(widths))
    step = ang[1] - ang[0]
    theta = _golden_refine(lambda t: width_of(shape, t), ang[i] - step, ang[i] + step)
    return max(float(widths[i]), width_of(shape, theta))


def diameter_angle_of(shape) -> float:
    """Angle realizing the maximal width."""
    ang, widths = _width_scan(shape)
    i = int(np.argmax(widths))
    step = ang[1] - ang[0]
    return _golden_refine(lambda t: width_of(shape, t), ang[i] - step, ang[i] + step)


def min_width_of(shape) -> float:
    if isinstance(shape, ConvexPolygon):
        return shape.min_width()
    ang, widths = _width_scan(shape)
    i = int(np.argmin(widths))
    step = ang[1] - ang[0]
    theta = _golden_refine(
        lambda t: -width_of(shape, t), ang[i] - step, ang[i] + step
    )
    return min(float(widths[i]), width_of(shape, theta))


def perp_width_of(shape) -> float:
    """Width orthogonal to the diameter direction."""
    return width_of(shape, diameter_angle_of(shape) + 0.5 * np.pi)


def area_of(shape, m_out: int = 512) -> float:
    if isinstance(shape, ConvexPolygon):
        return shape.area()
    return to_polygon(shape, m_out).area()


def contains(outer, inner, tol: float | None = None, n_angles: int = 1024) -> bool:
    """Whether inner sits inside outer, as pointwise support ordering."""
    ang = node_angles(n_angles)
    fo = support_values(outer, ang)
    fi = support_values(inner, ang)
    if tol is None:
        tol = 1e-9 * max(float(np.abs(fo).max()), 1.0)
    return bool(np.all(fi <= fo + tol))


def hausdorff(shape_a, shape_b, n_angles: int = 2048) -> float:
    """Sup-norm distance between support functions."""
    ang = node_angles(n_angles)
    return float(
        np.abs(support_values(shape_a, ang) - support_values(shape_b, ang)).max()
    )


# ----------------------------------------------------------------------
# linear constraint assembly
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ConstraintSystem:
    """Rows A F <= b: first block sampled convexity, second block
    inclusion relative to a reference body."""

    a: np.ndarray
    b: np.ndarray
    parametrization: Parametrization
    problem: str
    angles: np.ndarray

    @property
    def n_rows(self) -> int:
        return len(self.b)

    def residual(self, coeffs) -> float:
        """Largest violation max(A F - b); <= 0 means feasible."""
        return float((self.a @ np.asarray(coeffs, dtype=float) - self.b).max())

    def is_feasible(self, coeffs, tol: float | None = None) -> bool:
        if tol is None:
            tol = 1e-9 * max(float(np.abs(self.b).max()), 1.0)
        return self.residual(coeffs) <= tol


def _fourier_design(angles: np.ndarray, n_harmonics: int, weight=None) -> np.ndarray:
    k = np.arange(1, n_harmonics + 1)
    w = np.ones(n_harmonics) if weight is None else weight
    ka = np.outer(angles, k)
    return np.hstack([np.ones((len(angles), 1)), np.cos(ka) * w, np.sin(ka) * w])


def assemble_constraints(
    parametrization: Parametrization,
    problem: str,
    reference,
    m_constraints: int | None = None,
) -> ConstraintSystem:
    """Linear inequalities defining the admissible coefficient set.

    problem 'interior': convex bodies contained in the reference box.
    problem 'exterior': convex bodies containing the reference obstacle.
    """
    if problem not in ("interior", "exterior"):
        raise UnsupportedParameter(f"unknown problem kind {problem!r}")
    p = parametrization
    if p.kind == "pwa":
        if m_constraints is not None and m_constraints != p.size:
            raise UnsupportedParameter(
                "piecewise-affine constraints are tied to the native sample count"
            )
        m = p.size
    else:
        m = m_constraints or max(128, 16 * p.size)
    ang = node_angles(m)
    ref_vals = support_values(reference, ang)

    if p.kind == "fourier":
        n = p.size
        k = np.arange(1, n + 1)
        convexity = -_fourier_design(ang, n, weight=(1.0 - k.astype(float) ** 2))
        inclusion = _fourier_design(ang, n)
    else:
        tau = 2.0 * np.pi / m
        eye = np.eye(m)
        second = (np.roll(eye, -1, axis=1) - 2.0 * eye + np.roll(eye, 1, axis=1)) / tau**2
        convexity = -(eye + second)
        inclusion = eye

    if problem == "interior":
        a = np.vstack([convexity, inclusion])
        b = np.concatenate([np.zeros(m), ref_vals])
    else:
        a = np.vstack([convexity, -inclusion])
        b = np.concatenate([np.zeros(m), -ref_vals])
    return ConstraintSystem(a, b, p, problem, ang)


def coeffs_of_shape(shape, parametrization: Parametrization) -> np.ndarray:
    """Coefficient vector representing a shape in the given family."""
    return SupportFunction.from_shape(shape, parametrization).data
