"""Projected-descent optimization of Neumann eigenvalues over convex
bodies described by support functions.

Interior runs minimize mu_k over bodies inside a convex box, exterior
runs maximize mu_k over bodies containing a convex obstacle.  Both share
one engine: multi-start descent on finite-difference gradients where
every trial point is pulled back onto the linear feasible set
{A F <= B} by an exact least-squares projection.  One-parameter shape
families and the self-domain diagnostics live here as well.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import nnls

from .errors import (
    CollapsedShape,
    DegenerateMesh,
    DegenerateShape,
    InvalidShape,
    NoFeasibleStart,
    SolverFailure,
    UnsupportedParameter,
)
from .fem import Spectrum, spectrum_of
from .geometry import ConvexPolygon, halfplane_intersection
from .reference import bessel_deriv_zero, bessel_zero
from .support import (
    ConstraintSystem,
    HullShape,
    Parametrization,
    SupportFunction,
    area_of,
    assemble_constraints,
    coeffs_of_shape,
    diameter_of,
    node_angles,
    to_polygon,
)

# failures of geometry/meshing/eigensolving reject a trial point but
# never abort a run
_FEM_ERRORS = (DegenerateShape, CollapsedShape, DegenerateMesh, InvalidShape, SolverFailure)


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("SSL_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class OptimizeOptions:
    """Knobs of the projected-descent engine.

    Mesh sizes default to diam/40 during iterations and diam/80 for the
    final reported value, with diam taken from the box or obstacle.
    """

    n_starts: int = 8
    max_iter: int = 60
    tol_opt: float = 1e-4
    stall_iters: int = 5
    h_fd_rel: float = 1e-4
    alpha_max_rel: float = 0.5
    max_backtracks: int = 12
    h_coarse: float | None = None
    h_final: float | None = None
    m_out: int = 256
    m_constraints: int | None = None
    seed: int = 0
    allow_thin: bool = False
    extra_starts: tuple = ()


@dataclass(frozen=True)
class OptimizationResult:
    """Best point found by a multi-start projected-descent run."""

    f_opt: np.ndarray
    shape: SupportFunction
    spectrum: Spectrum
    k: int
    problem: str
    objective_trace: list
    feasibility_residual: float
    starts_used: int
    seed: int
    n_evaluations: int

    @property
    def mu(self) -> float:
        return self.spectrum.mu(self.k)


def _as_parametrization(strategy) -> Parametrization:
    if isinstance(strategy, Parametrization):
        return strategy
    if isinstance(strategy, str):
        kind, _, num = strategy.partition(":")
        try:
            size = int(num)
        except ValueError:
            raise UnsupportedParameter(f"cannot parse strategy {strategy!r}") from None
        kind = kind.strip().lower()
        if kind == "fourier":
            return Parametrization.fourier(size)
        if kind == "pwa":
            return Parametrization.pwa(size)
        raise UnsupportedParameter(f"unknown strategy kind {kind!r}")
    if isinstance(strategy, (tuple, list)) and len(strategy) == 2:
        kind, size = strategy
        return _as_parametrization(f"{kind}:{size}")
    raise UnsupportedParameter(f"cannot interpret strategy {strategy!r}")


def project_feasible(coeffs, system: ConstraintSystem) -> np.ndarray:
    """Closest point of {A F <= b} to the given coefficients.

    Solved as a least-distance program through its dual nonnegative
    least-squares problem (Lawson-Hanson active set): with G = -A and
    h = A F0 - b, stack E = [G^T; h^T], take f as the last unit vector,
    solve min |E u - f| over u >= 0 and read the step off the residual.
    """
    f0 = np.asarray(coeffs, dtype=float)
    viol = system.a @ f0 - system.b
    if not np.all(np.isfinite(viol)):
        raise NoFeasibleStart("non-finite coefficients cannot be projected")
    if viol.max() <= 0.0:
        return f0.copy()
    n = len(f0)
    e = np.vstack([-system.a.T, viol[None, :]])
    target = np.zeros(n + 1)
    target[-1] = 1.0
    try:
        u, _ = nnls(e, target)
    except RuntimeError as exc:
        raise NoFeasibleStart(f"projection solve failed: {exc}") from exc
    r = e @ u - target
    denom = r[-1]
    if abs(denom) <= 1e-12:
        raise NoFeasibleStart("constraint polyhedron admits no nearby feasible point")
    return f0 - r[:-1] / denom


class _Evaluator:
    """Memoized objective phi(F) = sign * mu_k(shape(F))."""

    def __init__(self, parametrization, k, h_target, m_out, allow_thin, sign):
        self.parametrization = parametrization
        self.k = k
        self.h_target = h_target
        self.m_out = m_out if parametrization.kind == "fourier" else None
        self.allow_thin = allow_thin
        self.sign = sign
        self.cache: dict = {}
        self.n_evals = 0

    def mu_and_flag(self, coeffs: np.ndarray):
        """(mu_k, multiplicity flag) or None when the evaluation fails."""
        key = coeffs.tobytes()
        if key in self.cache:
            return self.cache[key]
        if not np.all(np.isfinite(coeffs)):
            self.cache[key] = None
            return None
        try:
            shape = self.parametrization.shape_from_coeffs(coeffs)
            poly = to_polygon(shape, self.m_out)
            spec = spectrum_of(
                poly, self.k + 1, h_target=self.h_target, allow_thin=self.allow_thin
            )
            out = (spec.mu(self.k), spec.is_multiple(self.k))
        except _FEM_ERRORS:
            out = None
        self.n_evals += 1
        self.cache[key] = out
        return out

    def phi(self, coeffs: np.ndarray):
        out = self.mu_and_flag(coeffs)
        return None if out is None else self.sign * out[0]


def _fd_gradient(evaluator: _Evaluator, f: np.ndarray, phi0: float, step: float):
    """Central differences with one-sided fallback at failed probes."""
    grad = np.zeros_like(f)
    probe = f.copy()
    for i in range(len(f)):
        probe[i] = f[i] + step
        up = evaluator.phi(probe)
        probe[i] = f[i] - step
        dn = evaluator.phi(probe)
        probe[i] = f[i]
        if up is not None and dn is not None:
            grad[i] = (up - dn) / (2.0 * step)
        elif up is not None:
            grad[i] = (up - phi0) / step
        elif dn is not None:
            grad[i] = (phi0 - dn) / step
    return grad


def _descend(evaluator: _Evaluator, system: ConstraintSystem, f_start, opts):
    """Single-start projected descent; returns (f, mu, trace) or None."""
    f = np.asarray(f_start, dtype=float)
    state = evaluator.mu_and_flag(f)
    if state is None:
        return None
    mu, flagged = state
    phi = evaluator.sign * mu
    trace = [(0, mu)]
    coeff_scale = max(float(np.abs(f).max()), 1e-8)
    h_fd = opts.h_fd_rel * coeff_scale
    alpha = None
    stall = 0
    for it in range(1, opts.max_iter + 1):
        grad = _fd_gradient(evaluator, f, phi, h_fd * (0.5 if flagged else 1.0))
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= 1e-14:
            stall += 1
            if stall >= opts.stall_iters:
                break
            continue
        alpha_cap = opts.alpha_max_rel * coeff_scale / gnorm
        alpha = alpha_cap if alpha is None else min(2.0 * alpha, alpha_cap)
        shrink = 0.25 if flagged else 0.5
        step = alpha
        accepted = False
        rel_drop = 0.0
        for _ in range(opts.max_backtracks):
            try:
                trial = project_feasible(f - step * grad, system)
            except NoFeasibleStart:
                break
            out = evaluator.mu_and_flag(trial)
            if out is not None:
                phi_t = evaluator.sign * out[0]
                if flagged:
                    ok = phi_t <= phi - 1e-4 * step * gnorm**2
                else:
                    ok = phi_t < phi
                if ok:
                    rel_drop = (phi - phi_t) / max(abs(phi), 1e-300)
                    f, phi = trial, phi_t
                    mu, flagged = out
                    trace.append((it, mu))
                    alpha = step
                    accepted = True
                    break
            step *= shrink
        if accepted:
            stall = stall + 1 if rel_drop < opts.tol_opt else 0
        else:
            stall += 1
            alpha = None
        if stall >= opts.stall_iters:
            break
    return f, mu, trace


def _coerce_start(entry, parametrization: Parametrization) -> np.ndarray:
    if isinstance(entry, np.ndarray) and entry.shape == (parametrization.dimension,):
        return entry.astype(float)
    return np.asarray(coeffs_of_shape(entry, parametrization), dtype=float)


def _sample_point_in(poly: ConvexPolygon, rng) -> np.ndarray:
    xmin, ymin, xmax, ymax = poly.bounding_box()
    while True:
        p = rng.uniform((xmin, ymin), (xmax, ymax))
        if poly.contains_points(p[None, :])[0]:
            return p


def _interior_starts(box_poly, parametrization, opts, rng):
    starts = [_coerce_start(s, parametrization) for s in opts.extra_starts]
    while len(starts) < opts.n_starts:
        n_vertices = int(rng.integers(6, 13))
        pts = np.array([_sample_point_in(box_poly, rng) for _ in range(n_vertices)])
        try:
            poly = ConvexPolygon.from_points(pts)
        except (InvalidShape, DegenerateShape):
            continue
        poly = poly.scaled(0.9, about=poly.centroid())
        starts.append(_coerce_start(poly, parametrization))
    return starts


def _random_support_bump(parametrization, amplitude, rng):
    """Smooth random perturbation expressed in the parametrization."""
    orders = np.arange(1, 5)
    c = rng.normal(0.0, amplitude, size=len(orders)) / (1.0 + orders)
    s = rng.normal(0.0, amplitude, size=len(orders)) / (1.0 + orders)
    if parametrization.kind == "pwa":
        ang = node_angles(parametrization.size)
        return (np.cos(np.outer(ang, orders)) @ c) + (np.sin(np.outer(ang, orders)) @ s)
    delta = np.zeros(parametrization.dimension)
    n = parametrization.size
    keep = min(4, n)
    delta[1 : 1 + keep] = c[:keep]
    delta[1 + n : 1 + n + keep] = s[:keep]
    return delta


def _exterior_starts(obs_poly, parametrization, opts, rng):
    starts = [_coerce_start(s, parametrization) for s in opts.extra_starts]
    center = obs_poly.centroid()
    amplitude = 0.03 * max(obs_poly.scale, 1e-8)
    while len(starts) < opts.n_starts:
        factor = rng.uniform(1.05, 1.8)
        dilated = obs_poly.scaled(factor, about=center)
        f0 = _coerce_start(dilated, parametrization)
        starts.append(f0 + _random_support_bump(parametrization, amplitude, rng))
    return starts


def _run_multistart(problem, reference, k, parametrization, opts, sign):
    if k < 1:
        raise UnsupportedParameter("mode index k must be at least 1")
    system = assemble_constraints(parametrization, problem, reference, opts.m_constraints)
    ref_poly = to_polygon(reference)
    diam = ref_poly.diameter()
    h_coarse = opts.h_coarse or diam / 40.0
    h_final = opts.h_final or diam / 80.0
    rng = np.random.default_rng(opts.seed)
    if problem == "interior":
        raw_starts = _interior_starts(ref_poly, parametrization, opts, rng)
    else:
        raw_starts = _exterior_starts(ref_poly, parametrization, opts, rng)

    def run_one(f0):
        evaluator = _Evaluator(
            parametrization, k, h_coarse, opts.m_out, opts.allow_thin, sign
        )
        try:
            f_proj = project_feasible(f0, system)
        except NoFeasibleStart:
            return None, evaluator.n_evals
        return _descend(evaluator, system, f_proj, opts), evaluator.n_evals

    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_one, raw_starts))
    else:
        outcomes = [run_one(f0) for f0 in raw_starts]

    n_evals = sum(n for _, n in outcomes)
    runs = [(i, out) for i, (out, _) in enumerate(outcomes) if out is not None]
    if not runs:
        raise NoFeasibleStart("no start point survived projection and evaluation")
    # best objective, ties to the lowest start index for determinism
    best_idx, (f_best, _, trace_best) = min(
        runs, key=lambda item: (sign * item[1][1], item[0])
    )

    shape = parametrization.shape_from_coeffs(f_best)
    m_out = opts.m_out if parametrization.kind == "fourier" else None
    try:
        final = spectrum_of(
            to_polygon(shape, m_out), k + 1, h_target=h_final, allow_thin=opts.allow_thin
        )
    except _FEM_ERRORS:
        final = spectrum_of(
            to_polygon(shape, m_out), k + 1, h_target=h_coarse, allow_thin=opts.allow_thin
        )
    return OptimizationResult(
        f_opt=f_best,
        shape=shape,
        spectrum=final,
        k=k,
        problem=problem,
        objective_trace=trace_best,
        feasibility_residual=system.residual(f_best),
        starts_used=len(runs),
        seed=opts.seed,
        n_evaluations=n_evals,
    )


def solve_interior(box, k: int, strategy, opts: OptimizeOptions | None = None):
    """Minimize mu_k over convex bodies contained in the box."""
    opts = opts or OptimizeOptions()
    parametrization = _as_parametrization(strategy)
    return _run_multistart("interior", box, k, parametrization, opts, sign=+1)


def solve_exterior(obstacle, k: int, strategy, opts: OptimizeOptions | None = None):
    """Maximize mu_k over convex bodies containing the obstacle."""
    opts = opts or OptimizeOptions()
    parametrization = _as_parametrization(strategy)
    return _run_multistart("exterior", obstacle, k, parametrization, opts, sign=-1)


# ----------------------------------------------------------------------
# one-parameter families
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ParametricFamily:
    """One-parameter family of convex bodies with a scan direction."""

    name: str
    param_range: tuple[float, float]
    direction: str  # "min" or "max"
    builder: object = field(repr=False)

    def shape(self, param: float):
        lo, hi = self.param_range
        if not lo - 1e-12 <= param <= hi + 1e-12:
            raise UnsupportedParameter(
                f"parameter {param} outside [{lo}, {hi}] for family {self.name}"
            )
        return self.builder(float(np.clip(param, lo, hi)))


def disk_square_intersection(radius: float = 1.0, m_arc: int = 256) -> ParametricFamily:
    """Disk cut by the concentric square whose corner arcs have
    half-angle theta: theta = 0 is the inscribed square, pi/4 the disk."""

    axes = np.array([0.0, 0.5, 1.0, 1.5]) * math.pi

    def build(theta: float) -> ConvexPolygon:
        d = radius * math.cos(math.pi / 4.0 - theta)
        ang = np.concatenate([node_angles(m_arc), axes])
        offs = np.concatenate([np.full(m_arc, radius), np.full(4, d)])
        return halfplane_intersection(ang, offs)

    return ParametricFamily(
        "disk-square-intersection", (0.0, math.pi / 4.0), "min", build
    )


def hull_disk_points(n_points: int, radius: float = 1.0) -> ParametricFamily:
    """Convex hull of a disk and 2 or 4 points at distance d from its
    center; d is the family parameter."""
    if n_points not in (2, 4):
        raise UnsupportedParameter("hull families support 2 or 4 points")

    def build(d: float) -> HullShape:
        pts = [(d, 0.0), (-d, 0.0)]
        if n_points == 4:
            pts += [(0.0, d), (0.0, -d)]
        return HullShape([SupportFunction.disk(radius)], pts)

    return ParametricFamily(
        f"hull-disk-points-{n_points}", (radius * 1.001, 4.0 * radius), "max", build
    )


def hull_square_points(half_side: float = 1.0) -> ParametricFamily:
    """Convex hull of the square [-a, a]^2 and two points (+-d, 0)."""
    square = ConvexPolygon.box(-half_side, -half_side, half_side, half_side)

    def build(d: float) -> HullShape:
        return HullShape([square], [(d, 0.0), (-d, 0.0)])

    return ParametricFamily(
        "hull-square-points", (half_side * 1.001, 4.0 * half_side), "max", build
    )


def octagon_family(half_side: float = 1.0) -> ParametricFamily:
    """Octagons (+-a, +-t a), (+-t a, +-a) touching all four sides of the
    square [-a, a]^2; t = 1 is the square, t = 0 the inscribed diamond."""

    def build(t: float) -> ConvexPolygon:
        a = half_side
        pts = [
            (a, t * a), (t * a, a), (-t * a, a), (-a, t * a),
            (-a, -t * a), (-t * a, -a), (t * a, -a), (a, -t * a),
        ]
        return ConvexPolygon.from_points(pts)

    return ParametricFamily("octagon", (0.0, 1.0), "min", build)


FAMILIES = {
    "disk-square-intersection": disk_square_intersection,
    "hull-disk-points-2": lambda: hull_disk_points(2),
    "hull-disk-points-4": lambda: hull_disk_points(4),
    "hull-square-points": hull_square_points,
    "octagon": octagon_family,
}


@dataclass(frozen=True)
class FamilyScan:
    family: str
    k: int
    direction: str
    params: np.ndarray
    values: np.ndarray
    best_param: float
    best_value: float


def scan_family(
    family: ParametricFamily,
    k: int,
    grid,
    *,
    h_target: float | None = None,
    m_out: int = 512,
    refine_tol: float = 0.02,
) -> FamilyScan:
    """mu_k along a parameter grid plus a golden-section refined optimum."""
    if k < 1:
        raise UnsupportedParameter("mode index k must be at least 1")
    params = np.asarray(sorted(grid), dtype=float)
    if len(params) < 3:
        raise UnsupportedParameter("grid needs at least three parameters")
    sign = 1.0 if family.direction == "min" else -1.0
    if h_target is None:
        mid_shape = family.shape(params[len(params) // 2])
        h_target = diameter_of(mid_shape) / 60.0

    cache: dict = {}

    def value(p: float) -> float:
        key = round(float(p), 14)
        if key not in cache:
            poly = to_polygon(family.shape(p), m_out)
            cache[key] = spectrum_of(poly, k, h_target=h_target).mu(k)
        return cache[key]

    values = np.array([value(p) for p in params])
    i_best = int(np.argmin(sign * values))
    lo = params[max(i_best - 1, 0)]
    hi = params[min(i_best + 1, len(params) - 1)]

    # golden-section refinement of the bracketing interval
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = sign * value(c), sign * value(d)
    span = max(b - a, 1e-30)
    while (b - a) > refine_tol * span:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = sign * value(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = sign * value(d)
    best_param = (a + b) / 2.0
    best_value = value(best_param)
    if sign * best_value > sign * values[i_best]:
        best_param, best_value = float(params[i_best]), float(values[i_best])
    return FamilyScan(
        family=family.name,
        k=k,
        direction=family.direction,
        params=params,
        values=values,
        best_param=float(best_param),
        best_value=float(best_value),
    )


# ----------------------------------------------------------------------
# self-domain diagnostics
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SelfDomainReport:
    k: int
    mode: str
    verdict: str  # "NO", "probably", "YES" or "no existence"
    reason: str
    mu_pair: tuple | None = None
    rel_gap: float | None = None
    short_side: bool | None = None
    probe_improvement: float | None = None

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "mode": self.mode,
            "verdict": self.verdict,
            "reason": self.reason,
            "mu_pair": self.mu_pair,
            "rel_gap": self.rel_gap,
            "short_side": self.short_side,
            "probe_improvement": self.probe_improvement,
        }


def _has_short_side(shape, mu_k_value: float) -> bool:
    """Whether some boundary edge is shorter than the critical chord
    2 j_{0,1}/sqrt(mu_k); smooth bodies polygonize into many short edges
    and pass automatically."""
    poly = to_polygon(shape)
    critical = 2.0 * bessel_zero(0, 1) / math.sqrt(mu_k_value)
    return bool(np.any(poly.edge_lengths() < critical))


def _is_square(poly: ConvexPolygon, rtol: float = 1e-9) -> bool:
    if len(poly) != 4:
        return False
    lengths = poly.edge_lengths()
    if np.ptp(lengths) > rtol * lengths.mean():
        return False
    e = np.roll(poly.vertices, -1, axis=0) - poly.vertices
    dots = np.abs(np.einsum("ij,ij->i", e, np.roll(e, -1, axis=0)))
    return bool(np.all(dots <= rtol * lengths.mean() ** 2))


def self_domain_check(
    shape,
    k: int,
    mode: str,
    *,
    h_target: float | None = None,
    gap_rtol: float = 1e-2,
    probe: bool = False,
    probe_opts: OptimizeOptions | None = None,
) -> SelfDomainReport:
    """Can the shape be optimal for its own interior/exterior problem?

    Interior mode tests the spectral-gap obstruction mu_k = mu_{k+1};
    exterior mode tests mu_{k-1} = mu_k, combined for k >= 3 with the
    short-side condition that lets a boundary bump raise the eigenvalue.
    Verdicts are "NO" when an obstruction holds, "YES" when a known
    certificate applies, otherwise "probably".
    """
    mode = mode.lower()
    if mode not in ("interior", "exterior"):
        raise UnsupportedParameter(f"unknown mode {mode!r}")
    if k < 1:
        raise UnsupportedParameter("mode index k must be at least 1")

    if mode == "interior" and k == 1:
        return SelfDomainReport(
            k=1,
            mode=mode,
            verdict="no existence",
            reason="mu_1 has no interior minimizer: minimizing sequences "
            "collapse to segments and the infimum pi^2/(4 diam^2) is not attained",
        )

    if h_target is None:
        h_target = diameter_of(shape) / 60.0
    spec = spectrum_of(shape, k + 1, h_target=h_target)

    probe_improvement = None
    if probe:
        popts = probe_opts or OptimizeOptions(n_starts=2, max_iter=20)
        popts = replace(popts, extra_starts=(to_polygon(shape).scaled(0.98),))
        if mode == "interior":
            res = solve_interior(shape, k, Parametrization.fourier(6), popts)
            probe_improvement = spec.mu(k) - res.mu
        else:
            res = solve_exterior(shape, k, Parametrization.fourier(6), popts)
            probe_improvement = res.mu - spec.mu(k)

    if mode == "interior":
        pair = (spec.mu(k), spec.mu(k + 1))
        gap = spec.rel_gap(k)
        if gap < gap_rtol:
            verdict, reason = "NO", (
                f"mu_{k} = mu_{k + 1} = {pair[0]:.4f}: an interior minimizer "
                f"at index {k} must have a strict gap above mu_{k}"
            )
        else:
            verdict, reason = "probably", (
                f"no multiplicity obstruction: mu_{k} = {pair[0]:.4f} < "
                f"mu_{k + 1} = {pair[1]:.4f}"
            )
        return SelfDomainReport(
            k, mode, verdict, reason, pair, gap, None, probe_improvement
        )

    # exterior mode
    if k == 1:
        area = area_of(shape)
        sw_gap = abs(area * spec.mu(1) - math.pi * bessel_deriv_zero(1, 1) ** 2)
        if sw_gap <= 0.01 * math.pi * bessel_deriv_zero(1, 1) ** 2:
            return SelfDomainReport(
                1,
                mode,
                "YES",
                "area-normalized mu_1 is extremal, so no superset can "
                "exceed it (disk certificate)",
                (spec.mu(0), spec.mu(1)),
                None,
                None,
                probe_improvement,
            )
        if _is_square(to_polygon(shape)):
            return SelfDomainReport(
                1,
                mode,
                "YES",
                "the square maximizes mu_1 among its convex supersets",
                (spec.mu(0), spec.mu(1)),
                None,
                None,
                probe_improvement,
            )
        return SelfDomainReport(
            1,
            mode,
            "probably",
            "no certificate applies; mu_1 maximality over supersets is open "
            "for this obstacle",
            (spec.mu(0), spec.mu(1)),
            None,
            None,
            probe_improvement,
        )

    pair = (spec.mu(k - 1), spec.mu(k))
    gap = spec.rel_gap(k - 1)
    degenerate = gap < gap_rtol
    if k == 2:
        if degenerate:
            verdict, reason = "NO", (
                f"mu_1 = mu_2 = {pair[1]:.4f}: an exterior maximizer at "
                "index 2 must have mu_1 < mu_2"
            )
        else:
            verdict, reason = "probably", (
                f"no obstruction: mu_1 = {pair[0]:.4f} < mu_2 = {pair[1]:.4f}"
            )
        return SelfDomainReport(
            k, mode, verdict, reason, pair, gap, None, probe_improvement
        )

    short = _has_short_side(shape, spec.mu(k))
    if degenerate and short:
        verdict, reason = "NO", (
            f"mu_{k - 1} = mu_{k} = {pair[1]:.4f} and the boundary has a "
            f"piece shorter than 2 j01/sqrt(mu_{k}): a boundary bump "
            "raises the eigenvalue"
        )
    elif degenerate:
        verdict, reason = "probably", (
            f"mu_{k - 1} = mu_{k} but every side is at least the critical "
            "chord, so the bump construction does not apply"
        )
    else:
        verdict, reason = "probably", (
            f"no obstruction: mu_{k - 1} = {pair[0]:.4f} < mu_{k} = {pair[1]:.4f}"
        )
    return SelfDomainReport(
        k, mode, verdict, reason, pair, gap, short, probe_improvement
    )
