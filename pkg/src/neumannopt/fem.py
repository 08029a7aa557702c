"""P1 finite-element Neumann eigensolver.

Assembles sparse stiffness and mass matrices on a triangle mesh and
solves the generalized eigenproblem K u = mu M u with a shift-inverted
Lanczos iteration.  Natural boundary conditions need no extra work, so
the discrete spectrum starts at mu_0 ~ 0 with the constant mode.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DegenerateMass, SolverFailure
from .geometry import ConvexPolygon
from .mesh import TriangleMesh, refine, triangulate
from .support import to_polygon

# ARPACK keeps state in module globals and is not reentrant
_ARPACK_LOCK = threading.Lock()

# eigenvalues closer than this relative gap are treated as numerically
# multiple
MULTIPLICITY_RTOL = 1e-3
_RESIDUAL_RTOL = 1e-8


def assemble_p1(mesh: TriangleMesh):
    """Stiffness and mass matrices for P1 elements, as CSR."""
    p = mesh.corners()
    areas = mesh.areas()
    if np.any(areas <= 0):
        raise DegenerateMass("mesh contains zero-area or flipped triangles")
    # edge vectors opposite each local vertex; hat gradients are their
    # rotations scaled by 1/(2A)
    e = np.stack([p[:, 2] - p[:, 1], p[:, 0] - p[:, 2], p[:, 1] - p[:, 0]], axis=1)
    k_local = np.einsum("tid,tjd->tij", e, e) / (4.0 * areas)[:, None, None]
    m_base = (np.ones((3, 3)) + np.eye(3)) / 12.0
    m_local = areas[:, None, None] * m_base[None, :, :]

    tri = mesh.triangles
    rows = np.repeat(tri, 3, axis=1).ravel()
    cols = np.tile(tri, (1, 3)).ravel()
    n = mesh.n_nodes
    stiffness = sp.coo_matrix((k_local.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    mass = sp.coo_matrix((m_local.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    return stiffness, mass


@dataclass(frozen=True)
class Spectrum:
    """Ascending Neumann eigenvalues mu_0..mu_kmax with solver metadata."""

    values: np.ndarray
    n_dof: int
    h_target: float
    residual: float
    _vectors: np.ndarray | None = field(default=None, repr=False, compare=False)

    def mu(self, k: int) -> float:
        if not 0 <= k < len(self.values):
            raise IndexError(f"mode index {k} outside computed range")
        return float(self.values[k])

    @property
    def kmax(self) -> int:
        return len(self.values) - 1

    def rel_gap(self, k: int) -> float:
        """Relative gap between mu_k and mu_{k+1}."""
        lo, hi = self.mu(k), self.mu(k + 1)
        return (hi - lo) / max(abs(hi), 1e-300)

    def is_multiple(self, k: int, rtol: float = MULTIPLICITY_RTOL) -> bool:
        """Whether mu_k is part of a numerically multiple cluster."""
        close_up = k + 1 <= self.kmax and self.rel_gap(k) < rtol
        close_down = k >= 1 and self.rel_gap(k - 1) < rtol
        return close_up or close_down

    def multiplicity_flags(self, rtol: float = MULTIPLICITY_RTOL) -> np.ndarray:
        return np.array([self.is_multiple(k, rtol) for k in range(len(self.values))])


def _deterministic_start(n: int) -> np.ndarray:
    rng = np.random.default_rng(1234567891)
    return rng.standard_normal(n)


def _max_residual(stiffness, mass, vals, vecs) -> float:
    resid = 0.0
    for j in range(len(vals)):
        u = vecs[:, j]
        num = np.linalg.norm(stiffness @ u - vals[j] * (mass @ u))
        den = np.linalg.norm(mass @ u)
        resid = max(resid, num / max(den, 1e-300))
    return float(resid)


def _polish(stiffness, mass, vals, vecs, scale: float):
    """Refine eigenpairs with one shifted inverse-iteration step plus a
    Rayleigh-quotient update each."""
    vals = vals.copy()
    vecs = vecs.copy()
    for j in range(len(vals)):
        shift = vals[j] - max(1e-8 * abs(vals[j]), 1e-10 / scale**2)
        try:
            lu = spla.splu((stiffness - shift * mass).tocsc())
            w = lu.solve(mass @ vecs[:, j])
        except RuntimeError:
            continue
        norm = np.sqrt(abs(w @ (mass @ w)))
        if not np.isfinite(norm) or norm == 0.0:
            continue
        w = w / norm
        mu = (w @ (stiffness @ w)) / (w @ (mass @ w))
        old = np.linalg.norm(stiffness @ vecs[:, j] - vals[j] * (mass @ vecs[:, j]))
        new = np.linalg.norm(stiffness @ w - mu * (mass @ w))
        if new < old:
            vals[j] = mu
            vecs[:, j] = w
    order = np.argsort(vals)
    return vals[order], vecs[:, order]


def solve_spectrum(mesh: TriangleMesh, kmax: int) -> Spectrum:
    """First kmax+1 Neumann eigenvalues of the mesh."""
    if kmax < 0:
        raise SolverFailure("kmax must be nonnegative")
    stiffness, mass = assemble_p1(mesh)
    n = mesh.n_nodes
    want = kmax + 1
    scale = max(np.ptp(mesh.nodes[:, 0]), np.ptp(mesh.nodes[:, 1]))
    sigma = -1e-6 / scale**2

    if n < max(3 * want, 60):
        vals, vecs = scipy.linalg.eigh(
            stiffness.toarray(), mass.toarray(), subset_by_index=[0, min(want, n) - 1]
        )
        if len(vals) < want:
            raise SolverFailure(
                f"mesh supports only {len(vals)} modes, requested {want}"
            )
    else:
        try:
            with _ARPACK_LOCK:
                vals, vecs = spla.eigsh(
                    stiffness,
                    k=want,
                    M=mass,
                    sigma=sigma,
                    which="LM",
                    v0=_deterministic_start(n),
                    maxiter=4000,
                )
        except (spla.ArpackNoConvergence, RuntimeError) as exc:
            raise SolverFailure(f"sparse eigensolver failed: {exc}") from exc
    order = np.argsort(vals)
    vals = vals[order]
    vecs = vecs[:, order]

    tol = _RESIDUAL_RTOL * max(1.0, abs(vals[-1]))
    resid = _max_residual(stiffness, mass, vals, vecs)
    if resid > tol:
        # one shifted inverse-iteration pass per eigenpair recovers the
        # accuracy lost to ill conditioning on very anisotropic meshes
        vals, vecs = _polish(stiffness, mass, vals, vecs, scale)
        resid = _max_residual(stiffness, mass, vals, vecs)
    if resid > tol:
        raise SolverFailure(f"eigenpair residual {resid:.2e} above tolerance")

    vals = vals.copy()
    # the constant mode must come out as an honest numerical zero
    mu0_tol = _RESIDUAL_RTOL * max(1.0, abs(vals[min(1, len(vals) - 1)]))
    if abs(vals[0]) > mu0_tol:
        raise SolverFailure(f"constant-mode eigenvalue {vals[0]:.2e} is not zero")
    vals[0] = max(vals[0], 0.0)
    if np.any(np.diff(vals) < -1e-9 * max(abs(vals[-1]), 1.0)):
        raise SolverFailure("computed eigenvalues are not sorted")
    return Spectrum(vals, n, mesh.h_target, float(resid), vecs)


def spectrum_of(
    shape,
    kmax: int,
    *,
    h_target: float | None = None,
    m_out: int | None = None,
    n_refine: int = 0,
    allow_thin: bool = False,
) -> Spectrum:
    """Polygonize, mesh and solve in one call."""
    poly = shape if isinstance(shape, ConvexPolygon) else to_polygon(shape, m_out)
    mesh = triangulate(poly, h_target, allow_thin=allow_thin)
    for _ in range(n_refine):
        mesh = refine(mesh)
    return solve_spectrum(mesh, kmax)


def mu_k(
    shape,
    k: int,
    *,
    h_target: float | None = None,
    m_out: int | None = None,
    n_refine: int = 0,
    allow_thin: bool = False,
) -> float:
    """k-th nonzero Neumann eigenvalue of a shape."""
    if k < 1:
        raise SolverFailure("mode index k must be at least 1")
    spec = spectrum_of(
        shape,
        k + 1,
        h_target=h_target,
        m_out=m_out,
        n_refine=n_refine,
        allow_thin=allow_thin,
    )
    return spec.mu(k)
