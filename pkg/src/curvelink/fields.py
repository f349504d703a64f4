"""Biot-Savart and Green's operators, electric fields and the differential
operators used to check Maxwell's equations on S^3 and H^3.

Vector fields are plain callables mapping an array of points (..., dim) to
an array of tangent vectors of the same shape.  Curl, divergence and
gradient are computed from their integral definitions: circulation around
small geodesic circles, flux through small geodesic spheres and geodesic
central differences.  No coordinate charts are involved.

Volumetric integrals use a product grid in geodesic polar coordinates
(alpha, theta, phi) around a chosen centre: Gauss-Legendre in alpha and in
cos(theta), uniform in phi.  Centring the grid at the evaluation point puts
the kernel singularity at the polar origin, where the volume weight
sin^2(alpha) cancels it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curves import CurveSamples
from .errors import DomainError, PreconditionError, SingularityError
from .kernels import KernelId, _derivs, as_radial
from .linking import LinkFormat
from .parallel import ordered_map
from .space import (ANTIPODAL_TOL, Space, base_point, cross, distance, exp_map,
                    grad_distance_y, inner, parallel_transport, project_to_tangent,
                    quat_left_translate, rdot, tangent_frame)

VectorFieldFn = Callable[[np.ndarray], np.ndarray]
PAIR_BLOCK = 1 << 18
CURL_NODES = 64
DIV_THETA = 16
DIV_PHI = 32
CURVED_H = 0.02
GRAD_H = 1e-3
SKIP_RADIUS = 1e-6


# -- volume grids ---------------------------------------------------------------------

@dataclass(frozen=True)
class VolumeGrid:
    space: Space
    nodes: np.ndarray
    weights: np.ndarray
    center: np.ndarray
    shape: tuple
    radius: float

    @property
    def volume(self) -> float:
        return float(np.sum(self.weights))


@dataclass(frozen=True)
class _Template:
    radial: np.ndarray      # cos / cosh of alpha per node (unused in R^3)
    lateral: np.ndarray     # sin / sinh of alpha per node (alpha in R^3)
    dirs: np.ndarray        # unit directions in the tangent frame, (N, 3)
    weights: np.ndarray


def _template(space: Space, n_alpha, n_theta, n_phi, R) -> _Template:
    ga, wa = np.polynomial.legendre.leggauss(n_alpha)
    alpha = 0.5 * R * (ga + 1.0)
    wa = 0.5 * R * wa
    mu, wmu = np.polynomial.legendre.leggauss(n_theta)
    phi = (np.arange(n_phi) + 0.5) * (2.0 * np.pi / n_phi)
    st = np.sqrt(1.0 - mu * mu)
    dirs = np.stack([
        st[:, None] * np.cos(phi)[None, :],
        st[:, None] * np.sin(phi)[None, :],
        np.broadcast_to(mu[:, None], (n_theta, n_phi)),
    ], axis=-1).reshape(-1, 3)
    wdir = np.repeat(wmu, n_phi) * (2.0 * np.pi / n_phi)
    if space is Space.S3:
        radial, lateral, jac = np.cos(alpha), np.sin(alpha), np.sin(alpha) ** 2
    elif space is Space.H3:
        radial, lateral, jac = np.cosh(alpha), np.sinh(alpha), np.sinh(alpha) ** 2
    else:
        radial, lateral, jac = np.ones_like(alpha), alpha, alpha ** 2
    m = dirs.shape[0]
    return _Template(np.repeat(radial, m), np.repeat(lateral, m), np.tile(dirs, (n_alpha, 1)),
                     ((wa * jac)[:, None] * wdir[None, :]).reshape(-1))


def _place(space: Space, t: _Template, y) -> np.ndarray:
    """Template nodes around each point of y: shape y.shape[:-1] + (N, dim)."""
    y = np.asarray(y, dtype=float)
    if space is Space.R3:
        return y[..., None, :] + t.lateral[:, None] * t.dirs
    E = tangent_frame(space, y)                                   # (..., 3, dim)
    return t.radial[:, None] * y[..., None, :] + t.lateral[:, None] * (t.dirs @ E)


def _extent(space: Space, r_max) -> float:
    return np.pi if space is Space.S3 else float(r_max)


def volume_grid(space, center=None, n_alpha: int = 48, n_theta: int = 24, n_phi: int = 48,
                r_max: float = 6.0) -> VolumeGrid:
    """Polar product grid about ``center`` (all of S^3, or a ball of radius r_max)."""
    space = Space.parse(space)
    center = base_point(space) if center is None else np.asarray(center, dtype=float)
    R = _extent(space, r_max)
    t = _template(space, n_alpha, n_theta, n_phi, R)
    return VolumeGrid(space, _place(space, t, center), t.weights, center,
                      (n_alpha, n_theta, n_phi), R)


@dataclass(frozen=True)
class CenteredGrid:
    """A polar grid rebuilt around every evaluation point.

    Fields evaluated this way keep the kernel singularity at the polar
    origin wherever they are sampled, which finite-difference curl and
    divergence of volumetric fields rely on.
    """
    space: Space
    n_alpha: int = 48
    n_theta: int = 24
    n_phi: int = 48
    r_max: float = 6.0

    def __post_init__(self):
        object.__setattr__(self, "space", Space.parse(self.space))
        object.__setattr__(self, "_t", _template(self.space, self.n_alpha, self.n_theta, self.n_phi,
                                                 _extent(self.space, self.r_max)))

    @property
    def n_nodes(self) -> int:
        return self._t.weights.shape[0]

    def at(self, y) -> VolumeGrid:
        y = np.asarray(y, dtype=float)
        return VolumeGrid(self.space, _place(self.space, self._t, y), self._t.weights, y,
                          (self.n_alpha, self.n_theta, self.n_phi), _extent(self.space, self.r_max))

    def nodes_for(self, yb) -> np.ndarray:
        return _place(self.space, self._t, yb)


def region_volume(space, radius: float) -> float:
    space = Space.parse(space)
    if space is Space.S3:
        return 2.0 * np.pi ** 2
    if space is Space.H3:
        return np.pi * (np.sinh(2 * radius) - 2 * radius)
    return 4.0 * np.pi * radius ** 3 / 3.0


def _blocks(m: int, n_nodes: int):
    rows = max(1, PAIR_BLOCK // max(n_nodes, 1))
    return [slice(i, min(i + rows, m)) for i in range(0, m, rows)]


def _batched(y, fn, n_nodes, threads=None):
    """Apply fn to row blocks of y (flattened) and reassemble."""
    y = np.asarray(y, dtype=float)
    flat = y.reshape(-1, y.shape[-1])
    parts = ordered_map(lambda sl: fn(flat[sl]), _blocks(flat.shape[0], n_nodes), threads)
    out = np.concatenate(parts, axis=0)
    return out.reshape(y.shape[:-1] + out.shape[1:])


def _kernel_grad(space: Space, kid: KernelId, x, y):
    """grad_y phi(alpha(x, y)) without checks; zero at (near-)coincident or antipodal pairs."""
    a = distance(space, x, y)
    with np.errstate(invalid="ignore", divide="ignore"):
        fp = _derivs(kid, np.maximum(a, 1e-300), need_value=False)[1]
        g = fp[..., None] * grad_distance_y(space, x, y, check=False)
    bad = a < SKIP_RADIUS
    if space is Space.S3:
        bad = bad | (1.0 + inner(space, x, y) < ANTIPODAL_TOL)
    return np.where(bad[..., None], 0.0, g)


def _kernel_value(kid: KernelId, x, y, space):
    a = distance(space, x, y)
    with np.errstate(invalid="ignore", divide="ignore"):
        v = _derivs(kid, np.maximum(a, 1e-300))[0]
    return np.where(a < SKIP_RADIUS, 0.0, v)


# -- finite-difference operators --------------------------------------------------------

def _frame(space: Space, y):
    return tangent_frame(space, y)


def fd_grad(f: Callable, space, y, h: float = GRAD_H):
    """Gradient of a scalar function by 4-point geodesic central differences.

    ``f`` maps points (..., dim) to scalars (...); ``y`` may be a batch.
    """
    space = Space.parse(space)
    y = np.asarray(y, dtype=float)
    E = _frame(space, y)                          # (..., 3, dim)
    steps = np.array([-2.0, -1.0, 1.0, 2.0]) * h
    coef = np.array([1.0, -8.0, 8.0, -1.0]) / (12.0 * h)
    pts = exp_map(space, y[..., None, None, :], steps[:, None, None] * E[..., None, :, :])
    vals = np.asarray(f(pts))                     # (..., 4, 3)
    d = np.einsum("k,...ki->...i", coef, vals)
    return np.einsum("...i,...id->...d", d, E)


def _circle_points(space: Space, y, h, n: int = CURL_NODES):
    """Geodesic circles of radius h about y, one per frame axis.

    Returns points and d/dphi tangents with shape (3, n, dim); circle i
    lies in the plane of (E_{i+1}, E_{i+2}), oriented so its normal is E_i.
    """
    E = _frame(space, y)
    phi = np.arange(n) * (2.0 * np.pi / n)
    c, s = np.cos(phi)[None, :, None], np.sin(phi)[None, :, None]
    a = E[[1, 2, 0]][:, None, :]
    b = E[[2, 0, 1]][:, None, :]
    if space is Space.R3:
        return y + h * (c * a + s * b), h * (-s * a + c * b), E
    if space is Space.S3:
        r0, r1 = np.cos(h), np.sin(h)
    else:
        r0, r1 = np.cosh(h), np.sinh(h)
    return r0 * y + r1 * (c * a + s * b), r1 * (-s * a + c * b), E


def _disk_area(space: Space, h):
    if space is Space.S3:
        return 2.0 * np.pi * (1.0 - np.cos(h))
    if space is Space.H3:
        return 2.0 * np.pi * (np.cosh(h) - 1.0)
    return np.pi * h * h


def fd_curl(F: VectorFieldFn, space, y, h: float = CURVED_H):
    """Curl from circulation per unit area, Richardson-extrapolated in h."""
    space = Space.parse(space)
    y = np.asarray(y, dtype=float)
    if not (1e-4 <= h <= 1e-1):
        raise DomainError("fd_curl step must lie in [1e-4, 1e-1]")
    pts1, tan1, E = _circle_points(space, y, h)
    pts2, tan2, _ = _circle_points(space, y, h / 2)
    vals = np.asarray(F(np.stack([pts1, pts2])))
    if not np.all(np.isfinite(vals)):
        raise SingularityError("field is singular inside the curl disk")
    dphi = 2.0 * np.pi / CURL_NODES
    circ1 = np.sum(rdot(space, vals[0], tan1), axis=1) * dphi
    circ2 = np.sum(rdot(space, vals[1], tan2), axis=1) * dphi
    c1 = circ1 / _disk_area(space, h)
    c2 = circ2 / _disk_area(space, h / 2)
    comp = (4.0 * c2 - c1) / 3.0
    return comp @ E


def _sphere_points(space: Space, y, h):
    E = _frame(space, y)
    mu, wmu = np.polynomial.legendre.leggauss(DIV_THETA)
    phi = (np.arange(DIV_PHI) + 0.5) * (2.0 * np.pi / DIV_PHI)
    st = np.sqrt(1.0 - mu * mu)
    n = (st[:, None, None] * np.cos(phi)[None, :, None] * E[0]
         + st[:, None, None] * np.sin(phi)[None, :, None] * E[1]
         + mu[:, None, None] * E[2]).reshape(-1, space.dim)
    w = np.repeat(wmu, DIV_PHI) * (2.0 * np.pi / DIV_PHI)
    if space is Space.R3:
        return y + h * n, n, w * h * h
    if space is Space.S3:
        pts = np.cos(h) * y + np.sin(h) * n
        normal = -np.sin(h) * y + np.cos(h) * n
        return pts, normal, w * np.sin(h) ** 2
    pts = np.cosh(h) * y + np.sinh(h) * n
    normal = np.sinh(h) * y + np.cosh(h) * n
    return pts, normal, w * np.sinh(h) ** 2


def _ball_volume(space: Space, h):
    if space is Space.S3:
        return 2.0 * np.pi * (h - np.sin(h) * np.cos(h))
    if space is Space.H3:
        return 2.0 * np.pi * (np.sinh(h) * np.cosh(h) - h)
    return 4.0 * np.pi * h ** 3 / 3.0


def fd_div(F: VectorFieldFn, space, y, h: float = CURVED_H) -> float:
    """Divergence from flux per unit volume, Richardson-extrapolated in h."""
    space = Space.parse(space)
    y = np.asarray(y, dtype=float)
    if not (1e-4 <= h <= 1e-1):
        raise DomainError("fd_div step must lie in [1e-4, 1e-1]")
    p1, n1, w1 = _sphere_points(space, y, h)
    p2, n2, w2 = _sphere_points(space, y, h / 2)
    vals = np.asarray(F(np.stack([p1, p2])))
    if not np.all(np.isfinite(vals)):
        raise SingularityError("field is singular inside the divergence ball")
    d1 = np.sum(rdot(space, vals[0], n1) * w1) / _ball_volume(space, h)
    d2 = np.sum(rdot(space, vals[1], n2) * w2) / _ball_volume(space, h / 2)
    return float((4.0 * d2 - d1) / 3.0)


# -- line currents ---------------------------------------------------------------------

def _line_kernel(fmt: LinkFormat) -> KernelId:
    return {LinkFormat.S3_LT: KernelId.S3_PHI0, LinkFormat.S3_PT: KernelId.S3_PT_PHI1,
            LinkFormat.H3_PT: KernelId.H3_PHI1, LinkFormat.R3_GAUSS: KernelId.R3_PHI0}[fmt]


def bs_line_field(fmt, K: CurveSamples, min_distance: float = 1e-3, threads=None) -> VectorFieldFn:
    """Magnetic field of a unit current along the sampled closed curve K."""
    fmt = LinkFormat.parse(fmt)
    space = fmt.space
    if K.space is not space:
        raise DomainError(f"format {fmt.value} needs a curve in {space.value}")
    kid = _line_kernel(fmt)
    ds = K.parameter_step
    xs, vs = K.positions[None, :, :], K.velocities[None, :, :]

    def block(yb):
        y = yb[:, None, :]
        if space is Space.R3:
            d = y - xs
            r = np.linalg.norm(d, axis=-1, keepdims=True)
            return np.sum(np.cross(vs, d) / r ** 3, axis=1) * ds / (4.0 * np.pi)
        if fmt is LinkFormat.S3_LT:
            moved = quat_left_translate(xs, y, vs)
        else:
            moved = parallel_transport(space, xs, y, vs, check=False)
        g = _kernel_grad(space, kid, xs, y)
        out = np.sum(cross(space, y, moved, g), axis=1)
        if fmt is LinkFormat.S3_LT:
            out = out - np.sum(moved, axis=1) / (4.0 * np.pi ** 2)
        return out * ds

    def field(y):
        y = np.asarray(y, dtype=float)
        flat = y.reshape(-1, y.shape[-1])
        dmin = np.min(distance(space, flat[:, None, :], K.positions[None, :, :]))
        if dmin < min_distance:
            raise PreconditionError(f"evaluation point within {dmin:.3g} of the current")
        return _batched(y, block, K.n, threads)

    return field


def bs_line(fmt, K: CurveSamples, y, min_distance: float = 1e-3):
    return bs_line_field(fmt, K, min_distance)(y)


# -- volumetric operators -------------------------------------------------------------

def _translate(fmt_lt: bool, space, x, y, v):
    if fmt_lt:
        return quat_left_translate(x, y, v)
    return parallel_transport(space, x, y, v, check=False)


def _node_source(space: Space, f: Callable, grid):
    """(yb -> (nodes, weights, f(nodes)), node count) for a fixed or centred grid."""
    if grid.space is not space:
        raise DomainError("grid and space disagree")
    if isinstance(grid, VolumeGrid):
        xs = grid.nodes[None]
        data = (xs, grid.weights[None, :, None], np.asarray(f(grid.nodes), dtype=float)[None])
        return (lambda yb: data), grid.nodes.shape[0]
    w = grid._t.weights[None, :, None]

    def get(yb):
        xs = grid.nodes_for(yb)
        return xs, w, np.asarray(f(xs), dtype=float)

    return get, grid.n_nodes


def _evaluate(y, block, source, n_nodes, threads=None):
    y = np.asarray(y, dtype=float)
    flat = y.reshape(-1, y.shape[-1])

    def run(sl):
        yb = flat[sl]
        return block(yb, *source(yb))

    parts = ordered_map(run, _blocks(flat.shape[0], n_nodes), threads)
    out = np.concatenate(parts, axis=0)
    return out.reshape(y.shape[:-1] + out.shape[1:])


def bs_volume_field(space, fmt, V: VectorFieldFn, grid=None, threads=None,
                    gradient_term: bool = True) -> VectorFieldFn:
    """Biot-Savart field of the current V.

    ``grid`` is a fixed ``VolumeGrid`` or a ``CenteredGrid`` (the default),
    which recentres at every evaluation point.  The smooth part V(y) of the
    transported current is subtracted inside the singular integral; it
    contributes nothing because the gradient of a radial kernel integrates
    to zero over the whole space.  ``gradient_term=False`` drops the
    curl-free last term of the LT formula.
    """
    space = Space.parse(space)
    fmt = LinkFormat.parse(fmt)
    if fmt.space is not space:
        raise DomainError(f"format {fmt.value} does not belong to {space.value}")
    grid = CenteredGrid(space) if grid is None else grid
    source, n = _node_source(space, V, grid)
    lt = fmt is LinkFormat.S3_LT
    kid = _line_kernel(fmt)

    def main_block(yb, xs, w, vx):
        y = yb[:, None, :]
        vy = np.asarray(V(yb), dtype=float)[:, None, :]
        if space is Space.R3:
            d = y - xs
            r2 = np.sum(d * d, axis=-1, keepdims=True)
            with np.errstate(invalid="ignore", divide="ignore"):
                integrand = np.cross(vx - vy, d) / r2 ** 1.5
            integrand = np.where(r2 < SKIP_RADIUS ** 2, 0.0, integrand)
            return np.sum(integrand * w, axis=1) / (4.0 * np.pi)
        moved = _translate(lt, space, xs, y, vx)
        g = _kernel_grad(space, kid, xs, y)
        out = np.sum(cross(space, y, moved - vy, g) * w, axis=1)
        if lt:
            out = out - np.sum(moved * w, axis=1) / (4.0 * np.pi ** 2)
        return out

    def s_block(yb, xs, w, vx):
        y = yb[:, None, :]
        moved = quat_left_translate(xs, y, vx)
        g = _kernel_grad(space, KernelId.S3_LT_PHI1, xs, y)
        return np.sum(rdot(space, moved, g) * w[..., 0], axis=1)

    def field(y):
        y = np.asarray(y, dtype=float)
        out = _evaluate(y, main_block, source, n, threads)
        if lt and gradient_term:
            out = out + 2.0 * fd_grad(lambda p: _evaluate(p, s_block, source, n, threads), space, y)
        return out

    return field


def bs_volume(space, fmt, V: VectorFieldFn, grid=None, y=None, threads=None):
    """Biot-Savart field at y (one point or a batch)."""
    return bs_volume_field(space, fmt, V, grid, threads)(y)


def green_lt_field(V: VectorFieldFn, grid=None, threads=None, gradient_term: bool = True) -> VectorFieldFn:
    """Vector Green's operator on S^3 in left-translation format."""
    space = Space.S3
    grid = CenteredGrid(space) if grid is None else grid
    source, n = _node_source(space, V, grid)
    phi0_total = 2.0 * np.pi ** 2 * (-1.0 / (8.0 * np.pi ** 2))

    def main_block(yb, xs, w, vx):
        y = yb[:, None, :]
        moved = quat_left_translate(xs, y, vx)
        vy = np.asarray(V(yb), dtype=float)
        phi0 = _kernel_value(KernelId.S3_PHI0, xs, y, space)[..., None]
        t1 = np.sum((moved - vy[:, None, :]) * phi0 * w, axis=1) + phi0_total * vy
        g1 = _kernel_grad(space, KernelId.S3_LT_PHI1, xs, y)
        t2 = 2.0 * np.sum(cross(space, y, moved, g1) * w, axis=1)
        return t1 + t2

    def s_block(yb, xs, w, vx):
        y = yb[:, None, :]
        moved = quat_left_translate(xs, y, vx)
        g = _kernel_grad(space, KernelId.S3_LT_PHI2, xs, y)
        return np.sum(rdot(space, moved, g) * w[..., 0], axis=1)

    def field(y):
        y = np.asarray(y, dtype=float)
        out = _evaluate(y, main_block, source, n, threads)
        if gradient_term:
            out = out + 4.0 * fd_grad(lambda p: _evaluate(p, s_block, source, n, threads), space, y)
        return out

    return field


def green_lt_s3(V: VectorFieldFn, grid=None, y=None, threads=None):
    return green_lt_field(V, grid, threads)(y)


def green_pt_field(space, V: VectorFieldFn, grid=None, threads=None,
                   gradient_term: bool = True) -> VectorFieldFn:
    """Vector Green's operator in parallel-transport format (S^3 or H^3)."""
    space = Space.parse(space)
    if space is Space.R3:
        raise DomainError("parallel-transport Green's operator is defined on S^3 and H^3")
    k2 = KernelId.S3_PT_PHI2 if space is Space.S3 else KernelId.H3_PHI2
    k3 = KernelId.S3_PT_PHI3 if space is Space.S3 else KernelId.H3_PHI3
    grid = CenteredGrid(space) if grid is None else grid
    source, n = _node_source(space, V, grid)

    def main_block(yb, xs, w, vx):
        y = yb[:, None, :]
        moved = parallel_transport(space, xs, y, vx, check=False)
        phi2 = _kernel_value(k2, xs, y, space)[..., None]
        if space is Space.S3:
            phi2 = np.where((1.0 + inner(space, xs, y) < ANTIPODAL_TOL)[..., None], 0.0, phi2)
        return np.sum(moved * phi2 * w, axis=1)

    def s_block(yb, xs, w, vx):
        y = yb[:, None, :]
        moved = parallel_transport(space, xs, y, vx, check=False)
        g = _kernel_grad(space, k3, xs, y)
        return np.sum(rdot(space, moved, g) * w[..., 0], axis=1)

    def field(y):
        y = np.asarray(y, dtype=float)
        out = _evaluate(y, main_block, source, n, threads)
        if gradient_term:
            out = out + fd_grad(lambda p: _evaluate(p, s_block, source, n, threads), space, y)
        return out

    return field


def scalar_green(space, f: Callable, grid=None, threads=None) -> Callable:
    """y -> integral of f(x) phi0(x, y) dx (f of zero mean on S^3)."""
    space = Space.parse(space)
    kid = {Space.S3: KernelId.S3_PHI0, Space.H3: KernelId.H3_PHI0, Space.R3: KernelId.R3_PHI0}[space]
    grid = CenteredGrid(space) if grid is None else grid
    source, n = _node_source(space, f, grid)
    # on S^3 the integral of phi0 over the whole sphere is 2 pi^2 [phi0] = -1/4
    subtract = space is Space.S3

    def block(yb, xs, w, fx):
        y = yb[:, None, :]
        phi = _kernel_value(kid, xs, y, space)
        if subtract:
            fy = np.asarray(f(yb), dtype=float)
            return np.sum((fx - fy[:, None]) * phi * w[..., 0], axis=1) - 0.25 * fy
        return np.sum(fx * phi * w[..., 0], axis=1)

    return lambda y: _evaluate(y, block, source, n, threads)


def electric_field_fn(space, rho: Callable, grid=None, threads=None,
                      mean_tol: float = 1e-6) -> VectorFieldFn:
    space = Space.parse(space)
    grid = CenteredGrid(space) if grid is None else grid
    if grid.space is not space:
        raise DomainError("grid and space disagree")
    if space is Space.S3:
        g = grid if isinstance(grid, VolumeGrid) else grid.at(base_point(space))
        vals = np.asarray(rho(g.nodes), dtype=float)
        mean = float(np.sum(vals * g.weights) / np.sum(g.weights))
        scale = max(1.0, float(np.max(np.abs(vals))))
        if abs(mean) > mean_tol * scale:
            raise PreconditionError(f"charge density on S^3 must have mean zero (got {mean:.3g})")
    pot = scalar_green(space, rho, grid, threads)
    return lambda y: fd_grad(pot, space, y)


def electric_field(space, rho: Callable, grid=None, y=None, threads=None):
    return electric_field_fn(space, rho, grid, threads)(y)


# -- Key Lemma and Maxwell ------------------------------------------------------------

def key_lemma_terms(space, x, v, y, kernel, h: float = CURVED_H):
    """(LHS, RHS) of the Key Lemma at y for the point current v at x."""
    space = Space.parse(space)
    if space is Space.R3:
        raise DomainError("the Key Lemma is stated on S^3 and H^3")
    x, v, y = (np.asarray(t, dtype=float) for t in (x, v, y))
    rad = as_radial(kernel)
    a = float(distance(space, x, y))
    if a < 4 * h or (space is Space.S3 and np.pi - a < 4 * h):
        raise SingularityError("y too close to x (or to -x)")
    sgn = 1.0 if space is Space.S3 else -1.0

    def F1(p):
        ap = distance(space, x, p)
        fp = rad.derivs(ap)[1]
        g = fp[..., None] * grad_distance_y(space, x, p, check=False)
        return cross(space, p, parallel_transport(space, x, p, v, check=False), g)

    def g2(p):
        ap = distance(space, x, p)
        f0, f1, _ = rad.derivs(ap)
        if space is Space.S3:
            d = -np.sin(ap) * f0 + np.cos(ap) * f1
        else:
            d = np.sinh(ap) * f0 + np.cosh(ap) * f1
        gx = grad_distance_y(space, p, np.broadcast_to(x, p.shape), check=False)
        return d * rdot(space, v, gx)

    lhs = fd_curl(F1, space, y, h) - fd_grad(g2, space, y)
    f0, f1, f2 = (float(t) for t in rad.derivs(np.asarray(a)))
    lap = f2 + 2.0 * (np.cos(a) / np.sin(a) if space is Space.S3 else np.cosh(a) / np.sinh(a)) * f1
    rhs = (lap - sgn * f0) * project_to_tangent(space, y, v)
    return lhs, rhs


def key_lemma_residual(space, x, v, y, kernel, h: float = CURVED_H) -> float:
    space = Space.parse(space)
    if not np.any(np.asarray(v)):
        return 0.0
    lhs, rhs = key_lemma_terms(space, x, v, y, kernel, h)
    return float(np.sqrt(max(rdot(space, lhs - rhs, lhs - rhs), 0.0)))


def maxwell_residual(space, fmt, V, grid=None, y=None, threads=None) -> float:
    """Size of curl B - V - grad int V . grad_x phi0 at y.

    For a line current (``CurveSamples``) the current is divergence-free and
    vanishes off the wire, so this is just |curl B(y)|.  Volumetric fields
    must be evaluated on a ``CenteredGrid`` (the default) for the curl to
    see the singular part of the integral.  The LT gradient term is left
    out since its curl vanishes identically.
    """
    space = Space.parse(space)
    y = np.asarray(y, dtype=float)
    if isinstance(V, CurveSamples):
        B = bs_line_field(fmt, V, threads=threads)
        c = fd_curl(B, space, y)
        return float(np.sqrt(max(rdot(space, c, c), 0.0)))
    grid = CenteredGrid(space) if grid is None else grid
    B = bs_volume_field(space, fmt, V, grid, threads, gradient_term=False)
    kid = {Space.S3: KernelId.S3_PHI0, Space.H3: KernelId.H3_PHI0, Space.R3: KernelId.R3_PHI0}[space]
    source, n = _node_source(space, V, grid)

    def t_block(yb, xs, w, vx):
        gx = _kernel_grad(space, kid, yb[:, None, :], xs)     # gradient in the x slot
        return np.sum(rdot(space, vx, gx) * w[..., 0], axis=1)

    grad_term = fd_grad(lambda p: _evaluate(p, t_block, source, n, threads), space, y)
    r = fd_curl(B, space, y) - np.asarray(V(y), dtype=float) - grad_term
    return float(np.sqrt(max(rdot(space, r, r), 0.0)))


def circulation(F: VectorFieldFn, space, probe: CurveSamples) -> float:
    """Line integral of F around the sampled closed curve."""
    vals = np.asarray(F(probe.positions))
    return float(np.sum(rdot(Space.parse(space), vals, probe.velocities)) * probe.parameter_step)
