"""Ambient linear algebra for R^3, the unit 3-sphere and hyperbolic 3-space.

Points and tangent vectors are plain numpy arrays whose last axis holds the
ambient coordinates: three for R^3, four for S^3 (unit quaternions in
R^4) and four for H^3 (upper sheet of the hyperboloid in Minkowski space
R^{1,3}).  Every function broadcasts over leading axes, so the quadrature
code can feed whole grids of points through at once.

The inner product ``inner`` is the ambient one (Euclidean on R^4,
signature (+,-,-,-) on R^{1,3}); ``rdot`` is the Riemannian metric on
tangent vectors, which on H^3 is minus the Minkowski form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, PreconditionError, SingularityError

POINT_TOL = 1e-12
TANGENT_TOL = 1e-10
ANTIPODAL_TOL = 1e-9

_MINKOWSKI = np.array([1.0, -1.0, -1.0, -1.0])


class Space(str, enum.Enum):
    R3 = "r3"
    S3 = "s3"
    H3 = "h3"

    @property
    def dim(self) -> int:
        return 3 if self is Space.R3 else 4

    @property
    def gram(self) -> np.ndarray:
        """Matrix of the ambient bilinear form."""
        if self is Space.H3:
            return np.diag(_MINKOWSKI)
        return np.eye(self.dim)

    @classmethod
    def parse(cls, value) -> "Space":
        if isinstance(value, Space):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown space {value!r}; expected r3, s3 or h3") from None


def base_point(space: Space) -> np.ndarray:
    space = Space.parse(space)
    if space is Space.R3:
        return np.zeros(3)
    return np.array([1.0, 0.0, 0.0, 0.0])


def _check_dim(space: Space, *arrays):
    for a in arrays:
        if np.shape(a)[-1] != space.dim:
            raise DimensionError(
                f"{space.value} vectors need {space.dim} components, got shape {np.shape(a)}")


def inner(space: Space, a, b) -> np.ndarray:
    """Ambient bilinear form <a, b>."""
    space = Space.parse(space)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_dim(space, a, b)
    if space is Space.H3:
        return a[..., 0] * b[..., 0] - a[..., 1] * b[..., 1] - a[..., 2] * b[..., 2] - a[..., 3] * b[..., 3]
    return np.sum(a * b, axis=-1)


def rdot(space: Space, v, w) -> np.ndarray:
    """Riemannian inner product of two tangent vectors at a common point."""
    space = Space.parse(space)
    if space is Space.H3:
        return -inner(space, v, w)
    return inner(space, v, w)


def rnorm(space: Space, v) -> np.ndarray:
    return np.sqrt(np.maximum(rdot(space, v, v), 0.0))


def is_point(space: Space, x, tol: float = POINT_TOL) -> np.ndarray:
    space = Space.parse(space)
    x = np.asarray(x, dtype=float)
    _check_dim(space, x)
    if space is Space.R3:
        return np.all(np.isfinite(x), axis=-1)
    ok = np.abs(inner(space, x, x) - 1.0) <= tol
    if space is Space.H3:
        ok &= x[..., 0] > 0
    return ok


def check_point(space: Space, x, tol: float = POINT_TOL, what: str = "point"):
    if not np.all(is_point(space, x, tol)):
        raise PreconditionError(f"{what} does not lie on {Space.parse(space).value}")


def check_tangent(space: Space, x, v, tol: float = TANGENT_TOL, what: str = "vector"):
    space = Space.parse(space)
    if space is Space.R3:
        return
    if np.any(np.abs(inner(space, x, v)) > tol):
        raise PreconditionError(f"{what} is not tangent at its base point")


def distance(space: Space, x, y) -> np.ndarray:
    """Geodesic distance.

    Uses half-angle forms, 2*atan2(|x-y|, |x+y|) on S^3 and
    2*asinh(|x-y|/2) on H^3, which agree with arccos<x,y> and
    arccosh<x,y> but keep full relative accuracy near zero.
    """
    space = Space.parse(space)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_dim(space, x, y)
    d = x - y
    if space is Space.R3:
        return np.linalg.norm(d, axis=-1)
    if space is Space.S3:
        s = x + y
        return 2.0 * np.arctan2(np.linalg.norm(d, axis=-1), np.linalg.norm(s, axis=-1))
    chord2 = np.maximum(-inner(space, d, d), 0.0)
    return 2.0 * np.arcsinh(0.5 * np.sqrt(chord2))


def _radial_part(space: Space, x, y) -> np.ndarray:
    """x - <x,y> y, evaluated without cancellation; norm is sin(a) or sinh(a)."""
    d = x - y
    half = 0.5 * inner(space, d, d)[..., None]
    w = d + half * y
    if space is Space.S3:
        s = x + y
        near_anti = inner(space, x, y) < 0
        if np.any(near_anti):
            alt = s - 0.5 * inner(space, s, s)[..., None] * y
            w = np.where(near_anti[..., None], alt, w)
    return w


def grad_distance_y(space: Space, x, y, check: bool = True) -> np.ndarray:
    """Unit gradient of y -> distance(x, y), a tangent vector at y."""
    space = Space.parse(space)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_dim(space, x, y)
    if space is Space.R3:
        d = y - x
        n = np.linalg.norm(d, axis=-1, keepdims=True)
        if check and np.any(n < 1e-300):
            raise SingularityError("distance gradient undefined at coincident points")
        return d / n
    w = _radial_part(space, x, y)
    n = rnorm(space, w)[..., None]
    if check:
        if np.any(distance(space, x, y) < 1e-14):
            raise SingularityError("distance gradient undefined at coincident points")
        if space is Space.S3 and np.any(1.0 + inner(space, x, y) < ANTIPODAL_TOL):
            raise SingularityError("distance gradient undefined at antipodal points")
    return -w / n


def project_to_tangent(space: Space, x, w) -> np.ndarray:
    space = Space.parse(space)
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    _check_dim(space, x, w)
    if space is Space.R3:
        return w.copy()
    return w - inner(space, x, w)[..., None] * x


def _cofactor4(a, b, c):
    """Euclidean vector w with w . d = det(a, b, c, d), via 2x2 minors."""
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    c0, c1, c2, c3 = np.moveaxis(c, -1, 0)
    m01 = a0 * b1 - a1 * b0
    m02 = a0 * b2 - a2 * b0
    m03 = a0 * b3 - a3 * b0
    m12 = a1 * b2 - a2 * b1
    m13 = a1 * b3 - a3 * b1
    m23 = a2 * b3 - a3 * b2
    return np.stack([
        -(m12 * c3 - m13 * c2 + m23 * c1),
        m02 * c3 - m03 * c2 + m23 * c0,
        -(m01 * c3 - m03 * c1 + m13 * c0),
        m01 * c2 - m02 * c1 + m12 * c0,
    ], axis=-1)


def triple_product(space: Space, a, b, c) -> np.ndarray:
    """The vector [a, b, c] with <[a, b, c], d> = det(a, b, c, d).

    On R^{1,3} the pairing is Minkowski, which flips the sign of the three
    spatial components relative to the Euclidean cofactor vector.
    """
    space = Space.parse(space)
    if space is Space.R3:
        raise DimensionError("triple product is defined on 4-vectors")
    a, b, c = (np.asarray(t, dtype=float) for t in (a, b, c))
    _check_dim(space, a, b, c)
    w = _cofactor4(a, b, c)
    if space is Space.H3:
        w = w * _MINKOWSKI
    return w


def det4(a, b, c, d) -> np.ndarray:
    """Determinant of the 4x4 matrix with rows a, b, c, d (broadcasting)."""
    return np.sum(_cofactor4(np.asarray(a, dtype=float), np.asarray(b, dtype=float),
                             np.asarray(c, dtype=float)) * d, axis=-1)


def cross(space: Space, y, a, b) -> np.ndarray:
    """Cross product of tangent vectors a, b at y, oriented so (a x b).c = det(y, a, b, c)."""
    space = Space.parse(space)
    if space is Space.R3:
        return np.cross(a, b)
    t = triple_product(space, y, a, b)
    return -t if space is Space.H3 else t


def parallel_transport(space: Space, x, y, v, check: bool = True) -> np.ndarray:
    """Transport v from T_x to T_y along the minimizing geodesic."""
    space = Space.parse(space)
    x, y, v = (np.asarray(t, dtype=float) for t in (x, y, v))
    _check_dim(space, x, y, v)
    if space is Space.R3:
        return np.broadcast_to(v, np.broadcast_shapes(x.shape, y.shape, v.shape)).copy()
    denom = 1.0 + inner(space, x, y)
    if check and space is Space.S3 and np.any(denom < ANTIPODAL_TOL):
        raise SingularityError("parallel transport between antipodal points is ambiguous")
    return v - (inner(space, y, v) / denom)[..., None] * (x + y)


def transport_matrix(space: Space, x, y) -> np.ndarray:
    """The isometry fixing span(x, y)^perp and carrying x to y, as a 4x4 matrix."""
    space = Space.parse(space)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    c = float(inner(space, x, y))
    if space is Space.S3 and 1.0 + c < ANTIPODAL_TOL:
        raise SingularityError("no canonical transport between antipodal points")
    g = space.gram
    # M v = v - <x+y, v>/(1+c) x + <(1+2c)/(1+c) x - y/(1+c), v> y
    row1 = (x + y) @ g / (1.0 + c)
    row2 = ((1.0 + 2.0 * c) / (1.0 + c) * x - y / (1.0 + c)) @ g
    return np.eye(4) - np.outer(x, row1) + np.outer(y, row2)


_FLIP = np.diag([-1.0, -1.0, 1.0, 1.0])


def moving_frame(space: Space, y) -> np.ndarray:
    """Frame E1, E2, E3 at y transported from the standard basis at (1,0,0,0).

    Returns an array of shape (..., 3, dim) whose rows are E1, E2, E3.
    """
    space = Space.parse(space)
    y = np.asarray(y, dtype=float)
    _check_dim(space, y)
    if space is Space.R3:
        return np.broadcast_to(np.eye(3), y.shape[:-1] + (3, 3)).copy()
    y0 = y[..., 0]
    if space is Space.S3 and np.any(1.0 + y0 < ANTIPODAL_TOL):
        raise SingularityError("moving frame is undefined at (-1, 0, 0, 0)")
    sign = -1.0 if space is Space.S3 else 1.0
    k = (1.0 / (1.0 + y0))[..., None, None]
    ys = y[..., 1:]
    frame = np.empty(y.shape[:-1] + (3, 4))
    frame[..., :, 0] = sign * ys
    frame[..., :, 1:] = np.eye(3) + sign * k * ys[..., :, None] * ys[..., None, :]
    return frame


def tangent_frame(space: Space, y) -> np.ndarray:
    """Positively oriented orthonormal frame at any point (rows E1..E3).

    Equals ``moving_frame`` except on the far hemisphere of S^3, where the
    frame is built at the rotated point diag(-1,-1,1,1) y and rotated back.
    """
    space = Space.parse(space)
    y = np.asarray(y, dtype=float)
    if space is not Space.S3:
        return moving_frame(space, y)
    far = y[..., 0] < -0.5
    if not np.any(far):
        return moving_frame(space, y)
    frame = moving_frame(space, np.where(far[..., None], y @ _FLIP, y))
    return np.where(far[..., None, None], frame @ _FLIP, frame)


def exp_map(space: Space, y, v) -> np.ndarray:
    """Point reached by the geodesic from y with initial velocity v."""
    space = Space.parse(space)
    y = np.asarray(y, dtype=float)
    v = np.asarray(v, dtype=float)
    if space is Space.R3:
        return y + v
    t = rnorm(space, v)[..., None]
    safe = np.where(t > 0, t, 1.0)
    if space is Space.S3:
        return np.cos(t) * y + np.where(t > 0, np.sin(t) / safe, 1.0) * v
    return np.cosh(t) * y + np.where(t > 0, np.sinh(t) / safe, 1.0) * v


# -- quaternions, stored as (w, x, y, z) so that (1, 0, 0, 0) is the identity

def quat_mul(p, q) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    p0, p1, p2, p3 = np.moveaxis(p, -1, 0)
    q0, q1, q2, q3 = np.moveaxis(q, -1, 0)
    return np.stack([
        p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
        p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
        p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
        p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
    ], axis=-1)


def quat_conj(q) -> np.ndarray:
    return np.asarray(q, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])


def quat_left_translate(x, y, v) -> np.ndarray:
    """Move v from T_x S^3 to T_y S^3 by left multiplication with y x^-1."""
    return quat_mul(quat_mul(y, quat_conj(x)), v)


QUAT_I = np.array([0.0, 1.0, 0.0, 0.0])
QUAT_J = np.array([0.0, 0.0, 1.0, 0.0])
QUAT_K = np.array([0.0, 0.0, 0.0, 1.0])


def left_invariant_field(y, q=QUAT_I) -> np.ndarray:
    """The left-invariant field y -> y q (q a pure imaginary quaternion)."""
    return quat_mul(y, np.broadcast_to(q, np.shape(y)))


def right_invariant_field(y, q=QUAT_I) -> np.ndarray:
    """The right-invariant field y -> q y."""
    return quat_mul(np.broadcast_to(q, np.shape(y)), y)


# -- isometries

@dataclass(frozen=True)
class Isometry:
    """Orientation-preserving isometry.

    For S^3 and H^3 ``matrix`` is the 4x4 linear map of the ambient space.
    For R^3 it is a 4x4 homogeneous matrix [[R, t], [0, 1]].
    """

    space: Space
    matrix: np.ndarray

    def apply(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if self.space is Space.R3:
            return points @ self.matrix[:3, :3].T + self.matrix[:3, 3]
        return points @ self.matrix.T

    def apply_vector(self, vectors) -> np.ndarray:
        vectors = np.asarray(vectors, dtype=float)
        if self.space is Space.R3:
            return vectors @ self.matrix[:3, :3].T
        return vectors @ self.matrix.T

    def linear_part(self) -> np.ndarray:
        return self.matrix[:3, :3] if self.space is Space.R3 else self.matrix


def _random_rotation(rng, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    # re-orthonormalize to push roundoff to the last bit
    u, _, vt = np.linalg.svd(q)
    return u @ vt


def _boost(t: float) -> np.ndarray:
    m = np.eye(4)
    m[0, 0] = m[1, 1] = np.cosh(t)
    m[0, 1] = m[1, 0] = np.sinh(t)
    return m


def random_isometry(space: Space, seed: int, max_boost: float = 1.5) -> Isometry:
    """Seeded random orientation-preserving isometry."""
    space = Space.parse(space)
    rng = np.random.default_rng(seed)
    if space is Space.S3:
        return Isometry(space, _random_rotation(rng, 4))
    if space is Space.H3:
        r1 = np.eye(4)
        r2 = np.eye(4)
        r1[1:, 1:] = _random_rotation(rng, 3)
        r2[1:, 1:] = _random_rotation(rng, 3)
        t = rng.uniform(-max_boost, max_boost)
        return Isometry(space, r1 @ _boost(t) @ r2)
    m = np.eye(4)
    m[:3, :3] = _random_rotation(rng, 3)
    m[:3, 3] = rng.uniform(-2.0, 2.0, size=3)
    return Isometry(space, m)
