"""Closed curves on R^3, S^3 and H^3 and their uniform samplings.

A ``Curve`` is built from a JSON-friendly description (``Curve.from_dict``)
so that the CLI, the generators and the tests share one code path.  The
analytic kinds carry exact velocities; polygonal curves get theirs from
fourth-order periodic central differences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, PreconditionError
from .space import (Isometry, Space, distance, inner, project_to_tangent,
                    random_isometry)

MIN_SAMPLES = 4
STEREO_POLE = np.array([-1.0, 0.0, 0.0, 0.0])
POLE_CLEARANCE = 0.1

ON_MANIFOLD_TOL = 1e-8
TANGENCY_TOL = 1e-6
CLOSURE_TOL = 1e-8


@dataclass(frozen=True)
class CurveSamples:
    space: Space
    positions: np.ndarray
    velocities: np.ndarray
    period: float
    closure_gap: float = 0.0

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def parameter_step(self) -> float:
        return self.period / self.n

    def reversed(self) -> "CurveSamples":
        idx = (-np.arange(self.n)) % self.n
        return CurveSamples(self.space, self.positions[idx], -self.velocities[idx],
                            self.period, self.closure_gap)

    def transformed(self, iso: Isometry) -> "CurveSamples":
        return CurveSamples(self.space, iso.apply(self.positions), iso.apply_vector(self.velocities),
                            self.period, self.closure_gap)


def _periodic_diff4(points: np.ndarray, step: float) -> np.ndarray:
    p = points
    return (np.roll(p, 2, axis=0) - 8.0 * np.roll(p, 1, axis=0)
            + 8.0 * np.roll(p, -1, axis=0) - np.roll(p, -2, axis=0)) / (12.0 * step)


def _normalize_point(space: Space, x: np.ndarray) -> np.ndarray:
    if space is Space.S3:
        return x / np.linalg.norm(x, axis=-1, keepdims=True)
    if space is Space.H3:
        return np.concatenate([np.sqrt(1.0 + np.sum(x[..., 1:] ** 2, axis=-1, keepdims=True)), x[..., 1:]], axis=-1)
    return x


# -- embeddings of R^3 into S^3 / H^3 -----------------------------------------------

def stereo_inverse(q, dq=None):
    """Inverse stereographic projection from (-1,0,0,0) and its differential."""
    q = np.asarray(q, dtype=float)
    r2 = np.sum(q * q, axis=-1, keepdims=True)
    d = 1.0 + r2
    x = np.concatenate([(1.0 - r2) / d, 2.0 * q / d], axis=-1)
    if dq is None:
        return x
    dr2 = 2.0 * np.sum(q * dq, axis=-1, keepdims=True)
    dx = np.concatenate([-2.0 * dr2 / d ** 2, 2.0 * dq / d - 2.0 * q * dr2 / d ** 2], axis=-1)
    return x, dx


def graph_embed(q, dq=None):
    """H^3 as the graph of q -> sqrt(1 + |q|^2) over R^3."""
    q = np.asarray(q, dtype=float)
    x0 = np.sqrt(1.0 + np.sum(q * q, axis=-1, keepdims=True))
    x = np.concatenate([x0, q], axis=-1)
    if dq is None:
        return x
    dx = np.concatenate([np.sum(q * dq, axis=-1, keepdims=True) / x0, dq], axis=-1)
    return x, dx


# -- curve -------------------------------------------------------------------------

PositionFn = Callable[[np.ndarray], tuple]


@dataclass(frozen=True)
class Curve:
    """A closed curve s -> x(s), s in [0, period).

    ``evaluate(s)`` returns positions and velocities; orientation -1 runs
    the parametrization backwards.
    """

    space: Space
    kind: str
    params: dict
    period: float
    _eval: PositionFn = field(repr=False, compare=False)
    orientation: int = 1
    analytic: bool = True

    def evaluate(self, s):
        s = np.asarray(s, dtype=float)
        if self.orientation == 1:
            return self._eval(s)
        x, v = self._eval(-s)
        return x, -v

    def position(self, s):
        return self.evaluate(s)[0]

    def reversed(self) -> "Curve":
        return Curve(self.space, self.kind, self.params, self.period, self._eval,
                     -self.orientation, self.analytic)

    def transformed(self, iso: Isometry) -> "Curve":
        if iso.space is not self.space:
            raise DomainError("isometry and curve live in different spaces")
        inner_eval = self._eval

        def ev(s):
            x, v = inner_eval(s)
            return iso.apply(x), iso.apply_vector(v)

        params = dict(self.params)
        prev = params.get("isometry")
        m = iso.matrix if prev is None else iso.matrix @ np.asarray(prev)
        params["isometry"] = np.asarray(m).tolist()
        return Curve(self.space, self.kind, params, self.period, ev, self.orientation, self.analytic)

    def to_dict(self) -> dict:
        d = {"space": self.space.value, "kind": self.kind}
        d.update(_jsonable(self.params))
        d["orientation"] = self.orientation
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @staticmethod
    def from_dict(d: dict) -> "Curve":
        return curve_from_dict(d)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def great_circle(u, v) -> Curve:
    """s -> cos(s) u + sin(s) v on S^3."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (4,) or v.shape != (4,):
        raise DomainError("great_circle needs two 4-vectors")
    if abs(u @ u - 1) > 1e-10 or abs(v @ v - 1) > 1e-10 or abs(u @ v) > 1e-10:
        raise PreconditionError("great_circle needs orthonormal u, v")

    def ev(s):
        c = np.cos(s)[..., None]
        sn = np.sin(s)[..., None]
        return c * u + sn * v, -sn * u + c * v

    return Curve(Space.S3, "great_circle", {"u": u.tolist(), "v": v.tolist()}, 2 * np.pi, ev)


def circle_r3(center, e1, e2, radius: float) -> Curve:
    center, e1, e2 = (np.asarray(t, dtype=float) for t in (center, e1, e2))
    if radius <= 0:
        raise DomainError("radius must be positive")

    def ev(s):
        c = np.cos(s)[..., None]
        sn = np.sin(s)[..., None]
        return center + radius * (c * e1 + sn * e2), radius * (-sn * e1 + c * e2)

    params = {"center": center.tolist(), "e1": e1.tolist(), "e2": e2.tolist(), "radius": float(radius)}
    return Curve(Space.R3, "circle", params, 2 * np.pi, ev)


def torus_curve_r3(R: float, r: float, p: int, q: int, phase: float = 0.0) -> Curve:
    """(p, q) curve on the round torus: p turns the long way, q the short way."""
    if not (R > r > 0):
        raise DomainError("torus needs R > r > 0")

    def ev(s):
        th = p * s
        ph = q * s + phase
        rho = R + r * np.cos(ph)
        x = np.stack([rho * np.cos(th), rho * np.sin(th), r * np.sin(ph)], axis=-1)
        drho = -r * q * np.sin(ph)
        dx = np.stack([drho * np.cos(th) - rho * p * np.sin(th),
                       drho * np.sin(th) + rho * p * np.cos(th),
                       r * q * np.cos(ph)], axis=-1)
        return x, dx

    params = {"R": float(R), "r": float(r), "p": int(p), "q": int(q), "phase": float(phase)}
    return Curve(Space.R3, "torus", params, 2 * np.pi, ev)


def embed_r3_curve(space, K: Curve, scale: float) -> Curve:
    """Carry an R^3 curve into S^3 (inverse stereographic) or H^3 (graph)."""
    space = Space.parse(space)
    if K.space is not Space.R3:
        raise DomainError("embed_r3_curve expects an R^3 curve")
    if not scale > 0:
        raise DomainError("scale must be positive")
    if space is Space.R3:
        return K
    s_probe = np.linspace(0.0, K.period, 512, endpoint=False)
    pts = K.position(s_probe)
    if space is Space.S3:
        rmax = scale * np.max(np.linalg.norm(pts, axis=-1))
        if rmax >= np.pi / 2:
            raise PreconditionError(f"scaled curve reaches radius {rmax:.3f} >= pi/2")
        img = stereo_inverse(scale * pts)
        if np.min(distance(Space.S3, img, STEREO_POLE)) < POLE_CLEARANCE:
            raise PreconditionError("embedded curve passes too close to the projection pole")
    base_eval = K.evaluate
    emb = stereo_inverse if space is Space.S3 else graph_embed

    def ev(s):
        p, dp = base_eval(s)
        return emb(scale * p, scale * dp)

    params = {"base": K.to_dict(), "scale": float(scale)}
    return Curve(space, "embedded_r3", params, K.period, ev)


def polygonal(space, points) -> Curve:
    """Closed curve through the given vertices (first vertex not repeated)."""
    space = Space.parse(space)
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != space.dim:
        raise DomainError(f"polygonal points must be rows of {space.dim} reals")
    if pts.shape[0] < MIN_SAMPLES:
        raise DomainError("polygonal curve needs at least 4 vertices")
    if np.allclose(pts[0], pts[-1]):
        pts = pts[:-1]
    m = pts.shape[0]
    closed = np.vstack([pts, pts[:1]])
    spline = CubicSpline(np.arange(m + 1, dtype=float), closed, bc_type="periodic")

    def ev(s):
        s = np.mod(s, m)
        x = spline(s)
        return x, spline(s, 1)

    return Curve(space, "polygonal", {"points": pts.tolist()}, float(m), ev, analytic=False)


def curve_from_dict(d: dict) -> Curve:
    try:
        space = Space.parse(d["space"])
        kind = d["kind"]
    except KeyError as exc:
        raise DomainError(f"curve description is missing {exc}") from None
    if kind == "great_circle":
        c = great_circle(d["u"], d["v"])
    elif kind == "circle":
        c = circle_r3(d["center"], d["e1"], d["e2"], d["radius"])
    elif kind == "torus":
        c = torus_curve_r3(d["R"], d["r"], d.get("p", 1), d["q"], d.get("phase", 0.0))
    elif kind == "embedded_r3":
        c = embed_r3_curve(space, curve_from_dict(d["base"]), d["scale"])
    elif kind == "polygonal":
        c = polygonal(space, d["points"])
    else:
        raise DomainError(f"unknown curve kind {kind!r}")
    if c.space is not space:
        raise DomainError(f"curve kind {kind} lives in {c.space.value}, not {space.value}")
    if "isometry" in d:
        c = c.transformed(Isometry(space, np.asarray(d["isometry"], dtype=float)))
    if int(d.get("orientation", 1)) == -1:
        c = c.reversed()
    return c


def load_curve(path) -> Curve:
    with open(path) as fh:
        return curve_from_dict(json.load(fh))


def save_curve(curve: Curve, path) -> None:
    with open(path, "w") as fh:
        fh.write(curve.to_json())
        fh.write("\n")


# -- sampling ----------------------------------------------------------------------

def sample(K: Curve, n: int) -> CurveSamples:
    """Uniform sampling at s_k = k L / n."""
    if int(n) != n or n < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {n}")
    n = int(n)
    L = K.period
    s = np.arange(n) * (L / n)
    x, v = K.evaluate(s)
    if not K.analytic:
        x = _normalize_point(K.space, x)
        v = project_to_tangent(K.space, x, _periodic_diff4(x, L / n))
        gap = 0.0
    else:
        x_end = K.position(np.array([L]))[0]
        gap = float(np.max(np.abs(x_end - x[0])))
    return CurveSamples(K.space, x, v, L, gap)


def min_pair_distance(K1: CurveSamples, K2: CurveSamples, block: int = 512) -> float:
    """Smallest distance between sample points: an upper bound on the true
    curve-to-curve distance, accurate to about one sample spacing."""
    if K1.space is not K2.space:
        raise DomainError("curves live in different spaces")
    best = np.inf
    for i in range(0, K1.n, block):
        a = K1.positions[i:i + block, None, :]
        d = distance(K1.space, a, K2.positions[None, :, :])
        best = min(best, float(np.min(d)))
    return best


@dataclass
class ValidationCheck:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.threshold)


@dataclass
class ValidationReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def validate(K: CurveSamples) -> ValidationReport:
    space = K.space
    x, v = K.positions, K.velocities
    if space is Space.R3:
        on = 0.0 if np.all(np.isfinite(x)) else np.inf
        tan = 0.0
    else:
        on = float(np.max(np.abs(inner(space, x, x) - 1.0)))
        if space is Space.H3 and np.any(x[:, 0] <= 0):
            on = np.inf
        scale = np.maximum(np.linalg.norm(v, axis=-1), 1.0)
        tan = float(np.max(np.abs(inner(space, x, v)) / scale))
    return ValidationReport([
        ValidationCheck("on_manifold", on, ON_MANIFOLD_TOL),
        ValidationCheck("tangency", tan, TANGENCY_TOL),
        ValidationCheck("closure", K.closure_gap, CLOSURE_TOL),
    ])


# -- test families -------------------------------------------------------------------

def hopf_pair_s3():
    e = np.eye(4)
    return great_circle(e[0], e[1]), great_circle(e[2], e[3])


def hopf_pair_r3():
    """Two unit circles, each through the other's centre, in perpendicular planes."""
    e = np.eye(3)
    c1 = circle_r3([0, 0, 0], e[0], e[1], 1.0)
    c2 = circle_r3([1, 0, 0], e[0], e[2], 1.0)
    return c1, c2


def torus_link_r3(q: int, R: float = 2.0, r: float = 0.8):
    """Two parallel (1, q) curves on one torus; with these orientations Lk = -q."""
    return torus_curve_r3(R, r, 1, q, 0.0), torus_curve_r3(R, r, 1, q, np.pi)


def embedded_pair(space, pair, scale: float):
    return tuple(embed_r3_curve(space, k, scale) for k in pair)


def random_embedded_pair(space, seed: int, q: Optional[int] = None):
    """Seeded torus link with |Lk| = q in {0..3}, randomly placed.

    The R^3 link gets a random rigid motion, is embedded at a random scale
    and finally moved by a random isometry of the target space.
    """
    space = Space.parse(space)
    rng = np.random.default_rng(seed)
    if q is None:
        q = int(rng.integers(0, 4))
    R = rng.uniform(1.6, 2.4)
    r = rng.uniform(0.5, 0.9)
    pair = torus_link_r3(q, R, r)
    if rng.random() < 0.5:
        pair = (pair[0], pair[1].reversed())
    rot = random_isometry(Space.R3, int(rng.integers(2 ** 31)))
    rot = Isometry(Space.R3, np.block([[rot.matrix[:3, :3], np.zeros((3, 1))], [np.zeros((1, 3)), np.ones((1, 1))]]))
    pair = tuple(k.transformed(rot) for k in pair)
    if space is Space.R3:
        return pair
    reach = R + r
    scale = rng.uniform(0.25, 0.45) / reach * (np.pi / 2 if space is Space.S3 else 3.0)
    pair = embedded_pair(space, pair, scale)
    iso = random_isometry(space, int(rng.integers(2 ** 31)), max_boost=0.8)
    return tuple(k.transformed(iso) for k in pair)
