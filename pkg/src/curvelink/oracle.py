"""Linking numbers by counting signed crossings of a planar projection.

This is deliberately independent of the integral formulas: curves on S^3
or H^3 are carried to R^3 by a homeomorphism (stereographic projection or
the graph chart), sampled as polygons, projected along a generic direction
and the inter-curve crossings summed with their signs.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .curves import CurveSamples
from .errors import DegenerateProjectionError, DomainError, PreconditionError
from .space import Space, distance, transport_matrix

POLE_CLEARANCE = 0.1
N_POLE_CANDIDATES = 200
POLE_SEED = 12345
MARGIN = 1e-8
MAX_RETRIES = 100
MIN_VERTICES = 16


def pole_candidates(n: int = N_POLE_CANDIDATES, seed: int = POLE_SEED) -> np.ndarray:
    g = np.random.default_rng(seed).standard_normal((n, 4))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def choose_pole(curves) -> np.ndarray:
    """Candidate point of S^3 farthest (in min distance) from all curves."""
    cands = pole_candidates()
    pts = np.concatenate([c.positions for c in curves], axis=0)
    best = np.full(len(cands), np.inf)
    for i in range(0, len(pts), 256):
        d = distance(Space.S3, cands[:, None, :], pts[None, i:i + 256, :])
        best = np.minimum(best, d.min(axis=1))
    return cands[int(np.argmax(best))]


def _rotation_to_south(pole: np.ndarray) -> np.ndarray:
    south = np.array([-1.0, 0.0, 0.0, 0.0])
    if 1.0 + pole @ south < 1e-9:
        # pole is (1,0,0,0); a half turn in the 01-plane swaps it with the south pole
        return np.diag([-1.0, -1.0, 1.0, 1.0])
    return transport_matrix(Space.S3, pole, south)


def project_to_r3(space, K: CurveSamples, pole=None) -> np.ndarray:
    """Polygon in R^3 homeomorphic image of the sampled curve."""
    space = Space.parse(space)
    if K.space is not space:
        raise DomainError("samples and space disagree")
    x = K.positions
    if space is Space.R3:
        return x.copy()
    if space is Space.H3:
        return x[:, 1:].copy()
    pole = choose_pole([K]) if pole is None else np.asarray(pole, dtype=float)
    if np.min(distance(Space.S3, x, pole)) < POLE_CLEARANCE:
        raise PreconditionError("curve passes within 0.1 of the projection pole")
    z = x @ _rotation_to_south(pole).T
    return z[:, 1:] / (1.0 + z[:, :1])


def project_pair(space, K1: CurveSamples, K2: CurveSamples, pole=None):
    space = Space.parse(space)
    if space is Space.S3 and pole is None:
        pole = choose_pole([K1, K2])
    return project_to_r3(space, K1, pole), project_to_r3(space, K2, pole)


def _check_polygon(P) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[1] != 3:
        raise DomainError("polygon must be an (m, 3) array")
    if P.shape[0] < MIN_VERTICES:
        raise DomainError(f"polygon needs at least {MIN_VERTICES} vertices")
    seg = np.roll(P, -1, axis=0) - P
    if np.any(np.linalg.norm(seg, axis=1) == 0.0):
        raise DomainError("polygon has repeated consecutive vertices")
    return P


def _basis(d):
    d = d / np.linalg.norm(d)
    a = np.eye(3)[int(np.argmin(np.abs(d)))]
    u = np.cross(a, d)
    u /= np.linalg.norm(u)
    v = np.cross(d, u)
    return u, v, d


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _orient_exact(a, b, c) -> int:
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]), Fraction(b[1])
    cx, cy = Fraction(c[0]), Fraction(c[1])
    v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (v > 0) - (v < 0)


class _Projection:
    def __init__(self, P1, P2, d):
        self.u, self.v, self.d = _basis(np.asarray(d, dtype=float))
        self.P1, self.P2 = P1, P2
        self.q1 = np.stack([P1 @ self.u, P1 @ self.v], axis=1)
        self.q2 = np.stack([P2 @ self.u, P2 @ self.v], axis=1)
        self.h1, self.h2 = P1 @ self.d, P2 @ self.d
        scale = max(np.ptp(self.q1), np.ptp(self.q2), 1e-300)
        self.tol = MARGIN * scale * scale

    def candidates(self):
        a, b = self.q1, np.roll(self.q1, -1, axis=0)
        c, e = self.q2, np.roll(self.q2, -1, axis=0)
        lo1, hi1 = np.minimum(a, b), np.maximum(a, b)
        lo2, hi2 = np.minimum(c, e), np.maximum(c, e)
        box = np.all((lo1[:, None, :] <= hi2[None, :, :]) & (lo2[None, :, :] <= hi1[:, None, :]), axis=2)
        i, j = np.nonzero(box)
        A, B, C, E = a[i], b[i], c[j], e[j]
        o1 = _orient(A[:, 0], A[:, 1], B[:, 0], B[:, 1], C[:, 0], C[:, 1])
        o2 = _orient(A[:, 0], A[:, 1], B[:, 0], B[:, 1], E[:, 0], E[:, 1])
        o3 = _orient(C[:, 0], C[:, 1], E[:, 0], E[:, 1], A[:, 0], A[:, 1])
        o4 = _orient(C[:, 0], C[:, 1], E[:, 0], E[:, 1], B[:, 0], B[:, 1])
        return i, j, np.stack([o1, o2, o3, o4], axis=1)

    def near_degenerate(self, o) -> bool:
        seg1 = np.linalg.norm(np.roll(self.q1, -1, axis=0) - self.q1, axis=1)
        seg2 = np.linalg.norm(np.roll(self.q2, -1, axis=0) - self.q2, axis=1)
        scale = max(np.ptp(self.q1), np.ptp(self.q2))
        if min(seg1.min(), seg2.min()) < MARGIN * scale:
            return True
        return bool(np.any(np.abs(o) < self.tol))

    def exact_signs(self, i, j, o):
        s = np.sign(o).astype(int)
        rows = np.nonzero(np.any(np.abs(o) < self.tol, axis=1))[0]
        a, b = self.q1, np.roll(self.q1, -1, axis=0)
        c, e = self.q2, np.roll(self.q2, -1, axis=0)
        for r in rows:
            A, B, C, E = a[i[r]], b[i[r]], c[j[r]], e[j[r]]
            s[r] = [_orient_exact(A, B, C), _orient_exact(A, B, E),
                    _orient_exact(C, E, A), _orient_exact(C, E, B)]
            if 0 in s[r]:
                raise DegenerateProjectionError("projection direction is not generic")
        return s

    def count(self, i, j, o, s) -> int:
        hit = (s[:, 0] * s[:, 1] < 0) & (s[:, 2] * s[:, 3] < 0)
        i, j, o = i[hit], j[hit], o[hit]
        m1, m2 = len(self.P1), len(self.P2)
        t = o[:, 2] / (o[:, 2] - o[:, 3])
        r = o[:, 0] / (o[:, 0] - o[:, 1])
        ha = self.h1[i] + t * (self.h1[(i + 1) % m1] - self.h1[i])
        hb = self.h2[j] + r * (self.h2[(j + 1) % m2] - self.h2[j])
        if np.any(np.abs(ha - hb) < 1e-12):
            raise PreconditionError("curves intersect")
        t1 = self.P1[(i + 1) % m1] - self.P1[i]
        t2 = self.P2[(j + 1) % m2] - self.P2[j]
        over = np.where((ha > hb)[:, None], t1, t2)
        under = np.where((ha > hb)[:, None], t2, t1)
        signs = np.sign(np.cross(over, under) @ self.d).astype(int)
        total = int(signs.sum())
        if total % 2:
            raise DegenerateProjectionError("odd crossing sum; projection is not generic")
        return total // 2


def crossing_linking(P1, P2, direction="auto", seed: int = 0) -> int:
    """Half the signed count of crossings between the two projected polygons.

    A crossing counts +1 when (t_over, t_under, d) is right-handed, where d
    is the projection direction and "over" means larger height along d.
    """
    P1 = _check_polygon(P1)
    P2 = _check_polygon(P2)
    if isinstance(direction, str):
        if direction != "auto":
            raise DomainError("direction must be a 3-vector or 'auto'")
        rng = np.random.default_rng(seed)
        for _ in range(MAX_RETRIES):
            d = rng.standard_normal(3)
            proj = _Projection(P1, P2, d)
            i, j, o = proj.candidates()
            if not proj.near_degenerate(o):
                return proj.count(i, j, o, np.sign(o).astype(int))
        raise DegenerateProjectionError(f"no generic direction after {MAX_RETRIES} tries")
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,) or not np.linalg.norm(d) > 0:
        raise DomainError("direction must be a nonzero 3-vector")
    proj = _Projection(P1, P2, d)
    i, j, o = proj.candidates()
    return proj.count(i, j, o, proj.exact_signs(i, j, o))


def oracle_linking(space, K1: CurveSamples, K2: CurveSamples, direction="auto", seed: int = 0) -> int:
    P1, P2 = project_pair(space, K1, K2)
    return crossing_linking(P1, P2, direction, seed)
