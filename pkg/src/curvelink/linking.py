"""Linking numbers from double line integrals over K1 x K2.

Four formats are supported: the classical Gauss integral in R^3, the
left-translation (LT) and parallel-transport (PT) integrals on S^3, and
the PT integral on H^3.  All are evaluated with the periodic trapezoid
product rule, which converges spectrally for smooth closed curves.

The cross product inside T_y is pinned down by (a x b) . c = det(y, a, b, c),
so every integrand is a single 4x4 determinant.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .curves import Curve, CurveSamples, min_pair_distance, sample
from .errors import DomainError, PreconditionError
from .kernels import C_H3, C_S3, KernelId, _derivs
from .parallel import ordered_map
from .space import (ANTIPODAL_TOL, Space, det4, distance, grad_distance_y, inner,
                    parallel_transport, quat_left_translate, rdot)

BLOCK_PAIRS = 1 << 16
WARN_DISTANCE = 0.05


class LinkFormat(str, enum.Enum):
    R3_GAUSS = "r3"
    S3_LT = "s3-lt"
    S3_PT = "s3-pt"
    H3_PT = "h3-pt"

    @property
    def space(self) -> Space:
        return {"r3": Space.R3, "s3-lt": Space.S3, "s3-pt": Space.S3, "h3-pt": Space.H3}[self.value]

    @property
    def prefactor(self) -> float:
        return 1.0 / (4.0 * math.pi ** 2) if self.space is Space.S3 else 1.0 / (4.0 * math.pi)

    @classmethod
    def parse(cls, value) -> "LinkFormat":
        if isinstance(value, LinkFormat):
            return value
        v = str(value).lower().replace("_", "-")
        aliases = {"r3-gauss": "r3", "gauss": "r3"}
        try:
            return cls(aliases.get(v, v))
        except ValueError:
            raise ValueError(f"unknown format {value!r}; expected r3, s3-lt, s3-pt or h3-pt") from None


@dataclass
class QuadConfig:
    n1: int = 128
    n2: int = 128
    refine: bool = False
    target_tol: float = 1e-10
    max_n: int = 2048
    min_distance: float = 1e-3
    threads: int = None

    def __post_init__(self):
        if self.n1 < 16 or self.n2 < 16:
            raise DomainError("QuadConfig needs n1, n2 >= 16")
        if not self.target_tol > 0:
            raise DomainError("target_tol must be positive")


@dataclass
class LinkResult:
    value: float
    term_values: list
    rounded: int
    residual: float
    n_used: tuple
    converged: bool = True
    history: list = field(default_factory=list)
    min_distance: float = float("nan")

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "term_values": list(self.term_values),
            "rounded": self.rounded,
            "residual": self.residual,
            "n_used": list(self.n_used),
            "converged": self.converged,
            "min_distance": self.min_distance,
        }


# the unnormalized kernels of the linking formulas, as derivatives in alpha
def _phi_prime(fmt: LinkFormat, alpha):
    if fmt is LinkFormat.S3_LT:
        return _derivs(KernelId.S3_PHI0, alpha, need_value=False)[1] / C_S3
    if fmt is LinkFormat.S3_PT:
        return _derivs(KernelId.S3_PT_PHI1, alpha, need_value=False)[1] / C_S3
    if fmt is LinkFormat.H3_PT:
        return _derivs(KernelId.H3_PHI1, alpha, need_value=False)[1] / C_H3
    raise DomainError(fmt)


def _integrand_arrays(fmt: LinkFormat, x, dx, y, dy):
    """Vectorized integrand; returns one array (two for S3_LT)."""
    if fmt is LinkFormat.R3_GAUSS:
        d = x - y
        r = np.linalg.norm(d, axis=-1)
        return (np.sum(np.cross(dx, dy) * d, axis=-1) / r ** 3,)
    space = fmt.space
    alpha = distance(space, x, y)
    anti = (1.0 + inner(space, x, y) < ANTIPODAL_TOL) if space is Space.S3 else None
    with np.errstate(invalid="ignore", divide="ignore"):
        # transport is undefined at antipodal pairs; those entries are masked below
        if fmt is LinkFormat.S3_LT:
            moved = quat_left_translate(x, y, dx)
        else:
            moved = parallel_transport(space, x, y, dx, check=False)
        grad = _phi_prime(fmt, alpha)[..., None] * grad_distance_y(space, x, y, check=False)
        term1 = det4(y, moved, dy, grad)
    if anti is not None and np.any(anti):
        term1 = np.where(anti, 0.0, term1)
    if fmt is LinkFormat.S3_LT:
        return term1, rdot(space, moved, dy)
    return (term1,)


def integrand(fmt, x, dx, y, dy):
    """Pointwise integrand with the unnormalized kernel.

    S3_LT gives the pair (cross term, dot term); the other formats a float.
    """
    fmt = LinkFormat.parse(fmt)
    space = fmt.space
    arrs = [np.asarray(t, dtype=float) for t in (x, dx, y, dy)]
    for a in arrs:
        if a.shape[-1] != space.dim:
            raise DomainError(f"format {fmt.value} needs {space.dim}-vectors")
    if np.any(distance(space, arrs[0], arrs[2]) < 1e-12):
        raise PreconditionError("integrand undefined at coincident points")
    vals = _integrand_arrays(fmt, *arrs)
    vals = tuple(float(v) if np.ndim(v) == 0 else v for v in vals)
    return vals if fmt is LinkFormat.S3_LT else vals[0]


def _grid_sums(fmt: LinkFormat, K1: CurveSamples, K2: CurveSamples, threads=None):
    rows = max(1, BLOCK_PAIRS // K2.n)
    starts = list(range(0, K1.n, rows))

    def block(i0):
        sl = slice(i0, i0 + rows)
        x = K1.positions[sl, None, :]
        dx = K1.velocities[sl, None, :]
        vals = _integrand_arrays(fmt, x, dx, K2.positions[None, :, :], K2.velocities[None, :, :])
        out = []
        for v in vals:
            v = np.broadcast_to(v, (x.shape[0], K2.n))
            if not np.all(np.isfinite(v)):
                raise PreconditionError("non-finite integrand value; curves too close or singular")
            out.append(np.sum(v))
        return out

    parts = ordered_map(block, starts, threads)
    return [math.fsum(p[k] for p in parts) for k in range(len(parts[0]))]


def linking_integral(fmt, K1: CurveSamples, K2: CurveSamples, threads=None):
    """Value and per-term contributions from fixed samplings."""
    fmt = LinkFormat.parse(fmt)
    if K1.space is not fmt.space or K2.space is not fmt.space:
        raise DomainError(f"format {fmt.value} needs curves in {fmt.space.value}")
    sums = _grid_sums(fmt, K1, K2, threads)
    w = fmt.prefactor * K1.parameter_step * K2.parameter_step
    if fmt is LinkFormat.S3_LT:
        terms = [w * sums[0], -w * sums[1]]
    else:
        terms = [w * sums[0]]
    return math.fsum(terms), terms


def _as_samples(K, n):
    return K if isinstance(K, CurveSamples) else sample(K, n)


def linking_number(fmt, K1, K2, cfg: QuadConfig = None) -> LinkResult:
    """Linking number of two disjoint closed curves by product quadrature.

    ``K1``/``K2`` may be ``Curve`` objects (resampled on refinement) or fixed
    ``CurveSamples``.
    """
    fmt = LinkFormat.parse(fmt)
    cfg = cfg or QuadConfig()
    n1, n2 = cfg.n1, cfg.n2
    S1, S2 = _as_samples(K1, n1), _as_samples(K2, n2)
    n1, n2 = S1.n, S2.n
    if S1.space is not fmt.space or S2.space is not fmt.space:
        raise DomainError(f"format {fmt.value} needs curves in {fmt.space.value}")
    dmin = min_pair_distance(S1, S2)
    if dmin < cfg.min_distance:
        raise PreconditionError(
            f"curves are not disjoint: sampled distance {dmin:.3g} below {cfg.min_distance:g}")
    if dmin < WARN_DISTANCE:
        warnings.warn(f"curves pass within {dmin:.3g}; quadrature accuracy degrades", RuntimeWarning)
    value, terms = linking_integral(fmt, S1, S2, cfg.threads)
    history = [(n1, n2, value)]
    converged = True
    can_refine = isinstance(K1, Curve) and isinstance(K2, Curve)
    if cfg.refine and can_refine:
        converged = False
        while max(n1, n2) * 2 <= cfg.max_n:
            n1, n2 = 2 * n1, 2 * n2
            S1, S2 = sample(K1, n1), sample(K2, n2)
            new, terms = linking_integral(fmt, S1, S2, cfg.threads)
            history.append((n1, n2, new))
            change = abs(new - value)
            value = new
            if change < cfg.target_tol:
                converged = True
                break
        if not converged:
            warnings.warn("linking integral did not reach target_tol at max_n", RuntimeWarning)
    rounded = int(round(value))
    return LinkResult(value, terms, rounded, abs(value - rounded), (n1, n2), converged, history, dmin)
