"""Verification suites: kernel identities, field identities, linking checks.

Each suite returns a list of ``Check`` records.  ``acceptance`` groups the
checks by acceptance criterion (AC1 .. AC10); the CLI and the tests both
run these functions.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .curves import (embedded_pair, great_circle, hopf_pair_r3, hopf_pair_s3, random_embedded_pair,
                     sample, torus_link_r3, circle_r3, embed_r3_curve)
from .fields import (CenteredGrid, bs_line_field, bs_volume, circulation, electric_field_fn,
                     fd_curl, fd_div, fd_grad, green_lt_field, green_lt_s3, green_pt_field, key_lemma_residual,
                     maxwell_residual, scalar_green)
from .kernels import (ChainId, KernelId, Radial, S3_LT_PHI1_MEAN, S3_PHI0_MEAN, S3_PT_PHI1_MEAN, S3_Q_MEAN,
                      chain_grid, chain_residual, kernel_eval, radial_laplacian, s3_average)
from .linking import LinkFormat, QuadConfig, linking_number
from .oracle import oracle_linking
from .report import Check
from .space import (Space, base_point, distance, exp_map, grad_distance_y, inner, left_invariant_field,
                    parallel_transport, project_to_tangent, random_isometry, rnorm, right_invariant_field,
                    tangent_frame, triple_product, rdot)

PI = math.pi


# -- random configurations --------------------------------------------------------------

def random_point(space, rng, radius: float = 1.5):
    space = Space.parse(space)
    if space is Space.S3:
        x = rng.standard_normal(4)
        return x / np.linalg.norm(x)
    o = base_point(space)
    v = rng.standard_normal(3)
    v *= rng.uniform(0.0, radius) / np.linalg.norm(v)
    return exp_map(space, o, v if space is Space.R3 else np.r_[0.0, v])


def random_tangent(space, x, rng):
    return project_to_tangent(space, x, rng.standard_normal(len(x)))


def random_pair(space, rng, lo: float = 0.3, hi: float = 2.5):
    """Two points at distance in [lo, hi] (keeps clear of the S^3 antipode)."""
    space = Space.parse(space)
    x = random_point(space, rng)
    d = rng.standard_normal(3)
    d *= rng.uniform(lo, hi) / np.linalg.norm(d)
    y = exp_map(space, x, d @ tangent_frame(space, x))
    return x, y


def _norm(space, v) -> float:
    return float(rnorm(space, np.asarray(v)))


# -- kernels ----------------------------------------------------------------------------

def kernel_chains(n: int = 200) -> list:
    out = []
    for c in ChainId:
        r = max(abs(chain_residual(c, a)) for a in chain_grid(c, n))
        out.append(Check(f"chain {c.value} max residual", r, 0.0, 1e-7,
                         "Laplacian chain identity, pointwise away from 0", "below"))
    out.append(Check("S3_LT_CHAIN at alpha=1", abs(chain_residual(ChainId.S3_LT_CHAIN, 1.0)), 0.0, 1e-8,
                     "phi2 -> phi1 - [phi1] -> phi0 - [phi0]", "below"))
    out.append(Check("H3_PHI3_LAW at alpha=1.5", abs(chain_residual(ChainId.H3_PHI3_LAW, 1.5)), 0.0, 1e-8,
                     "Laplacian of phi3 = phi0 - phi2 - psi on H^3", "below"))
    out.append(Check("S3_PHI0_LAW at alpha=2", abs(chain_residual(ChainId.S3_PHI0_LAW, 2.0)), 0.0, 1e-10,
                     "Laplacian of phi0 = delta - 1/(2 pi^2)", "below"))
    out.append(Check("Laplacian S3_PHI0 at alpha=1", radial_laplacian(Space.S3, KernelId.S3_PHI0, 1.0),
                     -1.0 / (2.0 * PI ** 2), 1e-12, "Laplacian of phi0 = delta - 1/(2 pi^2)"))
    for a in (0.5, 1.0, 2.0):
        v = radial_laplacian(Space.H3, KernelId.H3_PHI1, a) + kernel_eval(KernelId.H3_PHI1, a)
        out.append(Check(f"H3 shifted law at alpha={a}", abs(v), 0.0, 1e-9,
                         "Laplacian phi + phi = delta on H^3", "below"))
    return out


def _psi_mean_integrand(a):
    # (1/8 pi^2)(pi - a)^2 / (1 + cos a)
    return (PI - a) ** 2 / (1.0 + math.cos(a)) / (8.0 * PI ** 2) if a < PI else 0.0


def kernel_averages() -> list:
    return [
        Check("[phi0] = −1/(8π²)", s3_average(KernelId.S3_PHI0), S3_PHI0_MEAN, 1e-9,
              "mean of phi0 over S^3"),
        Check("[phi1_LT] = −1/(32π²) − 1/24", s3_average(KernelId.S3_LT_PHI1), S3_LT_PHI1_MEAN, 1e-9,
              "mean of the LT phi1 over S^3"),
        Check("[phi1_PT] = −1/(2π²)", s3_average(KernelId.S3_PT_PHI1), S3_PT_PHI1_MEAN, 1e-9,
              "mean of the PT phi1 over S^3"),
        Check("[(π−α)²/(8π²(1+cos α))] = −1/(2π²) + 1/12", s3_average(_psi_mean_integrand), S3_Q_MEAN, 1e-9,
              "mean of the psi term entering the phi3 law"),
        Check("[1] = 1", s3_average(lambda a: 1.0), 1.0, 1e-12, "normalisation of the S^3 mean"),
    ]


def _limit_times_alpha(kid):
    # alpha * phi(alpha) is linear in alpha near 0; Richardson on 1e-3, 1e-4
    v3 = 1e-3 * kernel_eval(kid, 1e-3)
    v4 = 1e-4 * kernel_eval(kid, 1e-4)
    return (10.0 * v4 - v3) / 9.0


def kernel_asymptotics() -> list:
    out = []
    for kid in (KernelId.S3_PHI0, KernelId.S3_PT_PHI1, KernelId.H3_PHI0, KernelId.H3_PHI1):
        out.append(Check(f"lim alpha*{kid.value} = -1/(4 pi)", _limit_times_alpha(kid), -1.0 / (4.0 * PI), 1e-8,
                         "kernel asymptotic to -1/(4 pi alpha) at 0"))
    a = np.linspace(0.1, 10.0, 400)
    v = np.abs(kernel_eval(KernelId.H3_PHI1, a))
    out.append(Check("|H3_PHI1| strictly decreasing on [0.1, 10]", bool(np.all(np.diff(v) < 0)), True, 0.0,
                     "monotone decay of the H^3 kernel", "exact"))
    out.append(Check("S3_PHI0(pi/2)", kernel_eval(KernelId.S3_PHI0, PI / 2), 0.0, 1e-15, "cot(pi/2) = 0"))
    out.append(Check("S3_PT_PHI1(pi/2)", kernel_eval(KernelId.S3_PT_PHI1, PI / 2), -1.0 / (8.0 * PI), 1e-15,
                     "csc(pi/2) = 1"))
    ref = -2.0 * math.exp(-40.0) / (1.0 - math.exp(-40.0)) / (4.0 * PI)
    out.append(Check("H3_PHI0(20)", kernel_eval(KernelId.H3_PHI0, 20.0), ref, 1e-30,
                     "(-1/4 pi)(coth 20 - 1) = -(1/2 pi) e^-40/(1 - e^-40)"))
    return out


KERNEL_SUITES = {"chains": kernel_chains, "averages": kernel_averages, "asymptotics": kernel_asymptotics}


# -- differential operators ---------------------------------------------------------------

def curl_div_suite(seed: int = 0, n_configs: int = 50) -> list:
    rng = np.random.default_rng(seed)
    out = []
    for sp in (Space.S3, Space.H3):
        ec = ed = 0.0
        for _ in range(n_configs):
            x, y = random_pair(sp, rng)
            v = random_tangent(sp, x, rng)

            def F(p, x=x, v=v):
                return parallel_transport(sp, np.broadcast_to(x, p.shape), p, np.broadcast_to(v, p.shape),
                                          check=False)

            c = float(inner(sp, x, y))
            ec = max(ec, _norm(sp, fd_curl(F, sp, y) - triple_product(sp, y, x, v) / (1.0 + c)))
            ed = max(ed, abs(fd_div(F, sp, y) + 2.0 * float(inner(sp, y, v)) / (1.0 + c)))
        out.append(Check(f"{sp.value} curl P_yx V = [y,x,V]/(1+<x,y>), max over {n_configs}", ec, 0.0, 1e-5,
                         "curl of the parallel-transported constant field", "below"))
        out.append(Check(f"{sp.value} div P_yx V = -2<y,V>/(1+<x,y>), max over {n_configs}", ed, 0.0, 1e-5,
                         "divergence of the parallel-transported constant field", "below"))
    el = er = ediv = 0.0
    for _ in range(max(5, n_configs // 5)):
        y = random_point(Space.S3, rng)
        el = max(el, _norm(Space.S3, fd_curl(left_invariant_field, Space.S3, y) + 2.0 * left_invariant_field(y)))
        er = max(er, _norm(Space.S3, fd_curl(right_invariant_field, Space.S3, y) - 2.0 * right_invariant_field(y)))
        ediv = max(ediv, abs(fd_div(left_invariant_field, Space.S3, y)))
    out.append(Check("curl of left-invariant field = -2 V", el, 0.0, 1e-5,
                     "left-invariant fields are curl eigenfields with eigenvalue -2", "below"))
    out.append(Check("curl of right-invariant field = +2 V", er, 0.0, 1e-5,
                     "right-invariant fields are curl eigenfields with eigenvalue +2", "below"))
    out.append(Check("div of left-invariant field = 0", ediv, 0.0, 1e-5,
                     "left-invariant fields are divergence-free", "below"))
    x, y = random_pair(Space.S3, rng, 0.5, 2.5)
    a = float(distance(Space.S3, x, y))
    ga = fd_div(lambda p: grad_distance_y(Space.S3, np.broadcast_to(x, p.shape), p, check=False), Space.S3, y)
    out.append(Check("div grad alpha = 2 cot alpha", ga, 2.0 / math.tan(a), 1e-4,
                     "radial Laplacian of f(alpha) = alpha"))
    p = random_tangent(Space.S3, y, rng)
    gf = lambda q: fd_grad(lambda r: np.asarray(r) @ p + (np.asarray(r) @ p) ** 2, Space.S3, q)
    out.append(Check("curl of a gradient = 0", _norm(Space.S3, fd_curl(gf, Space.S3, y)), 0.0, 1e-5,
                     "curl grad = 0", "below"))
    return out


def _exp_kernel():
    return Radial(lambda a: np.exp(-a), lambda a: -np.exp(-a), lambda a: np.exp(-a), name="exp(-alpha)")


def _quad_kernel():
    return Radial(lambda a: (PI - a) ** 2, lambda a: -2.0 * (PI - a), lambda a: 2.0 + 0.0 * a, name="(pi-alpha)^2")


def _rational_kernel():
    return Radial(lambda a: 1.0 / (1.0 + a * a), lambda a: -2.0 * a / (1.0 + a * a) ** 2,
                  lambda a: (6.0 * a * a - 2.0) / (1.0 + a * a) ** 3, name="1/(1+alpha^2)")


def key_lemma_suite(seed: int = 0, n_configs: int = 20) -> list:
    rng = np.random.default_rng(seed)
    kernels = {Space.S3: [KernelId.S3_PT_PHI1, _exp_kernel(), _quad_kernel()],
               Space.H3: [KernelId.H3_PHI1, _exp_kernel(), _rational_kernel()]}
    out = []
    for sp, ks in kernels.items():
        for k in ks:
            worst = 0.0
            for _ in range(n_configs):
                x, y = random_pair(sp, rng)
                v = random_tangent(sp, x, rng)
                worst = max(worst, key_lemma_residual(sp, x, v, y, k))
            name = k.value if isinstance(k, KernelId) else k.name
            out.append(Check(f"{sp.value} Key Lemma, kernel {name}, max over {n_configs}", worst, 0.0, 1e-4,
                             "pointwise curl/grad identity for any smooth radial kernel", "below"))
        x, y = random_pair(sp, rng)
        out.append(Check(f"{sp.value} Key Lemma with v = 0", key_lemma_residual(sp, x, np.zeros(4), y, ks[0]),
                         0.0, 0.0, "all terms are linear in v", "exact"))
    return out


# -- line currents and Maxwell ------------------------------------------------------------

def _line_setups():
    """(format, source loop, probe loop, linking number of the pair)."""
    a, b = hopf_pair_s3()
    ha, hb = embedded_pair(Space.H3, hopf_pair_r3(), 0.4)
    return [(LinkFormat.S3_LT, a, b, 1), (LinkFormat.S3_PT, a, b, 1), (LinkFormat.H3_PT, ha, hb, -1)]


def _points_off(sp, K, rng, m, clearance=0.2):
    pts = []
    while len(pts) < m:
        y = random_point(sp, rng, 1.0)
        if float(np.min(distance(sp, K.positions, y))) > clearance:
            pts.append(y)
    return pts


def line_current_checks(seed: int = 0, n_points: int = 5, n: int = 256) -> dict:
    """Checks for line currents, grouped by criterion key."""
    rng = np.random.default_rng(seed)
    groups = {"curl": [], "div": [], "ampere": []}
    for fmt, src, probe, lk in _line_setups():
        sp = fmt.space
        K = sample(src, n)
        B = bs_line_field(fmt, K)
        ys = _points_off(sp, K, rng, n_points)
        curl = max(_norm(sp, fd_curl(B, sp, y)) for y in ys)
        div = max(abs(fd_div(B, sp, y)) for y in ys)
        groups["curl"].append(Check(f"{fmt.value} |curl BS| off the wire, max over {n_points}", curl, 0.0, 1e-3,
                                    "curl BS(V) = V for divergence-free V; V = 0 off the wire", "below"))
        groups["div"].append(Check(f"{fmt.value} div BS of a line current, max over {n_points}", div, 0.0, 1e-5,
                                   "BS(V) is divergence-free", "below"))
        c = circulation(B, sp, sample(probe, n))
        groups["ampere"].append(Check(f"{fmt.value} circulation of BS around the probe loop", c, float(lk), 1e-3,
                                      "Ampere's law: circulation = current x linking number"))
    return groups


def decay_ratio(n_alpha: int = 13, n: int = 256):
    """max/min of |BS(y)| e^alpha along a geodesic ray alpha in [2, 8]."""
    loop = sample(embed_r3_curve(Space.H3, circle_r3([0, 0, 0], [1, 0, 0], [0, 1, 0], 1.0), 0.4), n)
    B = bs_line_field(LinkFormat.H3_PT, loop)
    o = base_point(Space.H3)
    d = np.array([0.0, 1.0, 1.0, 1.0]) / math.sqrt(3.0)
    al = np.linspace(2.0, 8.0, n_alpha)
    ys = np.array([exp_map(Space.H3, o, a * d) for a in al])
    m = np.asarray(rnorm(Space.H3, B(ys))) * np.exp(al)
    return float(m.max() / m.min()), float(m.max() / m[0]), m


def decay_checks() -> list:
    ratio, growth, _ = decay_ratio()
    return [
        Check("H3 |BS| e^alpha max/min along a ray, alpha in [2, 8]", ratio, 1.0, 10.0,
              "BS(V) goes to zero at infinity like e^-alpha", "below"),
        Check("H3 |BS| e^alpha does not grow along the ray (max / value at alpha=2)", growth, 1.0, 1e-12,
              "BS(V) goes to zero at infinity like e^-alpha"),
    ]


def maxwell_suite(seed: int = 0, quick: bool = False) -> list:
    rng = np.random.default_rng(seed)
    out = []
    for g in line_current_checks(seed, 3 if quick else 20).values():
        out.extend(g)
    # pointwise orthogonality behind div BS = 0 in PT format
    worst = 0.0
    for sp, kid in ((Space.S3, KernelId.S3_PT_PHI1), (Space.H3, KernelId.H3_PHI1)):
        for _ in range(20):
            x, y = random_pair(sp, rng)
            v = random_tangent(sp, x, rng)
            g = grad_distance_y(sp, x, y)
            worst = max(worst, abs(float(rdot(sp, triple_product(sp, y, x, v), g))))
    out.append(Check("<[y,x,V], grad_y alpha> = 0 pointwise", worst, 0.0, 1e-12,
                     "[y,x,V] is orthogonal to the plane of x and y", "below"))
    K = sample(great_circle([1, 0, 0, 0], [0, 1, 0, 0]), 128)
    b = bs_line_field(LinkFormat.S3_PT, K)(np.array([0.0, 0.0, 1.0, 0.0]))
    out.append(Check("S3_PT field of a great circle at (0,0,1,0) is along e3", float(np.max(np.abs(b[:3]))),
                     0.0, 1e-8, "symmetry of the configuration", "below"))
    R, z = 1.5, 0.7
    Kr = sample(circle_r3([0, 0, 0], [1, 0, 0], [0, 1, 0], R), 256)
    bz = bs_line_field(LinkFormat.R3_GAUSS, Kr)(np.array([0.0, 0.0, z]))
    out.append(Check("R3 loop field on the axis", float(bz[2]), 0.5 * R * R / (R * R + z * z) ** 1.5, 1e-10,
                     "axial Biot-Savart field of a circular loop"))
    out.extend(decay_checks())
    # volumetric Maxwell equation with the gradient term
    grid = CenteredGrid(Space.S3, 24, 12, 24)
    p = random_point(Space.S3, rng)
    Vg = lambda x: project_to_tangent(Space.S3, x, np.broadcast_to(p, np.shape(x)))
    y = random_point(Space.S3, rng)
    for fmt in (LinkFormat.S3_LT, LinkFormat.S3_PT):
        for name, V in (("left-invariant", left_invariant_field), ("gradient", Vg)):
            r = maxwell_residual(Space.S3, fmt, V, grid, y)
            out.append(Check(f"{fmt.value} volumetric Maxwell residual, {name} current", r, 0.0, 5e-2,
                             "curl BS(V) = V + grad int V . grad_x phi0", "below"))
    ho = base_point(Space.H3)
    e = np.array([0.0, 1.0, 0.3, -0.2])

    def bump(x):
        x = np.asarray(x)
        a = distance(Space.H3, x, np.broadcast_to(ho, x.shape))
        return np.exp(-2.0 * a ** 2)[..., None] * project_to_tangent(Space.H3, x, np.broadcast_to(e, x.shape))

    yh = random_point(Space.H3, rng, 0.6)
    r = maxwell_residual(Space.H3, LinkFormat.H3_PT, bump, CenteredGrid(Space.H3, 24, 12, 24, r_max=5.0), yh)
    out.append(Check("h3-pt volumetric Maxwell residual, bump current", r, 0.0, 5e-2,
                     "curl BS(V) = V + grad int V . grad_x phi0", "below"))
    # electric field of rho = <x, p>, whose potential is -rho/3
    rho = lambda x: np.asarray(x) @ p
    E = electric_field_fn(Space.S3, rho, grid)
    out.append(Check("E(rho) for rho = <x,p> equals -grad(rho)/3", _norm(Space.S3, E(y) + Vg(y) / 3.0), 0.0, 1e-6,
                     "E = grad of the scalar Green's operator of rho", "below"))
    out.append(Check("curl E = 0", _norm(Space.S3, fd_curl(E, Space.S3, y)), 0.0, 1e-4, "curl E = 0", "below"))
    if not quick:
        out.append(Check("div E = rho", fd_div(E, Space.S3, y), float(rho(y)), 1e-2, "div E = rho"))
    out.append(Check("E of zero charge", _norm(Space.S3, electric_field_fn(Space.S3, lambda x: 0.0 * np.asarray(x)[..., 0],
                                                                          grid)(y)), 0.0, 0.0,
                     "linearity", "exact"))
    return out


# -- invariant fields and Green's operators -----------------------------------------------

def invariant_field_checks(seed: int = 0, n_points: int = 3, grid=None) -> dict:
    rng = np.random.default_rng(seed)
    ys = [random_point(Space.S3, rng) for _ in range(n_points)]
    V1, VR = left_invariant_field, right_invariant_field
    e_l = max(_norm(Space.S3, bs_volume(Space.S3, LinkFormat.S3_LT, V1, grid, y) + V1(y) / 2) for y in ys)
    e_r = max(_norm(Space.S3, bs_volume(Space.S3, LinkFormat.S3_LT, VR, grid, y) - VR(y) / 2) for y in ys)
    e_g = max(_norm(Space.S3, green_lt_s3(V1, grid, y) + V1(y) / 4) for y in ys)
    return {
        "bs_left": Check("BS_LT(left-invariant V) = -V/2", e_l, 0.0, 2e-2,
                         "BS(V) = -V/2 for left-invariant V", "below"),
        "bs_right": Check("BS_LT(right-invariant V) = +V/2", e_r, 0.0, 2e-2,
                          "BS(V) = +V/2 for right-invariant V", "below"),
        "gr_left": Check("Gr_LT(left-invariant V) = -V/4", e_g, 0.0, 2e-2,
                         "Laplacian of -V/4 is V for a curl eigenfield with eigenvalue -2", "below"),
    }


def invariant_fields_suite(seed: int = 0, quick: bool = False) -> list:
    rng = np.random.default_rng(seed + 1)
    out = list(invariant_field_checks(seed).values())
    y = random_point(Space.S3, rng)
    V1 = left_invariant_field
    lt = bs_volume(Space.S3, LinkFormat.S3_LT, V1, None, y)
    pt = bs_volume(Space.S3, LinkFormat.S3_PT, V1, None, y)
    out.append(Check("BS in LT and PT formats agree on a left-invariant field", _norm(Space.S3, lt - pt), 0.0, 2e-2,
                     "both formulas give the Biot-Savart operator on S^3", "below"))
    g_pt = green_pt_field(Space.S3, V1)(y)
    g_lt = green_lt_s3(V1, None, y)
    out.append(Check("Gr in LT and PT formats agree on a left-invariant field", _norm(Space.S3, g_lt - g_pt), 0.0,
                     5e-2, "both formulas invert the vector Laplacian on S^3", "below"))
    grid = CenteredGrid(Space.S3, 24, 12, 24)
    G = green_lt_field(V1, grid, gradient_term=False)
    out.append(Check("-curl Gr(V) = BS(V) for left-invariant V",
                     _norm(Space.S3, -fd_curl(G, Space.S3, y) - lt), 0.0, 5e-2,
                     "BS(V) = -curl Gr(V)", "below"))
    a = 2.5
    out.append(Check("Gr(aV) = a Gr(V)", _norm(Space.S3, green_lt_s3(lambda x: a * V1(x), None, y) - a * g_lt),
                     0.0, 1e-12, "linearity of the quadrature", "below"))
    p = random_point(Space.S3, rng)
    Vg = lambda x: project_to_tangent(Space.S3, x, np.broadcast_to(p, np.shape(x)))
    if not quick:
        # div V = -3 <x,p>, whose scalar Green's function is <x,p>
        ref = scalar_green(Space.S3, lambda x: -3.0 * (np.asarray(x) @ p), grid)(y)
        dg = fd_div(green_lt_field(Vg, CenteredGrid(Space.S3, 16, 8, 16)), Space.S3, y)
        out.append(Check("div Gr(V) = Gr(div V) for a gradient field", dg, float(ref), 5e-2,
                         "div Gr(V) = Gr(div V)"))
    return out


FIELD_SUITES = {"curl-div": curl_div_suite, "key-lemma": key_lemma_suite, "maxwell": maxwell_suite,
                "invariant-fields": invariant_fields_suite}


def run_field_suite(name: str, seed: int = 0, quick: bool = False) -> list:
    if name == "curl-div":
        return curl_div_suite(seed, 10 if quick else 50)
    if name == "key-lemma":
        return key_lemma_suite(seed, 5 if quick else 20)
    return FIELD_SUITES[name](seed, quick=quick)


# -- linking -------------------------------------------------------------------------------

def _grouped(checks, group):
    for c in checks:
        c.group = group
    return checks


def ac1_hopf_s3() -> list:
    a, b = hopf_pair_s3()
    cfg = QuadConfig(128, 128)
    lt = linking_number(LinkFormat.S3_LT, a, b, cfg)
    pt = linking_number(LinkFormat.S3_PT, a, b, cfg)
    return [
        Check("S3_LT Hopf link", lt.value, 1.0, 1e-6, "Hopf link has linking number 1"),
        Check("S3_PT Hopf link", pt.value, 1.0, 1e-6, "Hopf link has linking number 1"),
        Check("S3_LT first integral on the Hopf link", abs(lt.term_values[0]), 0.0, 1e-9,
              "for the Hopf link the first integral vanishes", "below"),
        Check("S3_LT second integral on the Hopf link", lt.term_values[1], 1.0, 1e-9,
              "for the Hopf link the second integral is +-1"),
    ]


def ac2_format_agreement(n_pairs: int = 10, n: int = 128) -> list:
    out = []
    cfg = QuadConfig(n, n)
    for s in range(n_pairs):
        a, b = random_embedded_pair(Space.S3, s, q=s % 4)
        lt = linking_number(LinkFormat.S3_LT, a, b, cfg)
        pt = linking_number(LinkFormat.S3_PT, a, b, cfg)
        orc = oracle_linking(Space.S3, sample(a, 256), sample(b, 256))
        out.append(Check(f"seed {s}: |S3_LT - S3_PT|", abs(lt.value - pt.value), 0.0, 1e-6,
                         "both integrals compute the linking number", "below"))
        out.append(Check(f"seed {s}: S3_LT rounded = crossing count", lt.rounded, orc, 0,
                         "linking number = half the signed crossing count", "exact"))
        out.append(Check(f"seed {s}: S3_PT rounded = crossing count", pt.rounded, orc, 0,
                         "linking number = half the signed crossing count", "exact"))
    return out


def ac3_h3() -> list:
    out = []
    cfg = QuadConfig(256, 256)
    pairs = [("graph-embedded Hopf link", embedded_pair(Space.H3, hopf_pair_r3(), 0.4)),
             ("graph-embedded (1,2) torus link", embedded_pair(Space.H3, torus_link_r3(2), 0.3))]
    for name, (a, b) in pairs:
        r = linking_number(LinkFormat.H3_PT, a, b, cfg)
        orc = oracle_linking(Space.H3, sample(a, 256), sample(b, 256))
        out.append(Check(f"H3_PT {name} vs crossing count", r.value, float(orc), 1e-4,
                         "H^3 linking integral = linking number"))
    return out


def ac4_isometry(n_iso: int = 5, n: int = 128) -> list:
    out = []
    cfg = QuadConfig(n, n)
    cases = [(LinkFormat.R3_GAUSS, torus_link_r3(2)),
             (LinkFormat.S3_LT, random_embedded_pair(Space.S3, 11, q=2)),
             (LinkFormat.S3_PT, random_embedded_pair(Space.S3, 11, q=2)),
             (LinkFormat.H3_PT, random_embedded_pair(Space.H3, 12, q=1))]
    for fmt, (a, b) in cases:
        base = linking_number(fmt, a, b, cfg).value
        worst = 0.0
        for k in range(n_iso):
            iso = random_isometry(fmt.space, 100 + k, max_boost=0.8)
            v = linking_number(fmt, a.transformed(iso), b.transformed(iso), cfg).value
            worst = max(worst, abs(v - base))
        out.append(Check(f"{fmt.value} change under {n_iso} random isometries", worst, 0.0, 1e-8,
                         "linking integrals are isometry invariant", "below"))
    return out


def ac5_kernels() -> list:
    out = [c for c in kernel_chains() if c.name.startswith("chain ")]
    return out + kernel_averages()[:4]


def acceptance(quick: bool = False, seed: int = 0, timing: dict = None) -> list:
    """All acceptance checks, each tagged with its criterion group."""
    timing = {} if timing is None else timing
    out = []

    def run(group, fn, *args, **kw):
        t0 = time.perf_counter()
        out.extend(_grouped(fn(*args, **kw), group))
        timing[group] = round(time.perf_counter() - t0, 3)

    run("AC1", ac1_hopf_s3)
    run("AC2", ac2_format_agreement, 4 if quick else 10)
    run("AC3", ac3_h3)
    run("AC4", ac4_isometry, 2 if quick else 5)
    run("AC5", ac5_kernels)
    run("AC6", curl_div_suite, seed, 10 if quick else 50)
    run("AC7", key_lemma_suite, seed, 5 if quick else 20)
    run("AC8", lambda: list(invariant_field_checks(seed, 1 if quick else 3).values()))
    run("AC9", lambda: [c for g in line_current_checks(seed, 3 if quick else 5).values() for c in g])
    run("AC10", lambda: decay_checks()[:1])
    return out


CRITERIA = {
    "AC1": "Hopf link on S^3 in LT and PT formats",
    "AC2": "LT/PT agreement and crossing oracle on seeded S^3 pairs",
    "AC3": "H^3 linking of graph-embedded links",
    "AC4": "isometry invariance",
    "AC5": "kernel chains and S^3 averages",
    "AC6": "finite-difference curl/div closed forms and invariant-field eigenvalues",
    "AC7": "Key Lemma residuals",
    "AC8": "invariant-field identities for BS and Gr on S^3",
    "AC9": "line-current curl, divergence and Ampere's law",
    "AC10": "H^3 decay of BS along a ray",
}
