"""Kernel values, derivatives and Laplacian laws against mpmath oracles."""

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvelink import suites
from curvelink.errors import DomainError
from curvelink.kernels import (ChainId, KernelId, PSI_FACTOR, S3_PHI0_MEAN, chain_grid, chain_residual, h3_integral,
                               kernel_derivs, kernel_deriv, kernel_eval, kernel_grad_y, omega, radial_laplacian,
                               s3_average, s3_phi3_constant)
from curvelink.space import Space, distance, exp_map, tangent_frame

mp.mp.dps = 30
PI = mp.pi


def _weighted(f):
    # f * sin^2 is bounded on [0, pi]; tanh-sinh nodes can round onto the endpoints
    def g(a):
        s = mp.sin(a)
        return 0 if abs(s) < mp.mpf(10) ** -15 else f(a) * s ** 2
    return g


def _omega_mp(a):
    def w(t):
        s = mp.sin(t)
        return 0 if abs(s) < mp.mpf(10) ** -15 else (PI - t) ** 3 / (3 * s ** 2) + (PI - t) ** 2 / s
    return mp.quad(w, [a, PI])


def _h3_int_mp(a):
    return mp.quad(lambda t: t / mp.sinh(t) - t ** 2 / (2 * mp.sinh(t) ** 2), [0, a])


# closed forms written out independently of the package
ORACLE = {
    KernelId.R3_PHI0: lambda a: -1 / (4 * PI * a),
    KernelId.S3_PHI0: lambda a: -1 / (4 * PI ** 2) * (PI - a) * mp.cot(a),
    KernelId.S3_PT_PHI1: lambda a: -1 / (4 * PI ** 2) * (PI - a) / mp.sin(a),
    KernelId.S3_LT_PHI1: lambda a: -1 / (16 * PI ** 2) * a * (2 * PI - a),
    KernelId.S3_LT_PHI2: lambda a: -1 / (192 * PI ** 2) * (3 * a * (2 * PI - a)
                                                         + 2 * a * (PI - a) * (2 * PI - a) * mp.cot(a)),
    KernelId.S3_PT_PHI2: lambda a: (-1 / (4 * PI ** 2) * (PI - a) / mp.sin(a)
                                    + 1 / (8 * PI ** 2) * (PI - a) ** 2 / (1 + mp.cos(a))),
    KernelId.S3_PT_PSI: lambda a: -1 / (4 * PI ** 2) * (PI - a) ** 2 / (1 + mp.cos(a)),
    KernelId.S3_PT_PHI3: lambda a: (-(PI - a) * mp.cot(a) / 24 - a * (2 * PI - a) / (16 * PI ** 2)
                                    + _omega_mp(a) / (8 * PI ** 2)),
    KernelId.H3_PHI0: lambda a: -1 / (4 * PI) * (mp.coth(a) - 1),
    KernelId.H3_PHI1: lambda a: -1 / (4 * PI) / mp.sinh(a),
    KernelId.H3_PHI2: lambda a: -1 / (4 * PI) / mp.sinh(a) + a / (4 * PI * (1 + mp.cosh(a))),
    KernelId.H3_PSI: lambda a: -1 / (2 * PI) * a / (1 + mp.cosh(a)),
    KernelId.H3_PHI3: lambda a: a / (4 * PI * (mp.exp(2 * a) - 1)) + _h3_int_mp(a) / (4 * PI),
}

S3_ALPHAS = [0.05, 0.4, 1.0, 1.7, 2.5, 3.0, 3.1]
H3_ALPHAS = [0.05, 0.4, 1.0, 2.5, 6.0, 12.0]


def _alphas(kid):
    return S3_ALPHAS if kid.space is Space.S3 else H3_ALPHAS


def _rel(got, want):
    want = float(want)
    return abs(got - want) / max(abs(want), 1e-300)


@pytest.mark.parametrize("kid", list(KernelId))
def test_values_match_oracle(kid):
    for a in _alphas(kid):
        want = ORACLE[kid](mp.mpf(a))
        assert _rel(kernel_eval(kid, a), want) < 1e-10, (kid, a)


@pytest.mark.parametrize("kid", list(KernelId))
def test_derivatives_match_oracle(kid):
    for a in _alphas(kid):
        if kid.has_integral and a > 3.0 and kid.space is Space.S3:
            continue  # mp.diff of a quadrature near the endpoint is itself unreliable
        f0, f1, f2 = kernel_derivs(kid, a)
        d1 = mp.diff(ORACLE[kid], mp.mpf(a), 1)
        d2 = mp.diff(ORACLE[kid], mp.mpf(a), 2)
        assert abs(float(f1) - float(d1)) <= 1e-9 * max(1.0, abs(float(d1))), (kid, a)
        assert abs(float(f2) - float(d2)) <= 1e-8 * max(1.0, abs(float(d2))), (kid, a)


def test_integral_pieces_direct_and_interpolated():
    a = np.array([0.02, 0.3, 1.1, 2.0, 2.9, 3.14])
    want = np.array([float(_omega_mp(mp.mpf(t))) for t in a])
    np.testing.assert_allclose(omega(a, "direct"), want, rtol=1e-10, atol=1e-14)
    np.testing.assert_allclose(omega(a, "interp"), want, rtol=1e-8, atol=1e-12)
    b = np.array([0.01, 0.5, 2.0, 7.0, 30.0])
    want = np.array([float(_h3_int_mp(mp.mpf(t))) for t in b])
    np.testing.assert_allclose(h3_integral(b, "direct"), want, rtol=1e-10)
    np.testing.assert_allclose(h3_integral(b, "interp"), want, rtol=1e-8)


def test_kernel_eval_examples():
    assert abs(kernel_eval("S3_PHI0", np.pi / 2)) < 1e-17
    assert kernel_eval("S3_PT_PHI1", np.pi / 2) == pytest.approx(-1 / (8 * np.pi), abs=1e-15)
    assert kernel_eval("S3_PT_PHI1", np.pi / 2) == pytest.approx(-0.03978874, abs=1e-8)
    v = kernel_eval("H3_PHI0", 20.0)
    assert v == pytest.approx(float(ORACLE[KernelId.H3_PHI0](mp.mpf(20))), rel=1e-12)
    assert -7e-19 < v < -6e-19


def test_domain_errors():
    for bad in (0.0, -1.0, 1e-13, np.nan, np.inf):
        with pytest.raises(DomainError):
            kernel_eval("S3_PHI0", bad)
    with pytest.raises(DomainError):
        kernel_eval("S3_PT_PHI1", 3.2)
    with pytest.raises(ValueError):
        kernel_eval("S3_NOPE", 1.0)
    assert np.isfinite(kernel_eval("H3_PHI1", 50.0))


@pytest.mark.parametrize("kid", [k for k in KernelId if k.space is Space.S3])
def test_s3_kernels_continuous_at_antipode(kid):
    # the series branch below SERIES_U must join the closed form smoothly
    at_pi = kernel_eval(kid, np.pi)
    near = kernel_eval(kid, np.pi - 1e-3)
    assert np.isfinite(at_pi)
    assert abs(at_pi - near) < 1e-5
    f0, f1, _ = kernel_derivs(kid, np.array([np.pi - 2e-4, np.pi - 5e-5]))
    assert abs(f0[0] - f0[1]) < 1e-6 and abs(f1[0] - f1[1]) < 1e-5


def _geodesic_fd(kid, space, x, y, w, h=1e-5):
    yp, ym = exp_map(space, y, h * w), exp_map(space, y, -h * w)
    return (kernel_eval(kid, distance(space, x, yp)) - kernel_eval(kid, distance(space, x, ym))) / (2 * h)


@pytest.mark.parametrize("kid", [k for k in KernelId if k.space is not Space.R3])
def test_grad_y_matches_geodesic_difference(kid):
    space = kid.space
    rng = np.random.default_rng(7)
    x = suites.random_point(space, rng)
    for _ in range(3):
        y = suites.random_point(space, rng)
        if distance(space, x, y) < 0.2 or distance(space, x, y) > (3.0 if space is Space.S3 else 4.0):
            continue
        g = kernel_grad_y(kid, space, x, y)
        for w in tangent_frame(space, y):
            assert float(g @ (w if space is Space.S3 else w * np.array([-1, 1, 1, 1]))) == pytest.approx(
                _geodesic_fd(kid, space, x, y, w), abs=1e-6)


def test_grad_y_zero_at_antipode():
    x = np.array([1.0, 0, 0, 0])
    g = kernel_grad_y("S3_PT_PHI1", "s3", x, -x)
    np.testing.assert_array_equal(g, np.zeros(4))


def test_grad_y_magnitude_equals_derivative():
    x = np.array([1.0, 0, 0, 0])
    y = np.array([0.0, 1.0, 0, 0])
    g = kernel_grad_y("S3_PHI0", "s3", x, y)
    assert np.linalg.norm(g) == pytest.approx(abs(kernel_deriv("S3_PHI0", np.pi / 2)), abs=1e-10)
    assert abs(kernel_deriv("S3_PHI0", np.pi / 2)) == pytest.approx(1 / (8 * np.pi), abs=1e-15)


def test_grad_y_errors():
    x = np.array([1.0, 0, 0, 0])
    with pytest.raises(DomainError):
        kernel_grad_y("S3_PHI0", "s3", x, x)
    with pytest.raises(DomainError):
        kernel_grad_y("H3_PHI1", "s3", x, np.array([0.0, 1, 0, 0]))


def test_radial_laplacian_examples():
    assert radial_laplacian("s3", KernelId.S3_PHI0, 1.0) == pytest.approx(-1 / (2 * np.pi ** 2), abs=1e-12)
    assert radial_laplacian("s3", KernelId.S3_PHI0, 1.0) == pytest.approx(-0.05066060, abs=1e-8)
    for a in (0.5, 1.0, 2.0):
        assert abs(radial_laplacian("h3", KernelId.H3_PHI1, a) + kernel_eval("H3_PHI1", a)) < 1e-9
    for sp in ("r3", "s3", "h3"):
        assert radial_laplacian(sp, lambda a: 1.0, 1.0) == pytest.approx(0.0, abs=1e-8)
    # R3 fundamental solution is harmonic away from 0
    assert abs(radial_laplacian("r3", KernelId.R3_PHI0, 0.7)) < 1e-12
    with pytest.raises(DomainError):
        radial_laplacian("s3", KernelId.S3_PHI0, np.pi)
    with pytest.raises(DomainError):
        radial_laplacian("s3", lambda a: a, 1e-5)


def test_radial_laplacian_callable_agrees_with_analytic():
    for kid, a in ((KernelId.S3_PT_PHI2, 1.3), (KernelId.H3_PHI3, 2.0), (KernelId.S3_PT_PHI3, 0.9)):
        fd = radial_laplacian(kid.space, lambda t: kernel_eval(kid, t), a)
        assert fd == pytest.approx(radial_laplacian(kid.space, kid, a), abs=1e-6)


def test_averages():
    assert s3_average(lambda a: 1.0) == pytest.approx(1.0, abs=1e-12)
    assert s3_average(KernelId.S3_PHI0) == pytest.approx(-1 / (8 * np.pi ** 2), abs=1e-9)
    assert s3_average(KernelId.S3_PHI0) == pytest.approx(S3_PHI0_MEAN, abs=1e-12)
    assert s3_average(KernelId.S3_LT_PHI1) == pytest.approx(-0.04483295, abs=1e-8)
    assert s3_average(KernelId.S3_PT_PHI1) == pytest.approx(-1 / (2 * np.pi ** 2), abs=1e-9)
    psi_alt = lambda a: (np.pi - a) ** 2 / (8 * np.pi ** 2 * (1 + np.cos(a)))
    assert s3_average(psi_alt) == pytest.approx(-1 / (2 * np.pi ** 2) + 1 / 12, abs=1e-9)


def test_average_against_mpmath():
    want = 2 / PI * mp.quad(_weighted(ORACLE[KernelId.S3_PT_PHI2]), [0, PI])
    assert s3_average(KernelId.S3_PT_PHI2) == pytest.approx(float(want), abs=1e-11)


@pytest.mark.parametrize("chain", list(ChainId))
def test_chain_residuals_on_grid(chain):
    r = max(abs(chain_residual(chain, a)) for a in chain_grid(chain))
    assert r < 1e-7


def test_chain_examples():
    assert abs(chain_residual(ChainId.S3_LT_CHAIN, 1.0)) < 1e-8
    assert abs(chain_residual(ChainId.H3_PHI3_LAW, 1.5)) < 1e-8
    assert abs(chain_residual(ChainId.S3_PHI0_LAW, 2.0)) < 1e-10
    with pytest.raises(ValueError):
        chain_residual("NOT_A_CHAIN", 1.0)


def test_phi3_law_psi_choice():
    """The two readings of psi differ by -2; only one closes the phi3 law."""
    grid = chain_grid(ChainId.S3_PHI3_LAW, 60)
    good = max(abs(chain_residual(ChainId.S3_PHI3_LAW, a, psi_factor=1.0)) for a in grid)
    bad = max(abs(chain_residual(ChainId.S3_PHI3_LAW, a, psi_factor=-0.5)) for a in grid)
    assert PSI_FACTOR == 1.0
    assert good < 1e-7
    assert bad > 1e-2


def test_phi3_constant_against_mpmath():
    def rhs(a):
        return ORACLE[KernelId.S3_PHI0](a) - ORACLE[KernelId.S3_PT_PHI2](a) - ORACLE[KernelId.S3_PT_PSI](a)
    c = -2 / PI * mp.quad(_weighted(rhs), [0, PI])
    assert s3_phi3_constant() == pytest.approx(float(c), abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 10.0))
def test_h3_shift_law_everywhere(a):
    assert abs(chain_residual(ChainId.H3_SHIFT_LAW, a)) < 1e-9 * max(1.0, abs(kernel_eval("H3_PHI1", a)))


def test_h3_phi1_monotone():
    a = np.linspace(0.1, 10, 500)
    v = np.abs(kernel_eval("H3_PHI1", a))
    assert np.all(np.diff(v) < 0)


@pytest.mark.parametrize("name", sorted(suites.KERNEL_SUITES))
def test_kernel_suites_pass(name):
    checks = suites.KERNEL_SUITES[name]()
    failed = [c.name for c in checks if not c.passed]
    assert not failed
