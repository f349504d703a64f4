import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvelink.curves import (circle_r3, embedded_pair, great_circle, hopf_pair_r3, hopf_pair_s3, random_embedded_pair,
                              sample, torus_link_r3)
from curvelink.errors import DomainError, PreconditionError
from curvelink.linking import LinkFormat, QuadConfig, integrand, linking_integral, linking_number
from curvelink.oracle import oracle_linking
from curvelink.space import random_isometry

E4 = np.eye(4)
FORMAT_SPACE = {"r3": "r3", "s3-lt": "s3", "s3-pt": "s3", "h3-pt": "h3"}


def _pair(fmt, q):
    sp = FORMAT_SPACE[fmt]
    pair = torus_link_r3(q)
    return pair if sp == "r3" else embedded_pair(sp, pair, 0.3)


def test_lt_integrand_on_orthogonal_great_circles():
    rng = np.random.default_rng(0)
    for s, t in rng.uniform(0, 2 * np.pi, (20, 2)):
        x = np.array([np.cos(s), np.sin(s), 0, 0])
        dx = np.array([-np.sin(s), np.cos(s), 0, 0])
        y = np.array([0, 0, np.cos(t), np.sin(t)])
        dy = np.array([0, 0, -np.sin(t), np.cos(t)])
        t1, t2 = integrand("s3-lt", x, dx, y, dy)
        assert abs(t1) < 1e-14
        assert t2 == pytest.approx(-1.0, abs=1e-14)


def test_gauss_integrand_degenerate():
    d = np.array([1.0, 2.0, -0.5])
    assert integrand("r3", np.zeros(3), d, 3 * d, 2 * d) == 0.0


def test_integrand_errors():
    x = E4[0]
    with pytest.raises(PreconditionError):
        integrand("s3-pt", x, E4[1], x, E4[2])
    with pytest.raises(DomainError):
        integrand("s3-pt", np.zeros(3), np.ones(3), np.ones(3), np.ones(3))


def test_pt_integrand_zero_at_antipode():
    assert integrand("s3-pt", E4[0], E4[1], -E4[0], E4[2]) == 0.0


def test_hopf_s3_lt_value():
    a, b = hopf_pair_s3()
    res = linking_number("s3-lt", a, b, QuadConfig(64, 64))
    assert res.value == pytest.approx(1.0, abs=1e-10)
    assert abs(res.term_values[0]) < 1e-12
    assert res.term_values[1] == pytest.approx(1.0, abs=1e-12)
    assert res.rounded == 1 and res.residual < 1e-10


def test_hopf_s3_pt_matches_lt():
    a, b = hopf_pair_s3()
    pt = linking_number("s3-pt", a, b, QuadConfig(64, 64)).value
    lt = linking_number("s3-lt", a, b, QuadConfig(64, 64)).value
    assert pt == pytest.approx(lt, abs=1e-6)
    assert len(linking_number("s3-pt", a, b).term_values) == 1


def test_hopf_r3_gauss():
    a, b = hopf_pair_r3()
    res = linking_number("r3", a, b, QuadConfig(256, 256))
    assert abs(res.value) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("fmt", list(FORMAT_SPACE))
@pytest.mark.parametrize("q", [0, 1, 2, 3])
def test_torus_links_all_formats(fmt, q):
    a, b = _pair(fmt, q)
    res = linking_number(fmt, a, b, QuadConfig(256, 256))
    assert res.residual < 1e-4
    assert res.rounded == -q
    assert res.rounded == oracle_linking(FORMAT_SPACE[fmt], sample(a, 256), sample(b, 256))


@pytest.mark.parametrize("space", ["r3", "s3", "h3"])
def test_split_link_is_zero(space):
    e = np.eye(3)
    a = circle_r3([0, 0, 0], e[0], e[1], 1.0)
    b = circle_r3([3, 0, 0], e[0], e[2], 1.0)
    if space != "r3":
        a, b = embedded_pair(space, (a, b), 0.3)
    for fmt in [f for f, s in FORMAT_SPACE.items() if s == space]:
        assert abs(linking_number(fmt, a, b).value) < 1e-6


@pytest.mark.parametrize("fmt", list(FORMAT_SPACE))
def test_orientation_reversal_and_swap(fmt):
    a, b = _pair(fmt, 1)
    base = linking_number(fmt, a, b).value
    assert linking_number(fmt, a.reversed(), b).value == pytest.approx(-base, abs=1e-12)
    assert linking_number(fmt, a, b.reversed()).value == pytest.approx(-base, abs=1e-12)
    assert linking_number(fmt, b, a).value == pytest.approx(base, abs=1e-6)


@pytest.mark.parametrize("seed", range(10))
def test_lt_pt_agree_on_random_pairs(seed):
    a, b = random_embedded_pair("s3", seed, q=seed % 4)
    lt = linking_number("s3-lt", a, b, QuadConfig(128, 128)).value
    pt = linking_number("s3-pt", a, b, QuadConfig(128, 128)).value
    assert abs(lt - pt) < 1e-6
    assert abs(lt - round(lt)) < 1e-4


@pytest.mark.parametrize("fmt", list(FORMAT_SPACE))
@pytest.mark.parametrize("seed", [1, 2])
def test_isometry_invariance(fmt, seed):
    sp = FORMAT_SPACE[fmt]
    a, b = _pair(fmt, 2)
    iso = random_isometry(sp, seed, max_boost=0.8)
    cfg = QuadConfig(192, 192)
    v0 = linking_number(fmt, a, b, cfg).value
    v1 = linking_number(fmt, a.transformed(iso), b.transformed(iso), cfg).value
    assert abs(v1 - v0) < 1e-8


def test_superconvergence():
    a, b = embedded_pair("s3", torus_link_r3(1), 0.3)
    ref = linking_number("s3-pt", a, b, QuadConfig(512, 512)).value
    errs = [abs(linking_number("s3-pt", a, b, QuadConfig(n, n)).value - ref) for n in (24, 48)]
    # faster than n^-4: halving the step cuts the error by more than 16
    assert errs[1] < errs[0] / 16 or errs[1] < 1e-13


def test_refine_converges_and_records_history():
    a, b = hopf_pair_r3()
    res = linking_number("r3", a, b, QuadConfig(16, 16, refine=True, target_tol=1e-9))
    assert res.converged
    assert len(res.history) >= 2
    assert res.n_used[0] > 16
    assert abs(res.value + 1) < 1e-8


def test_refine_not_converged_warns():
    a, b = hopf_pair_r3()
    with pytest.warns(RuntimeWarning):
        res = linking_number("r3", a, b, QuadConfig(16, 16, refine=True, target_tol=1e-300, max_n=64))
    assert not res.converged


def test_fixed_samples_are_accepted():
    a, b = hopf_pair_s3()
    res = linking_number("s3-pt", sample(a, 32), sample(b, 32))
    assert res.n_used == (32, 32)
    assert res.rounded == 1


def test_intersecting_curves_rejected():
    a = great_circle(E4[0], E4[1])
    b = great_circle(E4[0], E4[2])
    with pytest.raises(PreconditionError):
        linking_number("s3-pt", a, b)


def test_close_curves_warn():
    # b sits on the tube of radius 0.02 around a: inside the warning band
    e = np.eye(3)
    a = circle_r3([0, 0, 0], e[0], e[1], 1.0)
    b = circle_r3([1.0, 0, 0], e[0], e[2], 0.02)
    with pytest.warns(RuntimeWarning, match="pass within"):
        res = linking_number("r3", a, b, QuadConfig(256, 256))
    assert res.min_distance == pytest.approx(0.02, rel=1e-3)


def test_format_space_mismatch():
    a, b = hopf_pair_s3()
    with pytest.raises(DomainError):
        linking_number("h3-pt", a, b)
    with pytest.raises(DomainError):
        linking_integral("r3", sample(a, 16), sample(b, 16))
    with pytest.raises(ValueError):
        LinkFormat.parse("s4")
    assert LinkFormat.parse("R3_GAUSS") is LinkFormat.R3_GAUSS


def test_quadconfig_validation():
    with pytest.raises(DomainError):
        QuadConfig(8, 64)
    with pytest.raises(DomainError):
        QuadConfig(64, 64, target_tol=0.0)


def test_thread_count_does_not_change_result():
    a, b = random_embedded_pair("h3", 4)
    v1 = linking_number("h3-pt", a, b, QuadConfig(256, 256, threads=1)).value
    v4 = linking_number("h3-pt", a, b, QuadConfig(256, 256, threads=4)).value
    assert v1 == v4


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_residual_bounded_and_rounding(seed):
    a, b = random_embedded_pair("h3", seed)
    res = linking_number("h3-pt", a, b, QuadConfig(64, 64))
    assert res.rounded == int(round(res.value))
    assert 0 <= res.residual <= 0.5
