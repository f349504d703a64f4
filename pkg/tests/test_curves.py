import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvelink.curves import (Curve, circle_r3, curve_from_dict, embed_r3_curve, embedded_pair, great_circle,
                              hopf_pair_r3, hopf_pair_s3, load_curve, min_pair_distance, polygonal,
                              random_embedded_pair, sample, save_curve, torus_curve_r3, torus_link_r3, validate)
from curvelink.errors import DomainError, PreconditionError
from curvelink.space import Space, distance, inner, random_isometry

E4 = np.eye(4)


def test_great_circle_start_point_and_velocity():
    K = great_circle(E4[0], E4[1])
    x, v = K.evaluate(np.array([0.0]))
    np.testing.assert_allclose(x[0], E4[0], atol=1e-15)
    np.testing.assert_allclose(v[0], E4[1], atol=1e-15)
    assert K.period == pytest.approx(2 * np.pi)


def test_great_circle_rejects_non_orthonormal():
    with pytest.raises(PreconditionError):
        great_circle(E4[0], E4[0])
    with pytest.raises(PreconditionError):
        great_circle(E4[0], 2 * E4[1])
    with pytest.raises(DomainError):
        great_circle([1, 0, 0], [0, 1, 0])


@pytest.mark.parametrize("space", ["s3", "h3"])
def test_embedding_maps_origin_to_base_point(space):
    K = circle_r3([0, 0, 0], [1, 0, 0], [0, 1, 0], 1.0)
    E = embed_r3_curve(space, K, 1e-9)
    pts = E.position(np.linspace(0, 2 * np.pi, 7))
    np.testing.assert_allclose(pts, np.tile(E4[0], (7, 1)), atol=1e-8)


def test_embedding_rejects_bad_scale():
    K = hopf_pair_r3()[0]
    for s in (0.0, -1.0):
        with pytest.raises(DomainError):
            embed_r3_curve("s3", K, s)
    with pytest.raises(PreconditionError):
        embed_r3_curve("s3", K, 2.0)
    with pytest.raises(DomainError):
        embed_r3_curve("s3", great_circle(E4[0], E4[1]), 0.5)


def test_sample_too_few_points():
    K = great_circle(E4[0], E4[1])
    for n in (0, 3, 2.5):
        with pytest.raises(DomainError):
            sample(K, n)
    assert sample(K, 4).n == 4


def test_hopf_circles_distance():
    a, b = hopf_pair_s3()
    assert min_pair_distance(sample(a, 64), sample(b, 64)) == pytest.approx(np.pi / 2, abs=1e-12)


def test_curve_with_itself_has_zero_distance():
    a = sample(great_circle(E4[0], E4[1]), 32)
    assert min_pair_distance(a, a) == 0.0


def test_separated_loops_distance():
    d = 3.0
    a = circle_r3([0, 0, 0], [1, 0, 0], [0, 1, 0], 1.0)
    b = circle_r3([0, 0, d], [1, 0, 0], [0, 1, 0], 1.0)
    assert min_pair_distance(sample(a, 64), sample(b, 64)) == pytest.approx(d, abs=1e-12)
    with pytest.raises(DomainError):
        min_pair_distance(sample(a, 8), sample(great_circle(E4[0], E4[1]), 8))


def test_min_pair_distance_upper_bounds_continuum():
    # coarse sampling can only overestimate
    a, b = hopf_pair_r3()
    coarse = min_pair_distance(sample(a, 16), sample(b, 16))
    fine = min_pair_distance(sample(a, 1024), sample(b, 1024))
    assert coarse >= fine - 1e-15


def test_validate_passes_and_fails():
    Ks = sample(great_circle(E4[0], E4[1]), 64)
    rep = validate(Ks)
    assert rep.passed
    bad = type(Ks)(Ks.space, 1.01 * Ks.positions, Ks.velocities, Ks.period)
    assert not validate(bad)["on_manifold"].passed
    with pytest.raises(KeyError):
        rep["nope"]


def test_validate_h3_lower_sheet():
    K = embed_r3_curve("h3", hopf_pair_r3()[0], 0.4)
    Ks = sample(K, 64)
    assert validate(Ks).passed
    flipped = type(Ks)(Ks.space, -Ks.positions, -Ks.velocities, Ks.period)
    assert not validate(flipped)["on_manifold"].passed


def test_validate_tangency_failure():
    Ks = sample(great_circle(E4[0], E4[1]), 32)
    bad = type(Ks)(Ks.space, Ks.positions, Ks.velocities + Ks.positions, Ks.period)
    assert not validate(bad)["tangency"].passed


@pytest.mark.parametrize("space", ["s3", "h3"])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_isometry_preserves_validity(space, seed):
    a, _ = random_embedded_pair(space, seed)
    Ks = sample(a, 128)
    iso = random_isometry(space, seed + 100, max_boost=0.8)
    moved = Ks.transformed(iso)
    assert validate(moved).passed
    # same as transforming the analytic curve
    direct = sample(a.transformed(iso), 128)
    np.testing.assert_allclose(moved.positions, direct.positions, atol=1e-9)


def test_reversal_of_samples():
    Ks = sample(torus_curve_r3(2.0, 0.8, 1, 3), 40)
    R = Ks.reversed()
    np.testing.assert_array_equal(R.positions[1:], Ks.positions[:0:-1])
    np.testing.assert_array_equal(R.positions[0], Ks.positions[0])
    np.testing.assert_array_equal(R.velocities[1:], -Ks.velocities[:0:-1])
    RR = R.reversed()
    np.testing.assert_array_equal(RR.positions, Ks.positions)
    np.testing.assert_array_equal(RR.velocities, Ks.velocities)


def test_reversal_of_curve_matches_samples():
    K = great_circle(E4[0], E4[2])
    a = sample(K.reversed(), 16)
    b = sample(K, 16).reversed()
    np.testing.assert_allclose(a.positions, b.positions, atol=1e-14)
    np.testing.assert_allclose(a.velocities, b.velocities, atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 1.0), st.floats(0.0, 2 * np.pi), st.floats(0.0, 2 * np.pi))
def test_s3_embedding_injective(scale, s, t):
    K = embed_r3_curve("s3", circle_r3([0.3, 0, 0], [1, 0, 0], [0, 0, 1], 1.0), scale)
    x = K.position(np.array([s, t]))
    gap = abs((s - t + np.pi) % (2 * np.pi) - np.pi)
    if gap > 1e-3:
        assert distance(Space.S3, x[0], x[1]) > 0


@pytest.mark.parametrize("space", ["s3", "h3"])
def test_embedded_velocities_tangent_and_match_difference(space):
    K = embed_r3_curve(space, torus_curve_r3(2.0, 0.8, 1, 2), 0.3)
    s = np.linspace(0.1, 6.0, 9)
    x, v = K.evaluate(s)
    np.testing.assert_allclose(inner(Space.parse(space), x, x), 1.0, atol=1e-12)
    assert np.max(np.abs(inner(Space.parse(space), x, v))) < 1e-12
    h = 1e-5
    fd = (K.position(s + h) - K.position(s - h)) / (2 * h)
    np.testing.assert_allclose(v, fd, atol=1e-8)


def test_json_roundtrip(tmp_path):
    pairs = [hopf_pair_s3(), hopf_pair_r3(), torus_link_r3(2), embedded_pair("h3", hopf_pair_r3(), 0.4),
             random_embedded_pair("s3", 5), random_embedded_pair("h3", 6)]
    s = np.linspace(0, 1, 5)
    for pair in pairs:
        for K in (pair[0], pair[1].reversed()):
            K2 = curve_from_dict(json.loads(K.to_json()))
            np.testing.assert_allclose(K2.position(s), K.position(s), atol=1e-13)
            assert K2.orientation == K.orientation
            p = tmp_path / "k.json"
            save_curve(K, p)
            np.testing.assert_allclose(load_curve(p).position(s), K.position(s), atol=1e-13)
            assert Curve.from_dict(K.to_dict()).space is K.space


def test_curve_from_dict_errors():
    with pytest.raises(DomainError):
        curve_from_dict({"space": "s3"})
    with pytest.raises(DomainError):
        curve_from_dict({"space": "s3", "kind": "spiral"})
    with pytest.raises(DomainError):
        curve_from_dict({"space": "s3", "kind": "circle", "center": [0, 0, 0], "e1": [1, 0, 0],
                         "e2": [0, 1, 0], "radius": 1.0})


def test_polygonal_curve():
    th = np.linspace(0, 2 * np.pi, 24, endpoint=False)
    pts = np.stack([np.cos(th), np.sin(th), 0 * th, 0 * th], axis=1)
    K = polygonal("s3", pts)
    assert not K.analytic
    Ks = sample(K, 96)
    assert validate(Ks).passed
    # the spline through points of a great circle stays close to it
    assert np.max(np.abs(Ks.positions[:, 2:])) < 1e-12
    with pytest.raises(DomainError):
        polygonal("s3", pts[:3])
    with pytest.raises(DomainError):
        polygonal("s3", pts[:, :3])


def test_torus_curve_rejects_bad_radii():
    with pytest.raises(DomainError):
        torus_curve_r3(1.0, 2.0, 1, 1)
    with pytest.raises(DomainError):
        circle_r3([0, 0, 0], [1, 0, 0], [0, 1, 0], 0.0)


def test_random_pair_seeded():
    a1, b1 = random_embedded_pair("s3", 3)
    a2, b2 = random_embedded_pair("s3", 3)
    s = np.linspace(0, 6, 4)
    np.testing.assert_array_equal(a1.position(s), a2.position(s))
    np.testing.assert_array_equal(b1.position(s), b2.position(s))
    assert min_pair_distance(sample(a1, 256), sample(b1, 256)) > 0.01
