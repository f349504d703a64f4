import numpy as np
import pytest

from curvelink.curves import (circle_r3, embed_r3_curve, embedded_pair, great_circle, hopf_pair_r3, hopf_pair_s3,
                              random_embedded_pair, sample, torus_link_r3)
from curvelink.errors import DegenerateProjectionError, DomainError, PreconditionError
from curvelink.linking import QuadConfig, linking_number
from curvelink.oracle import crossing_linking, oracle_linking, project_pair, project_to_r3

E4 = np.eye(4)


def _poly(K, n=128):
    return sample(K, n).positions


def test_hopf_r3():
    a, b = hopf_pair_r3()
    assert crossing_linking(_poly(a), _poly(b)) == -1


def test_hopf_s3():
    a, b = hopf_pair_s3()
    assert oracle_linking("s3", sample(a, 128), sample(b, 128)) == 1
    assert linking_number("s3-pt", a, b).rounded == 1


def test_split_link():
    e = np.eye(3)
    a = circle_r3([0, 0, 0], e[0], e[1], 1.0)
    b = circle_r3([5, 0, 0], e[0], e[2], 1.0)
    assert crossing_linking(_poly(a), _poly(b)) == 0
    # a separating direction sees no crossings at all
    assert crossing_linking(_poly(a), _poly(b), direction=[0.0, 0.3, 1.0]) == 0


@pytest.mark.parametrize("q", [0, 1, 2, 3])
def test_direction_independence(q):
    a, b = torus_link_r3(q)
    P1, P2 = _poly(a, 256), _poly(b, 256)
    rng = np.random.default_rng(q)
    vals = {crossing_linking(P1, P2, direction=rng.standard_normal(3)) for _ in range(10)}
    assert vals == {-q}


def test_orientation_negates():
    a, b = torus_link_r3(2)
    P1, P2 = _poly(a, 256), _poly(b, 256)
    assert crossing_linking(P1[::-1], P2) == 2
    assert crossing_linking(P1, P2[::-1]) == 2
    assert crossing_linking(P1[::-1], P2[::-1]) == -2


@pytest.mark.parametrize("space", ["s3", "h3"])
@pytest.mark.parametrize("seed", range(4))
def test_subsampling_stability(space, seed):
    a, b = random_embedded_pair(space, seed)
    full = oracle_linking(space, sample(a, 128), sample(b, 128))
    half = oracle_linking(space, sample(a, 64), sample(b, 64))
    assert full == half


@pytest.mark.parametrize("space,fmt", [("s3", "s3-lt"), ("s3", "s3-pt"), ("h3", "h3-pt"), ("r3", "r3")])
@pytest.mark.parametrize("seed", range(5))
def test_agrees_with_integral(space, fmt, seed):
    a, b = random_embedded_pair(space, 100 + seed)
    lk = oracle_linking(space, sample(a, 256), sample(b, 256))
    assert linking_number(fmt, a, b, QuadConfig(256, 256)).rounded == lk


def test_h3_projection_inverts_graph_embedding():
    K = circle_r3([0.2, -0.1, 0.3], [1, 0, 0], [0, 1, 0], 0.7)
    P = project_to_r3("h3", sample(embed_r3_curve("h3", K, 1.0), 64))
    np.testing.assert_allclose(P, sample(K, 64).positions, atol=1e-12)


def test_stereographic_image_of_great_circle_is_round():
    K = great_circle(E4[1], (E4[2] + E4[3]) / np.sqrt(2))
    P = project_to_r3("s3", sample(K, 64))
    # least-squares sphere through the points: |p|^2 = 2 c.p + k
    A = np.hstack([2 * P, np.ones((len(P), 1))])
    sol, *_ = np.linalg.lstsq(A, np.sum(P * P, axis=1), rcond=None)
    r = np.linalg.norm(P - sol[:3], axis=1)
    assert np.ptp(r) < 1e-6
    # and the points are coplanar
    sv = np.linalg.svd(P - P.mean(axis=0), compute_uv=False)
    assert sv[-1] < 1e-9 * sv[0]


def test_pole_too_close_rejected():
    K = sample(great_circle(E4[0], E4[1]), 64)
    with pytest.raises(PreconditionError):
        project_to_r3("s3", K, pole=E4[1])


def test_pole_choice_clears_both_curves():
    a, b = hopf_pair_s3()
    P1, P2 = project_pair("s3", sample(a, 64), sample(b, 64))
    assert np.all(np.isfinite(P1)) and np.all(np.isfinite(P2))


def test_intersecting_polygons_rejected():
    a = circle_r3([0, 0, 0], [1, 0, 0], [0, 1, 0], 1.0)
    b = circle_r3([1, 0, 0], [1, 0, 0], [0, 1, 0], 1.0)
    with pytest.raises((PreconditionError, DegenerateProjectionError)):
        crossing_linking(_poly(a, 64), _poly(b, 64), direction=[0.1, 0.2, 1.0])


def test_degenerate_direction():
    # seen along z, b collapses onto the x axis, which runs through the vertex
    # (1, 0) of a: the exact predicates hit a zero orientation
    a = circle_r3([0, 0, 0], [1, 0, 0], [0, 1, 0], 1.0)
    b = circle_r3([1, 0, 0], [1, 0, 0], [0, 0, 1], 1.0)
    with pytest.raises(DegenerateProjectionError):
        crossing_linking(_poly(a, 64), _poly(b, 64), direction=[0.0, 0.0, 1.0])
    # a random direction is generic and finds the Hopf link
    assert abs(crossing_linking(_poly(a, 64), _poly(b, 64))) == 1


def test_polygon_validation():
    P = _poly(hopf_pair_r3()[0], 32)
    with pytest.raises(DomainError):
        crossing_linking(P[:8], P)
    with pytest.raises(DomainError):
        crossing_linking(P[:, :2], P)
    with pytest.raises(DomainError):
        crossing_linking(np.vstack([P, P[-1:]]), P)
    with pytest.raises(DomainError):
        crossing_linking(P, P + 5, direction="sideways")
    with pytest.raises(DomainError):
        crossing_linking(P, P + 5, direction=[0, 0, 0])
    with pytest.raises(DomainError):
        project_to_r3("h3", sample(great_circle(E4[0], E4[1]), 16))


def test_embedded_pairs_keep_their_integer():
    for space in ("s3", "h3"):
        a, b = embedded_pair(space, torus_link_r3(3), 0.3)
        assert oracle_linking(space, sample(a, 256), sample(b, 256)) == -3
