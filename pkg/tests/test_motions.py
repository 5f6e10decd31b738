import numpy as np
import pytest

import oracles
from hybridcurve.algebra import G, SpatialHybrid, product_array
from hybridcurve.errors import NotAMotion
from hybridcurve.motions import (
    IDENTITY, Motion, apply, compose, frame_matrix, frame_transport, invert, motion_defect,
    motion_from_matrix,
)

TOL = 1e-9


def example_frame(t):
    return frame_matrix(oracles.n1(t), oracles.n2(t), oracles.mu(t))


def transport(t0, t1):
    return motion_from_matrix(frame_transport(example_frame(t0), example_frame(t1)))


def random_motions(rng, n):
    return [transport(*rng.uniform(0, 2 * np.pi, 2)) for _ in range(n)]


def test_identity_is_motion():
    assert np.array_equal(motion_from_matrix(np.eye(3)).matrix, np.eye(3))


def test_reflection_rejected():
    with pytest.raises(NotAMotion, match="det"):
        motion_from_matrix(np.diag([1.0, 1.0, -1.0]))


def test_non_isometry_rejected():
    with pytest.raises(NotAMotion):
        motion_from_matrix(np.diag([2.0, 0.5, 1.0]))
    with pytest.raises(NotAMotion):
        motion_from_matrix(np.eye(2))


def test_example_frame_gram():
    for t in (0.0, 1.0, 2.5):
        f = example_frame(t)
        assert np.allclose(f.T @ G @ f, np.diag([-1.0, -1.0, 1.0]), atol=1e-13)


def test_frame_transport_0_to_1_is_motion():
    a = transport(0.0, 1.0)
    metric, det = motion_defect(a.matrix)
    assert metric <= TOL and det <= TOL
    assert np.allclose(a.matrix @ example_frame(0.0), example_frame(1.0), atol=1e-12)


def test_compose_and_invert(rng):
    for a in random_motions(rng, 20):
        assert np.allclose(compose(a, IDENTITY).matrix, a.matrix, atol=TOL)
        assert np.allclose(compose(a, invert(a)).matrix, np.eye(3), atol=TOL)
        assert np.allclose(invert(invert(a)).matrix, a.matrix, atol=TOL)
        assert np.allclose(invert(a).matrix, np.linalg.inv(a.matrix), atol=1e-9)
    assert np.array_equal(invert(IDENTITY).matrix, np.eye(3))


def test_group_axioms(rng):
    ms = random_motions(rng, 60)
    for a, b, c in zip(ms[0::3], ms[1::3], ms[2::3]):
        ab = a @ b
        metric, det = motion_defect(ab.matrix)
        assert metric <= TOL and det <= TOL
        assert np.allclose(((a @ b) @ c).matrix, (a @ (b @ c)).matrix, atol=TOL)


def test_metric_preservation(rng):
    for a in random_motions(rng, 30):
        x, y = rng.normal(size=(2, 3))
        gxy = x @ G @ y
        ax, ay = apply(a, x), apply(a, y)
        assert abs(ax @ G @ ay - gxy) <= TOL * max(1.0, abs(gxy))


def test_product_equivariance(rng):
    for a in random_motions(rng, 30):
        x, y = rng.normal(size=(2, 3))
        gxx = x @ G @ x
        if abs(gxx) < 0.1:
            continue
        y = y - (x @ G @ y) / gxx * x
        _, xy = product_array(x, y)
        _, axay = product_array(apply(a, x), apply(a, y))
        assert np.max(np.abs(axay - apply(a, xy))) <= TOL


def test_apply_shapes():
    a = transport(0.3, 0.9)
    x = SpatialHybrid(1, 2, 3)
    assert isinstance(apply(a, x), SpatialHybrid)
    assert np.allclose(a(x).as_array(), a.matrix @ x.as_array())
    pts = np.arange(12.0).reshape(4, 3)
    assert apply(a, pts).shape == (4, 3)
    assert IDENTITY(x) == x


def test_json_round_trip():
    a = transport(0.0, 2.0)
    data = a.to_json()
    assert len(data["matrix"]) == 9
    assert np.array_equal(Motion.from_json(data).matrix, a.matrix)
    with pytest.raises(NotAMotion):
        Motion.from_json({"matrix": [1.0] * 9})


def test_matrix_read_only():
    with pytest.raises(ValueError):
        IDENTITY.matrix[0, 0] = 2.0
