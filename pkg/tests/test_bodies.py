import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from convexhyper import (
    Ball,
    DimensionMismatchError,
    Ellipsoid,
    InvalidArgumentError,
    InvalidBodyError,
    Polytope,
    Rotated,
    Rotation,
    Sampled,
    Scaled,
    Sum,
    eval_support,
    minkowski_sum,
    polytope_sum,
    random_polytope,
    sample_support,
    scale,
    support_values,
    translate,
)
from convexhyper.bodies import sublinearity_violation


def test_ball_support_is_homogeneous():
    # h of a centered t-ball is t * ||x|| for every x, not just unit vectors
    body = Ball(np.zeros(3), 0.7)
    rng = np.random.default_rng(0)
    xs = rng.standard_normal((50, 3)) * 3.0
    vals = support_values(body, xs)
    np.testing.assert_allclose(vals, 0.7 * np.linalg.norm(xs, axis=1), rtol=1e-14)


def test_square_support_closed_form(square):
    for theta in np.linspace(0, 2 * math.pi, 17):
        u = [math.cos(theta), math.sin(theta)]
        expected = abs(u[0]) + abs(u[1])
        assert abs(eval_support(square, u) - expected) < 1e-12


def test_sum_with_ball_adds_radius(square, grid2):
    body = Sum(square, Ball(np.zeros(2), 0.3))
    base = support_values(square, grid2.nodes)
    np.testing.assert_allclose(
        support_values(body, grid2.nodes), base + 0.3, rtol=1e-14
    )


def test_scaled_homogeneity(square, grid2):
    doubled = Scaled(2.0, square)
    np.testing.assert_allclose(
        support_values(doubled, grid2.nodes),
        2.0 * support_values(square, grid2.nodes),
    )


def test_scale_zero_is_origin(square, grid2):
    z = scale(0.0, square)
    assert np.all(support_values(z, grid2.nodes) == 0.0)


def test_scale_negative_rejected(square):
    with pytest.raises(InvalidArgumentError):
        scale(-0.5, square)


def test_rotated_support(square, grid2):
    th = 0.37
    g = Rotation(np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]]))
    rotated = Rotated(g, square)
    np.testing.assert_allclose(
        support_values(rotated, grid2.nodes),
        support_values(square, grid2.nodes @ g.matrix),
    )


def test_ellipsoid_support():
    a = np.array([[2.0, 0.3], [0.3, 1.0]])
    body = Ellipsoid(np.array([0.5, -0.25]), a)
    u = np.array([0.6, 0.8])
    expected = float(u @ body.center) + float(np.linalg.norm(a @ u))
    assert abs(eval_support(body, u) - expected) < 1e-14


def test_sample_support_ball(unit_ball_2d, grid2):
    s = sample_support(unit_ball_2d, grid2)
    np.testing.assert_allclose(s.values, 1.0)


def test_rotation_validation():
    with pytest.raises(InvalidArgumentError):
        Rotation(np.array([[1.0, 0.0], [0.0, 1.0 + 1e-6]]))


def test_empty_polytope_rejected():
    with pytest.raises(InvalidBodyError):
        Polytope(np.zeros((0, 2)))


def test_dimension_mismatch(square, unit_ball_3d):
    with pytest.raises(DimensionMismatchError):
        minkowski_sum(square, unit_ball_3d)
    with pytest.raises(DimensionMismatchError):
        support_values(square, np.zeros((1, 3)))


def test_minkowski_sum_additivity(square, grid2):
    other = random_polytope(5, 2, 9)
    tree = minkowski_sum(square, other)
    explicit = polytope_sum(square, other)
    np.testing.assert_allclose(
        support_values(tree, grid2.nodes),
        support_values(explicit, grid2.nodes),
        atol=1e-12,
    )


def test_two_balls_sum_to_ball(grid2):
    a = Ball(np.zeros(2), 0.4)
    b = Ball(np.zeros(2), 1.1)
    vals = support_values(Sum(a, b), grid2.nodes)
    np.testing.assert_allclose(vals, 1.5, rtol=1e-14)


def test_rounded_square_support(square, grid2):
    # square + unit ball: h(u) = |u1| + |u2| + 1
    body = Sum(square, Ball(np.zeros(2), 1.0))
    expected = np.abs(grid2.nodes).sum(axis=1) + 1.0
    np.testing.assert_allclose(support_values(body, grid2.nodes), expected, rtol=1e-14)


def test_translate_all_representations(grid2):
    w = np.array([0.3, -0.7])
    bodies = [
        Polytope([[0, 0], [1, 0], [0, 1]]),
        Ball(np.zeros(2), 1.0),
        Ellipsoid(np.zeros(2), np.eye(2) * 1.5),
        Sum(Polytope([[0, 0], [1, 0], [0, 1]]), Ball(np.zeros(2), 0.5)),
        Scaled(2.0, Ball(np.zeros(2), 1.0)),
        Rotated(Rotation(np.eye(2)), Ball(np.zeros(2), 1.0)),
    ]
    shift = grid2.nodes @ w
    for body in bodies:
        before = support_values(body, grid2.nodes)
        after = support_values(translate(body, w), grid2.nodes)
        np.testing.assert_allclose(after, before + shift, atol=1e-12)


def test_sampled_interpolation_exact_at_nodes(grid2):
    body = random_polytope(11, 2, 12)
    samples = sample_support(body, grid2)
    sampled = Sampled(samples)
    np.testing.assert_allclose(
        support_values(sampled, grid2.nodes), samples.values, atol=1e-13
    )


def test_sampled_interpolation_between_nodes(grid2):
    # smooth body: angular-linear interpolation error is O(cell^2)
    body = Ellipsoid(np.zeros(2), np.array([[1.5, 0.2], [0.2, 0.8]]))
    sampled = Sampled(sample_support(body, grid2))
    theta = 2 * math.pi * (np.arange(512) + 0.37) / 512
    dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    err = np.abs(support_values(sampled, dirs) - support_values(body, dirs)).max()
    assert err < 5e-6


def test_sampled_interpolation_3d(grid3):
    body = Ball(np.array([0.2, -0.1, 0.05]), 1.0)
    sampled = Sampled(sample_support(body, grid3))
    rng = np.random.default_rng(2)
    dirs = rng.standard_normal((256, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    err = np.abs(support_values(sampled, dirs) - support_values(body, dirs)).max()
    assert err < 5e-4


def test_sublinearity_spot_check(grid2):
    body = random_polytope(3, 2, 10)
    samples = sample_support(body, grid2)
    assert sublinearity_violation(samples, n_trials=256, seed=1) < 1e-9


@settings(max_examples=80, deadline=None)
@given(
    seed=st.integers(0, 2**31 - 1),
    xs=st.lists(
        st.lists(
            st.floats(-10, 10, allow_nan=False, allow_infinity=False),
            min_size=2,
            max_size=2,
        ),
        min_size=2,
        max_size=2,
    ),
    t=st.floats(1e-6, 1e3),
)
def test_support_is_sublinear_and_homogeneous(seed, xs, t):
    body = random_polytope(seed % 1000, 2, 8)
    x, y = np.asarray(xs[0]), np.asarray(xs[1])
    hx = eval_support(body, x)
    hy = eval_support(body, y)
    hxy = eval_support(body, x + y)
    scale_val = max(1.0, abs(hx), abs(hy))
    assert hxy <= hx + hy + 1e-9 * scale_val
    assert abs(eval_support(body, t * x) - t * hx) <= 1e-9 * max(1.0, abs(t * hx))


def test_polytope_full_dimensional_flags():
    assert Polytope([[0, 0], [1, 0], [0, 1]]).is_full_dimensional
    assert not Polytope([[0, 0], [1, 1]]).is_full_dimensional
