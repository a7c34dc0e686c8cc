import math

import numpy as np
import pytest

from convexhyper import (
    InvalidArgumentError,
    Polytope,
    Rotated,
    RegularizationParams,
    curvature_positive,
    curvature_report,
    default_mollifier,
    hausdorff,
    mollified_support_values,
    mollify,
    random_polytope,
    random_rotation,
    recenter,
    regularize,
    rotate_grid,
    steiner,
    support_values,
)
from convexhyper.regularization import kernel_rule
from scipy.integrate import quad

FAST = RegularizationParams(t=0.1, radial_nodes=12, angular_nodes=384)


def params(t, **kw):
    kw.setdefault("radial_nodes", 12)
    kw.setdefault("angular_nodes", 384)
    return RegularizationParams(t=t, **kw)


class TestMollifier:
    def test_midpoint_value(self):
        # (s-1)(2-s) = 1/4 at s = 3/2, so psi(3/2) = C e^{-4} with C the
        # normalization constant of exp(-1/((s-1)(2-s)))
        m = default_mollifier()
        raw = lambda s: math.exp(-1.0 / ((s - 1.0) * (2.0 - s))) if 1 < s < 2 else 0.0
        c = 1.0 / quad(raw, 1.0, 2.0, limit=200)[0]
        assert abs(float(m.bump(1.5)) - c * math.exp(-4.0)) < 1e-12

    def test_support_boundary(self):
        m = default_mollifier()
        assert float(m.bump(1.0)) == 0.0
        assert float(m.bump(2.0)) == 0.0
        assert float(m.bump(0.5)) == 0.0
        assert float(m.bump(2.5)) == 0.0

    def test_unit_integral(self):
        m = default_mollifier()
        total = quad(m.bump, 1.0, 2.0, limit=200)[0]
        assert abs(total - 1.0) < 1e-8

    def test_kernel_unit_mass(self):
        for dim in (2, 3):
            _, w = kernel_rule(params(0.1), dim)
            assert abs(w.sum() - 1.0) < 1e-14

    def test_params_validation(self):
        with pytest.raises(InvalidArgumentError):
            RegularizationParams(t=-0.1)
        with pytest.raises(InvalidArgumentError):
            RegularizationParams(t=1.5)
        with pytest.raises(InvalidArgumentError):
            RegularizationParams(t=0.1, radial_nodes=2)
        with pytest.raises(InvalidArgumentError):
            RegularizationParams(t=0.1, angular_nodes=4)


class TestMollify:
    def test_ball_stays_ball(self, unit_ball_2d, grid2):
        out = mollify(unit_ball_2d, FAST, grid2)
        spread = out.values.max() - out.values.min()
        assert spread < 1e-8

    def test_point_body_reproduced(self, grid2):
        # kernel has unit mass and odd symmetry: linear support functions
        # pass through unchanged
        point = Polytope(np.array([[0.4, -0.8]]))
        out = mollify(point, FAST, grid2)
        np.testing.assert_allclose(
            out.values, support_values(point, grid2.nodes), atol=1e-12
        )

    def test_t_zero_identity(self, square, grid2):
        vals = mollified_support_values(square, params(0.0), grid2.nodes)
        np.testing.assert_array_equal(vals, support_values(square, grid2.nodes))

    def test_square_smoothing_nearly_convexifies(self, square, grid2):
        # mollification alone need not be strictly convexifying, but the
        # planar curvature must not dip materially negative
        out = mollify(square, params(0.1), grid2)
        rep = curvature_report(out, grid2, margin=-1e-3)
        assert rep.min_value > -1e-3


class TestRegularize:
    def test_ball_stays_centered(self, unit_ball_2d, grid2):
        out = regularize(unit_ball_2d, params(0.1), grid2)
        assert np.linalg.norm(steiner(out, grid2)) < 1e-8

    def test_square_curvature_margin(self, square, grid2):
        out = regularize(square, params(0.1), grid2)
        assert curvature_positive(out, grid2, margin=0.05)

    def test_hausdorff_decreases_with_t(self, grid2):
        # corpus-calibrated continuity constant: distance to the input is
        # below c * t with c = 3.0 on random polytopes in [-1, 1]^2
        body = random_polytope(61, 2, 10)
        target = recenter(body, grid2)
        dists = []
        for t in (0.2, 0.1, 0.05, 0.025):
            out = regularize(body, params(t), grid2)
            dist = hausdorff(out, target, grid2, refine=False)
            assert dist <= 3.0 * t
            dists.append(dist)
        assert all(a > b for a, b in zip(dists, dists[1:]))

    def test_t_zero_is_recenter(self, square, grid2):
        out = regularize(square, params(0.0), grid2)
        np.testing.assert_allclose(
            support_values(out, grid2.nodes),
            support_values(recenter(square, grid2), grid2.nodes),
        )

    def test_equivariance_2d(self, grid2):
        body = random_polytope(62, 2, 12)
        g = random_rotation(7, 2, proper=False)
        grid_r = rotate_grid(g.matrix, grid2)
        lhs = regularize(Polytope(body.vertices @ g.matrix.T), FAST, grid_r)
        rhs = Rotated(g, regularize(body, FAST, grid2))
        assert hausdorff(lhs, rhs, grid_r, refine=False) < 1e-8

    def test_equivariance_3d(self, grid3_small):
        body = random_polytope(63, 3, 16)
        g = random_rotation(8, 3, proper=False)
        grid_r = rotate_grid(g.matrix, grid3_small)
        p = params(0.1, radial_nodes=8, angular_nodes=512)
        lhs = regularize(Polytope(body.vertices @ g.matrix.T), p, grid_r)
        rhs = Rotated(g, regularize(body, p, grid3_small))
        assert hausdorff(lhs, rhs, grid_r, refine=False) < 1e-8

    def test_rejects_lower_dimensional(self, grid2):
        seg = Polytope([[0.0, 0.0], [1.0, 0.0]])
        with pytest.raises(InvalidArgumentError):
            regularize(seg, params(0.1), grid2)

    def test_curvature_positive_3d(self, grid3_small):
        body = random_polytope(64, 3, 20)
        p = params(0.05, radial_nodes=8, angular_nodes=512)
        out = regularize(body, p, grid3_small)
        assert curvature_positive(out, grid3_small)
