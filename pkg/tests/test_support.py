import numpy as np
import pytest

from centroflow.errors import ConfigError, ConvexityLost
from centroflow.support import (
    SupportField,
    apply_linear_map,
    convexity_margin,
    curvature_matrix,
    ellipsoid_support,
    embed,
    fourier_support,
    gradient_norm,
    hessian_eigs,
    homogeneity_residual,
    require_convex,
)
from conftest import random_spd


class TestConstruction:
    def test_ellipse_support_closed_form(self, circle64):
        f = ellipsoid_support(circle64, np.diag([4.0, 1.0]))
        th = circle64.thetas
        want = np.sqrt(4 * np.cos(th) ** 2 + np.sin(th) ** 2)
        assert np.max(np.abs(f.s - want)) < 1e-14

    def test_ellipsoid_rejects_bad_matrices(self, circle64, sphere17):
        with pytest.raises(ConfigError):
            ellipsoid_support(circle64, np.array([[1.0, 0.5], [0.0, 1.0]]))  # asym
        with pytest.raises(ConfigError):
            ellipsoid_support(circle64, np.diag([1.0, -2.0]))  # not SPD
        with pytest.raises(ConfigError):
            ellipsoid_support(sphere17, np.eye(2))  # wrong dim

    def test_fourier_convention(self, circle64):
        # a_k multiplies cos(k theta), b_k multiplies sin(k theta), k = i+1
        f = fourier_support(circle64, 2.0, a=[0.1], b=[0.0, 0.05])
        th = circle64.thetas
        want = 2.0 + 0.1 * np.cos(th) + 0.05 * np.sin(2 * th)
        assert np.max(np.abs(f.s - want)) < 1e-14

    def test_sphere_field_u_s_consistency(self, sphere17):
        g = sphere17
        s = 1.0 + 0.1 * g.nodes[..., 2]
        f = SupportField(g, s=s)
        assert np.allclose(f.u, g.w * s, atol=1e-14)
        f2 = SupportField(g, u=f.u.copy())
        assert np.allclose(f2.s, s, atol=1e-14)

    def test_copy_is_independent(self, circle64):
        f = fourier_support(circle64, 1.0)
        f2 = f.copy()
        f2.s[:] = 9.0
        assert f.max_s() == pytest.approx(1.0)


class TestCurvature:
    def test_circle_curvature_radius(self, circle256, flower256):
        # b = s'' + s = 1 - 8 c cos(3 theta) for s = 1 + c cos(3 theta)
        b = curvature_matrix(flower256)
        want = 1.0 - 0.8 * np.cos(3 * circle256.thetas)
        assert np.max(np.abs(b - want)) < 1e-10
        assert convexity_margin(flower256) == pytest.approx(0.2, abs=1e-10)

    def test_unit_sphere_curvature_is_identity(self, unit_sphere33):
        b = curvature_matrix(unit_sphere33)
        eye = np.broadcast_to(np.eye(2), b.shape)
        assert np.max(np.abs(b - eye)) < 2e-5

    def test_hessian_eigs_closed_form(self, rng):
        m = rng.standard_normal((40, 2, 2))
        m = m + np.swapaxes(m, -1, -2)
        lo, hi = hessian_eigs(m)
        want = np.linalg.eigvalsh(m)
        assert np.max(np.abs(lo - want[..., 0])) < 1e-12
        assert np.max(np.abs(hi - want[..., 1])) < 1e-12

    def test_require_convex_raises(self, circle64):
        f = fourier_support(circle64, 1.0, a=[0.0, 0.9])  # b dips to 1-2.7
        with pytest.raises(ConvexityLost):
            require_convex(f)


class TestGeometry:
    def test_gradient_norm_circle(self, circle256, flower256):
        want = np.abs(-0.3 * np.sin(3 * circle256.thetas))
        assert np.max(np.abs(gradient_norm(flower256) - want)) < 1e-10

    def test_gradient_norm_sphere(self, sphere33):
        g = sphere33
        f = SupportField(g, s=1.0 + 0.3 * g.nodes[..., 2])
        want = 0.3 * np.sqrt(1.0 - g.nodes[..., 2] ** 2)
        assert np.max(np.abs(gradient_norm(f) - want)) < 1e-5

    def test_embed_lies_on_ellipse(self, circle64):
        Q = np.diag([4.0, 1.0])
        f = ellipsoid_support(circle64, Q)
        X = embed(f)
        # image points satisfy x^T Q^{-1} x = 1
        r = np.einsum("...i,ij,...j->...", X, np.linalg.inv(Q), X)
        assert np.max(np.abs(r - 1.0)) < 1e-10

    def test_embed_lies_on_ellipsoid(self, sphere33, rng):
        Q = random_spd(rng, 3, cond_max=4.0)
        f = ellipsoid_support(sphere33, Q)
        X = embed(f)
        r = np.einsum("...i,ij,...j->...", X, np.linalg.inv(Q), X)
        assert np.max(np.abs(r - 1.0)) < 5e-5

    def test_homogeneity_residual(self, sphere17):
        g = sphere17
        f = SupportField(g, s=1.0 + 0.1 * g.nodes[..., 0] ** 2)
        assert homogeneity_residual(f) < 1e-14
        f.s[0, 0, 0] += 1e-3  # break one duplicated corner copy
        assert homogeneity_residual(f) > 1e-4


class TestLinearMaps:
    def test_identity_map_is_noop(self, flower256):
        f2 = apply_linear_map(flower256, np.eye(2))
        assert np.max(np.abs(f2.s - flower256.s)) < 1e-12

    def test_image_of_circle_is_ellipse(self, circle256):
        # A . (unit disc) has support sqrt(p^T A A^T p)
        A = np.array([[1.3, 0.4], [-0.2, 0.9]])
        disc = SupportField(circle256, s=np.ones(circle256.N))
        got = apply_linear_map(disc, A)
        want = ellipsoid_support(circle256, A @ A.T)
        assert np.max(np.abs(got.s - want.s)) < 1e-12

    def test_image_of_sphere_is_ellipsoid(self, sphere33):
        A = np.array([[1.1, 0.15, 0.0], [0.05, 0.95, 0.1], [0.0, -0.1, 1.0]])
        ball = SupportField(sphere33, s=np.ones((6, 33, 33)))
        got = apply_linear_map(ball, A)
        want = ellipsoid_support(sphere33, A @ A.T)
        assert np.max(np.abs(got.s - want.s)) < 1e-9

    def test_rejects_singular_map(self, flower256):
        with pytest.raises(ConfigError):
            apply_linear_map(flower256, np.array([[1.0, 0.0], [1.0, 0.0]]))
