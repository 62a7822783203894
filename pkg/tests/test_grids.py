import numpy as np
import pytest

from centroflow.errors import ConfigError
from centroflow.grids import HALO, CircleGrid, CubedSphereGrid, make_grid


class TestCircleGrid:
    def test_layout(self, circle64):
        g = circle64
        assert g.N == 64 and g.h == pytest.approx(2 * np.pi / 64)
        assert np.allclose(np.linalg.norm(g.nodes, axis=-1), 1.0)
        assert g.thetas[0] == 0.0

    def test_spectral_derivative_exact_on_modes(self, circle64):
        g = circle64
        v = np.sin(5 * g.thetas) + 0.3 * np.cos(11 * g.thetas)
        d1 = 5 * np.cos(5 * g.thetas) - 3.3 * np.sin(11 * g.thetas)
        d2 = -25 * np.sin(5 * g.thetas) - 36.3 * np.cos(11 * g.thetas)
        assert np.max(np.abs(g.deriv(v, 1) - d1)) < 1e-11
        assert np.max(np.abs(g.deriv(v, 2) - d2)) < 1e-10

    def test_integrate_trig_poly(self, circle64):
        g = circle64
        assert g.integrate(np.cos(3 * g.thetas) ** 2) == pytest.approx(np.pi, abs=1e-13)
        assert g.integrate(np.ones(g.N)) == pytest.approx(2 * np.pi, abs=1e-13)

    def test_interpolate_band_limited(self, circle64):
        g = circle64
        v = 1.0 + 0.2 * np.sin(4 * g.thetas)
        q = np.array([0.1, 1.7, 3.9, 6.1])
        assert np.max(np.abs(g.interpolate(v, q) - (1.0 + 0.2 * np.sin(4 * q)))) < 1e-12

    def test_refine_max_interior(self, circle64):
        # true max 1.5 at theta=0.37, off-node
        g = circle64
        v = 1.0 + 0.5 * np.cos(g.thetas - 0.37)
        th, vmax = g.refine_max(v)
        assert abs(vmax - 1.5) < 1e-12
        assert abs((th - 0.37 + np.pi) % (2 * np.pi) - np.pi) < 1e-7

    def test_refine_max_constant_field(self, circle64):
        th, vmax = circle64.refine_max(np.full(64, 2.5))
        assert vmax == 2.5

    def test_resolution_floor(self):
        with pytest.raises(ConfigError):
            CircleGrid(8)


class TestCubedSphereGrid:
    def test_layout(self, sphere17):
        g = sphere17
        assert g.M == 17 and g.h == pytest.approx(2.0 / 16)
        assert np.allclose(np.linalg.norm(g.nodes, axis=-1), 1.0, atol=1e-14)
        assert np.allclose(g.w, np.sqrt(1 + g.Y1**2 + g.Y2**2), atol=1e-14)

    def test_frames_right_handed(self, sphere17):
        g = sphere17
        for f in range(6):
            t1, t2 = g.tangents[f]
            assert np.allclose(np.cross(t1, t2), g.axes[f])

    def test_solid_angle_weights(self, sphere33):
        g = sphere33
        total = float(np.sum(g.sphere_weights))
        assert total == pytest.approx(4 * np.pi, rel=1e-10)
        # quadrature of a smooth function: int z1^2 over S^2 = 4pi/3
        val = g.integrate_sphere(g.nodes[..., 0] ** 2)
        assert val == pytest.approx(4 * np.pi / 3, rel=1e-8)

    def test_extend_reproduces_smooth_function(self, sphere33):
        # u = w * s for s = 1 + 0.3 x y z, globally smooth: interior stencil
        # band of the extension must match the function at ghost coordinates
        g = sphere33
        s = 1.0 + 0.3 * np.prod(g.nodes, axis=-1)
        ext = g.extend(g.w * s, kind="scalar")
        M, H = g.M, HALO
        assert ext.shape == (6, M + 2 * H, M + 2 * H)
        assert np.max(np.abs(ext[:, H:-H, H:-H] - g.w * s)) == 0.0

    def test_chart_derivs_match_analytic_on_sphere_graph(self, sphere33):
        # u = w: du/dy1 = y1/w, d2u/dy1dy2 = -y1 y2/w^3; halo path accuracy.
        # graph values are degree-1 homogeneous data, hence kind="deg1"
        g = sphere33
        f1, f2, f11, f12, f22 = g.chart_derivs(g.w.copy(), kind="deg1")
        Y1, Y2, w = g.Y1[None] + 0 * g.w, g.Y2[None] + 0 * g.w, g.w
        # 4th-order truncation at M=33: h^4 ~ 1.5e-5
        assert np.max(np.abs(f1 - Y1 / w)) < 1e-5
        assert np.max(np.abs(f2 - Y2 / w)) < 1e-5
        assert np.max(np.abs(f12 - (-Y1 * Y2 / w**3))) < 2e-5
        assert np.max(np.abs(f11 - (1 + Y2**2) / w**3)) < 2e-5
        assert np.max(np.abs(f22 - (1 + Y1**2) / w**3)) < 2e-5

    def test_d1_face_polynomial_exact(self, sphere33):
        # one-sided closures are degree-4 exact, centered rows degree-5+
        g = sphere33
        vals = np.broadcast_to(g.Y1[None], (6, g.M, g.M)).copy() ** 4
        d = g.d1_face(vals, 1)
        exact = 4.0 * np.broadcast_to(g.Y1[None], (6, g.M, g.M)) ** 3
        assert np.max(np.abs(d - exact)) < 1e-11

    def test_d1_face_axis2(self, sphere33):
        g = sphere33
        vals = np.broadcast_to(g.Y2[None], (6, g.M, g.M)).copy() ** 3
        d = g.d1_face(vals, 2)
        exact = 3.0 * np.broadcast_to(g.Y2[None], (6, g.M, g.M)) ** 2
        assert np.max(np.abs(d - exact)) < 1e-12

    def test_sync_duplicates_averages_seams(self, sphere33):
        g = sphere33
        rng = np.random.default_rng(7)
        v = rng.standard_normal((6, g.M, g.M))
        g.sync_duplicates(v)
        # after sync, duplicated sphere points carry identical values
        flat_nodes = g.nodes.reshape(-1, 3).round(12)
        flat_vals = v.reshape(-1)
        seen = {}
        for node, val in zip(map(tuple, flat_nodes), flat_vals):
            if node in seen:
                assert abs(seen[node] - val) < 1e-12
            else:
                seen[node] = val

    def test_interpolate_at_directions(self, sphere33):
        g = sphere33
        s = 1.0 + 0.2 * g.nodes[..., 2] ** 2
        rng = np.random.default_rng(3)
        dirs = rng.standard_normal((40, 3))
        dirs /= np.linalg.norm(dirs, axis=-1, keepdims=True)
        got = g.interpolate_at_directions(s, dirs)
        want = 1.0 + 0.2 * dirs[:, 2] ** 2
        assert np.max(np.abs(got - want)) < 1e-6

    def test_resolution_validation(self):
        with pytest.raises(ConfigError):
            CubedSphereGrid(16)  # even
        with pytest.raises(ConfigError):
            CubedSphereGrid(15)  # too small


def test_make_grid_dispatch():
    assert isinstance(make_grid(1, 64), CircleGrid)
    assert isinstance(make_grid(2, 17), CubedSphereGrid)
    with pytest.raises(ConfigError):
        make_grid(3, 17)
