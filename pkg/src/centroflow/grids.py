"""Sphere discretizations and the differentiation kernel.

n=1: periodic theta-grid on the circle with Fourier collocation derivatives.
n=2: cubed sphere, six gnomonic (central projection) face charts y in [-1,1]^2,
4th-order centered differences with a halo of width 2 filled by cross-face
interpolation.

Node ordering contract (documented so snapshots are bit-stable):
  n=1: values[k] at theta_k = 2*pi*k/N, k = 0..N-1.
  n=2: values[f, i, j] at direction ~ a_f + ys[i]*t1_f + ys[j]*t2_f,
       ys = linspace(-1, 1, M), faces ordered +x,-x,+y,-y,+z,-z,
       flattening is row-major (C order).
"""

import numpy as np

from .errors import ConfigError, GridError

# face frames: (name, axis a, tangent t1, tangent t2), right handed t1 x t2 = a
FACE_FRAMES = (
    ("+x", (1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ("-x", (-1, 0, 0), (0, 0, 1), (0, 1, 0)),
    ("+y", (0, 1, 0), (0, 0, 1), (1, 0, 0)),
    ("-y", (0, -1, 0), (1, 0, 0), (0, 0, 1)),
    ("+z", (0, 0, 1), (1, 0, 0), (0, 1, 0)),
    ("-z", (0, 0, -1), (0, 1, 0), (1, 0, 0)),
)

HALO = 2   # halo width, matches the 4th-order stencil reach
NSTEN = 8  # Lagrange interpolation points per axis for off-lattice evaluation


class CircleGrid:
    """Equispaced periodic grid on S^1 with spectral differentiation."""

    n = 1

    def __init__(self, resolution):
        if resolution < 16:
            raise ConfigError(f"n=1 resolution must be >= 16, got {resolution}")
        N = int(resolution)
        self.N = N
        self.resolution = N
        self.h = 2 * np.pi / N
        self.thetas = 2 * np.pi * np.arange(N) / N
        self.nodes = np.stack([np.cos(self.thetas), np.sin(self.thetas)], axis=-1)
        self.weights = np.full(N, 2 * np.pi / N)
        self._k = np.arange(N // 2 + 1)  # rfft wavenumbers

    def deriv(self, values, order=1):
        """Spectral d^order/dtheta^order of a real periodic nodal field."""
        vhat = np.fft.rfft(values)
        mult = (1j * self._k) ** order
        if order % 2 == 1 and self.N % 2 == 0:
            mult = mult.copy()
            mult[-1] = 0.0  # odd derivative of the Nyquist mode is not representable
        return np.fft.irfft(vhat * mult, n=self.N)

    def integrate(self, values):
        # trapezoid on a periodic grid == spectrally accurate quadrature
        return float(np.sum(values) * self.h)

    def interpolate(self, values, thetas_query):
        """Trigonometric interpolation of nodal values at arbitrary angles."""
        N = self.N
        c = np.fft.fft(values) / N
        k = np.fft.fftfreq(N, d=1.0 / N)
        tq = np.atleast_1d(np.asarray(thetas_query, dtype=float))
        out = (np.exp(1j * tq[:, None] * k[None, :]) @ c).real
        return out if np.ndim(thetas_query) else float(out[0])

    def refine_max(self, values):
        """Parametrization-robust maximum: Newton-polish the trig interpolant.

        Node maxima move by O(h^2 f'') under reparametrization; the interior
        smooth max does not, which matters when comparing series across
        linearly mapped copies of the same body. Falls back to the node max
        for near-constant fields (Newton would divide by ~0 curvature).
        """
        v = np.asarray(values, dtype=float)
        i0 = int(np.argmax(v))
        vmax = float(v[i0])
        span = vmax - float(np.min(v))
        if span <= 1e-12 * max(abs(vmax), 1.0):
            return float(self.thetas[i0]), vmax
        c = np.fft.fft(v) / self.N
        k = np.fft.fftfreq(self.N, d=1.0 / self.N)
        ik = 1j * k
        th = float(self.thetas[i0])
        for _ in range(12):
            ph = np.exp(1j * k * th)
            d1 = float(np.sum(c * ik * ph).real)
            d2 = float(np.sum(c * ik * ik * ph).real)
            if d2 >= -1e-13 * span:
                break
            step = np.clip(d1 / d2, -self.h, self.h)  # one-cell trust region
            th -= step
            if abs(step) < 1e-14:
                break
        val = float(np.sum(c * np.exp(1j * k * th)).real)
        return th, max(val, vmax)


def _lagrange_weights(xs, xq):
    """Weights w_m with f(xq) ~= sum_m w_m f(xs[m]) for the points xs (last axis)."""
    # xs: (..., P), xq: (...,); plain barycentric-free product form, P is small
    P = xs.shape[-1]
    w = np.ones(xs.shape)
    for m in range(P):
        for l in range(P):
            if l == m:
                continue
            w[..., m] *= (xq - xs[..., l]) / (xs[..., m] - xs[..., l])
    return w


class CubedSphereGrid:
    """Six gnomonic face charts covering S^2 exactly once.

    Per face M x M nodes (M odd so every chart has a center node and Simpson
    weights apply).  Differentiation runs on arrays extended by a width-2 halo
    interpolated from the neighboring faces (degree-7 Lagrange stencils, so the
    halo error survives two differentiations without degrading 4th order).
    """

    n = 2

    def __init__(self, resolution):
        M = int(resolution)
        if M < 17 or M % 2 == 0:
            raise ConfigError(f"n=2 per-face resolution must be odd and >= 17, got {M}")
        self.M = M
        self.resolution = M
        self.h = 2.0 / (M - 1)
        self.ys = np.linspace(-1.0, 1.0, M)
        self.face_names = tuple(f[0] for f in FACE_FRAMES)
        self.axes = np.array([f[1] for f in FACE_FRAMES], dtype=float)       # (6,3)
        self.tangents = np.array([[f[2], f[3]] for f in FACE_FRAMES], dtype=float)  # (6,2,3)

        Y1, Y2 = np.meshgrid(self.ys, self.ys, indexing="ij")
        self.Y1, self.Y2 = Y1, Y2
        z = (self.axes[:, None, None, :]
             + Y1[None, :, :, None] * self.tangents[:, None, None, 0, :]
             + Y2[None, :, :, None] * self.tangents[:, None, None, 1, :])
        self.w = np.sqrt(1.0 + Y1**2 + Y2**2)[None, :, :] * np.ones((6, 1, 1))
        self.nodes = z / self.w[..., None]          # (6,M,M,3) unit directions

        self.sphere_weights = self._solid_angle_weights()
        self.chart_weights_1d = self._simpson_weights()
        self._build_halo_tables()
        self._build_duplicate_map()
        self._build_frames()

        # reference chart factor processed through the same extend+stencil
        # pipeline as any graph field; fields are compared against it so that
        # every exact sphere is an exact discrete fixed point of the flow
        wext = self.extend(self.w, kind="deg1")
        w1, w2, w11, w12, w22 = self.chart_derivs_from_ext(wext)
        self.ref_det = w11 * w22 - w12 * w12
        self.ref_hess = np.stack(
            [np.stack([w11, w12], -1), np.stack([w12, w22], -1)], -2)

    # ---------- quadrature ----------

    def _solid_angle_weights(self):
        # exact solid angle of each node's gnomonic cell; cells tile the sphere
        M, h = self.M, self.h
        edges = np.concatenate([[-1.0], (self.ys[:-1] + self.ys[1:]) / 2.0, [1.0]])

        def omega(a, b):
            return np.arctan(a * b / np.sqrt(1.0 + a * a + b * b))

        A1, B1 = np.meshgrid(edges[:-1], edges[:-1], indexing="ij")
        A2, B2 = np.meshgrid(edges[1:], edges[1:], indexing="ij")
        cell = omega(A2, B2) - omega(A1, B2) - omega(A2, B1) + omega(A1, B1)
        return np.broadcast_to(cell, (6, M, M)).copy()

    def _simpson_weights(self):
        M, h = self.M, self.h
        w = np.ones(M)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return w * (h / 3.0)

    def integrate_sphere(self, node_values):
        """Integral over S^2 of a per-node field, exact cell-area weights."""
        return float(np.sum(node_values * self.sphere_weights))

    def integrate_chart(self, density):
        """Integral over the six chart squares of a chart density (e.g. sqrt(det g))."""
        W = self.chart_weights_1d
        return float(np.einsum("fij,i,j->", density, W, W))

    # ---------- halo exchange ----------

    def _build_halo_tables(self):
        M, h, H = self.M, self.h, HALO
        E = M + 2 * H
        yg = np.concatenate([self.ys[0] - h * np.arange(H, 0, -1),
                             self.ys,
                             self.ys[-1] + h * np.arange(1, H + 1)])
        gi, gj = np.meshgrid(np.arange(E), np.arange(E), indexing="ij")
        ghost_mask = (gi < H) | (gi >= M + H) | (gj < H) | (gj >= M + H)
        gi, gj = gi[ghost_mask], gj[ghost_mask]            # per-face ghost positions
        G = gi.size

        owner = np.empty((6, G), dtype=np.int64)
        yp = np.empty((6, G, 2))
        start = np.empty((6, G, 2), dtype=np.int64)
        lagw = np.empty((6, G, 2, NSTEN))
        jac = np.empty((6, G, 2, 2))
        znorm = np.empty((6, G))

        for f in range(6):
            a = self.axes[f]
            t = self.tangents[f]
            z = a[None, :] + yg[gi][:, None] * t[0] + yg[gj][:, None] * t[1]
            znorm[f] = np.linalg.norm(z, axis=1)
            dots = z @ self.axes.T                          # (G,6)
            owner[f] = np.argmax(dots, axis=1)
            if np.any(owner[f] == f):
                raise GridError("halo ghost mapped to its own face")
            ao = self.axes[owner[f]]                        # (G,3)
            to = self.tangents[owner[f]]                    # (G,2,3)
            alpha = np.einsum("gk,gk->g", z, ao)
            yp[f] = np.einsum("gk,gck->gc", z, to) / alpha[:, None]
            if np.any(np.abs(yp[f]) > 1.0 + 1e-12):
                raise GridError("halo ghost fell outside the owner chart")
            # jacobian d y'_c / d y_i of the chart transition at the ghost point
            tdot = np.einsum("ik,gck->gci", t, to)          # t_i . t'_c
            tad = t @ ao.T                                  # (2, G) before transpose
            jac[f] = (tdot - yp[f][:, :, None] * tad.T[:, None, :]) / alpha[:, None, None]
            # high-order interpolation stencils in the owner chart; the ghost
            # value error must stay below the h^4 stencil truncation even
            # after a second differentiation (see d1_face)
            idx = np.clip(np.floor((yp[f] + 1.0) / h).astype(np.int64)
                          - (NSTEN // 2 - 1), 0, M - NSTEN)
            start[f] = idx
            for c in range(2):
                xs = self.ys[idx[:, c][:, None] + np.arange(NSTEN)[None, :]]
                lagw[f, :, c, :] = _lagrange_weights(xs, yp[f][:, c])

        self._ghost_ij = (gi, gj)
        self._halo = dict(owner=owner, start=start, lagw=lagw, jac=jac,
                          znorm=znorm, yp=yp)

    def _gather_interp(self, values, f):
        """Interpolate per-face nodal 'values' at the ghost points of face f."""
        h = self._halo
        own = h["owner"][f]
        s1 = h["start"][f, :, 0][:, None, None] + np.arange(NSTEN)[None, :, None]
        s2 = h["start"][f, :, 1][:, None, None] + np.arange(NSTEN)[None, None, :]
        patch = values[own[:, None, None], s1, s2]          # (G,NSTEN,NSTEN,...)
        return np.einsum("ga,gb,gab...->g...", h["lagw"][f, :, 0],
                         h["lagw"][f, :, 1], patch)

    def extend(self, values, kind="scalar"):
        """Pad a per-face field with a width-2 halo filled from neighbor faces.

        kind:
          'scalar' -- pointwise function on the sphere (components of X, psi, ...)
          'deg1'   -- graph value u = sqrt(1+|y|^2) * s, rescaled by homogeneity
          'cov'    -- covector chart components, trailing axis (..., 2)
          'bilin'  -- symmetric 2-tensor chart components, trailing axes (..., 2, 2)
        """
        M, H = self.M, HALO
        E = M + 2 * H
        comp = values.shape[3:]
        ext = np.empty((6, E, E) + comp, dtype=float)
        ext[:, H:-H, H:-H] = values
        gi, gj = self._ghost_ij
        hal = self._halo
        if kind == "deg1":
            svals = values / self.w.reshape((6, M, M) + (1,) * len(comp))
        for f in range(6):
            if kind == "scalar":
                ext[f, gi, gj] = self._gather_interp(values, f)
            elif kind == "deg1":
                ext[f, gi, gj] = self._gather_interp(svals, f) * hal["znorm"][f]
            elif kind == "cov":
                wp = self._gather_interp(values, f)         # (G,2) owner components
                ext[f, gi, gj] = np.einsum("gci,gc->gi", hal["jac"][f], wp)
            elif kind == "bilin":
                gp = self._gather_interp(values, f)         # (G,2,2)
                ext[f, gi, gj] = np.einsum("gci,gdj,gcd->gij", hal["jac"][f],
                                           hal["jac"][f], gp)
            else:
                raise GridError(f"unknown halo kind {kind!r}")
        return ext

    # ---------- stencils ----------

    def d1(self, ext, axis):
        """4th-order first derivative along chart axis (1 or 2), consumes the halo."""
        c = 1.0 / (12.0 * self.h)
        if axis == 1:
            return c * (ext[:, :-4] - 8 * ext[:, 1:-3] + 8 * ext[:, 3:-1] - ext[:, 4:])
        return c * (ext[:, :, :-4] - 8 * ext[:, :, 1:-3]
                    + 8 * ext[:, :, 3:-1] - ext[:, :, 4:])

    def d2(self, ext, axis):
        c = 1.0 / (12.0 * self.h ** 2)
        if axis == 1:
            return c * (-ext[:, :-4] + 16 * ext[:, 1:-3] - 30 * ext[:, 2:-2]
                        + 16 * ext[:, 3:-1] - ext[:, 4:])
        return c * (-ext[:, :, :-4] + 16 * ext[:, :, 1:-3] - 30 * ext[:, :, 2:-2]
                    + 16 * ext[:, :, 3:-1] - ext[:, :, 4:])

    def chart_derivs_from_ext(self, ext):
        """(f_1, f_2, f_11, f_12, f_22) on the interior nodes from an extended field."""
        H = HALO
        f1 = self.d1(ext, 1)[:, :, H:-H]
        f2 = self.d1(ext, 2)[:, H:-H]
        f11 = self.d2(ext, 1)[:, :, H:-H]
        f22 = self.d2(ext, 2)[:, H:-H]
        f12 = self.d1(self.d1(ext, 1), 2)
        return f1, f2, f11, f12, f22

    def chart_derivs(self, values, kind="scalar"):
        return self.chart_derivs_from_ext(self.extend(values, kind))

    def d1_face(self, values, axis):
        """4th-order chart derivative from same-face values only.

        Centered stencils inside, one-sided closures in the two edge layers.
        Derived per-chart fields (metric entries, log densities, tensor
        components) carry their own chart's truncation error; a halo ghost of
        such a field holds the neighbor chart's error instead, so a centered
        stencil across the seam degrades to ~O(h^2). Staying on-face keeps
        uniform 4th order. (The primary field u is extended exactly, so its
        derivatives still use the halo versions above.)
        """
        v = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
        out = np.empty_like(v)
        c = 1.0 / (12.0 * self.h)
        out[..., 2:-2] = c * (v[..., :-4] - 8 * v[..., 1:-3]
                              + 8 * v[..., 3:-1] - v[..., 4:])
        out[..., 0] = c * (-25 * v[..., 0] + 48 * v[..., 1] - 36 * v[..., 2]
                           + 16 * v[..., 3] - 3 * v[..., 4])
        out[..., 1] = c * (-3 * v[..., 0] - 10 * v[..., 1] + 18 * v[..., 2]
                           - 6 * v[..., 3] + v[..., 4])
        out[..., -1] = -c * (-25 * v[..., -1] + 48 * v[..., -2] - 36 * v[..., -3]
                             + 16 * v[..., -4] - 3 * v[..., -5])
        out[..., -2] = -c * (-3 * v[..., -1] - 10 * v[..., -2] + 18 * v[..., -3]
                             - 6 * v[..., -4] + v[..., -5])
        return np.moveaxis(out, -1, axis)

    def grad_chart(self, values):
        """(d/dy1, d/dy2) of a per-chart nodal field, on-face stencils."""
        return self.d1_face(values, 1), self.d1_face(values, 2)

    # ---------- orthonormal tangent frames ----------

    def _build_frames(self):
        # Gram-Schmidt the projected chart tangents at every node; P[a,i] = e_a . t_i
        # converts chart Hessians to orthonormal-frame components (|det P| = 1/w)
        p = self.nodes                                      # (6,M,M,3)
        t1 = np.broadcast_to(self.tangents[:, None, None, 0, :], p.shape)
        t2 = np.broadcast_to(self.tangents[:, None, None, 1, :], p.shape)
        v1 = t1 - np.einsum("...k,...k->...", t1, p)[..., None] * p
        e1 = v1 / np.linalg.norm(v1, axis=-1, keepdims=True)
        v2 = t2 - np.einsum("...k,...k->...", t2, p)[..., None] * p
        v2 = v2 - np.einsum("...k,...k->...", v2, e1)[..., None] * e1
        e2 = v2 / np.linalg.norm(v2, axis=-1, keepdims=True)
        self.frame = np.stack([e1, e2], axis=-2)            # (6,M,M,2,3)
        P = np.stack([np.stack([np.einsum("...k,...k->...", e1, t1),
                                np.einsum("...k,...k->...", e1, t2)], -1),
                      np.stack([np.einsum("...k,...k->...", e2, t1),
                                np.einsum("...k,...k->...", e2, t2)], -1)], -2)
        self.frameP = P
        det = P[..., 0, 0] * P[..., 1, 1] - P[..., 0, 1] * P[..., 1, 0]
        inv = np.empty_like(P)
        inv[..., 0, 0] = P[..., 1, 1]
        inv[..., 1, 1] = P[..., 0, 0]
        inv[..., 0, 1] = -P[..., 0, 1]
        inv[..., 1, 0] = -P[..., 1, 0]
        self.frameP_inv = inv / det[..., None, None]
        self.frameP_det = det

    # ---------- duplicate (shared edge/corner) nodes ----------

    def _build_duplicate_map(self):
        key = np.round(self.nodes.reshape(-1, 3), 12)
        groups = {}
        for flat, k in enumerate(map(tuple, key)):
            groups.setdefault(k, []).append(flat)
        src, dst = [], []
        for members in groups.values():
            if len(members) > 1:
                members.sort()
                for m in members[1:]:
                    src.append(members[0])
                    dst.append(m)
        self._dup_src = np.array(src, dtype=np.int64)
        self._dup_dst = np.array(dst, dtype=np.int64)

    def sync_duplicates(self, sphere_values):
        """Copy the first-face value onto duplicate edge/corner nodes (in place).

        Operates on 0-homogeneous per-node fields (e.g. s); keeps the six charts
        consistent after independent per-face updates.
        """
        flat = sphere_values.reshape(-1)
        flat[self._dup_dst] = flat[self._dup_src]
        return sphere_values

    # ---------- interpolation at arbitrary directions ----------

    def interpolate_at_directions(self, values, dirs):
        """Evaluate a per-node scalar field at unit directions (Q,3)."""
        dirs = np.asarray(dirs, dtype=float)
        single = dirs.ndim == 1
        p = np.atleast_2d(dirs)
        dots = p @ self.axes.T
        own = np.argmax(dots, axis=1)
        alpha = np.take_along_axis(dots, own[:, None], axis=1)[:, 0]
        to = self.tangents[own]
        yq = np.einsum("qk,qck->qc", p, to) / alpha[:, None]
        idx = np.clip(np.floor((yq + 1.0) / self.h).astype(np.int64)
                      - (NSTEN // 2 - 1), 0, self.M - NSTEN)
        w1 = _lagrange_weights(self.ys[idx[:, 0][:, None] + np.arange(NSTEN)], yq[:, 0])
        w2 = _lagrange_weights(self.ys[idx[:, 1][:, None] + np.arange(NSTEN)], yq[:, 1])
        s1 = idx[:, 0][:, None, None] + np.arange(NSTEN)[None, :, None]
        s2 = idx[:, 1][:, None, None] + np.arange(NSTEN)[None, None, :]
        patch = values[own[:, None, None], s1, s2]
        out = np.einsum("qa,qb,qab->q", w1, w2, patch)
        return float(out[0]) if single else out


def make_grid(n, resolution):
    """Grid factory; resolution is N for n=1 and per-face M for n=2."""
    if n == 1:
        return CircleGrid(resolution)
    if n == 2:
        return CubedSphereGrid(resolution)
    raise ConfigError(f"n must be 1 or 2, got {n}")
