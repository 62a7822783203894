"""Support-function fields, the induced embedding, and curvature data.

A convex body containing the origin is described by its support function s on
the unit sphere.  On the circle the field is stored as nodal s values; on the
cubed sphere the master unknown is the per-face graph value u = w * s,
w = sqrt(1 + |y|^2), because the Hessian D^2 u of the 1-homogeneous extension
is exactly what both the curvature matrix and the flow right-hand side need.
"""

import numpy as np

from .errors import ConfigError, ConvexityLost, GridError
from .grids import CircleGrid, CubedSphereGrid


class SupportField:
    """Support function sampled on a grid; n=2 also carries graph values u."""

    def __init__(self, grid, s=None, u=None):
        self.grid = grid
        self.n = grid.n
        if grid.n == 1:
            if s is None:
                raise GridError("circle support field needs s values")
            self.s = np.asarray(s, dtype=float)
            if self.s.shape != (grid.N,):
                raise GridError(f"expected s shape {(grid.N,)}, got {self.s.shape}")
        else:
            if u is not None:
                self.u = np.asarray(u, dtype=float)
            elif s is not None:
                self.u = grid.w * np.asarray(s, dtype=float)
            else:
                raise GridError("sphere support field needs s or u values")
            if self.u.shape != (6, grid.M, grid.M):
                raise GridError(f"expected u shape {(6, grid.M, grid.M)}, got {self.u.shape}")
            self.s = self.u / grid.w

    def copy(self):
        if self.n == 1:
            return SupportField(self.grid, s=self.s.copy())
        return SupportField(self.grid, u=self.u.copy())

    def min_s(self):
        return float(np.min(self.s))

    def max_s(self):
        return float(np.max(self.s))


def ellipsoid_support(grid, Q):
    """Support field of the ellipsoid with s(p) = sqrt(p^T Q p), Q SPD.

    For semi-axes a_i along the coordinate axes, Q = diag(a_i^2).
    """
    dim = grid.n + 1
    Q = np.asarray(Q, dtype=float)
    if Q.shape != (dim, dim):
        raise ConfigError(f"ellipsoid matrix must be {dim}x{dim}, got {Q.shape}")
    if np.max(np.abs(Q - Q.T)) > 1e-12 * max(1.0, np.max(np.abs(Q))):
        raise ConfigError("ellipsoid matrix must be symmetric")
    evals = np.linalg.eigvalsh(0.5 * (Q + Q.T))
    if np.min(evals) <= 0:
        raise ConfigError("ellipsoid matrix must be positive definite")
    p = grid.nodes
    s = np.sqrt(np.einsum("...i,ij,...j->...", p, Q, p))
    return SupportField(grid, s=s)


def fourier_support(grid, c0, a=(), b=()):
    """Circle support field s(theta) = c0 + sum_k a_k cos(k theta) + b_k sin(k theta).

    List index i corresponds to harmonic k = i + 1.
    """
    if grid.n != 1:
        raise ConfigError("fourier initial data is only defined on the circle")
    th = grid.thetas
    s = np.full(grid.N, float(c0))
    for i, ak in enumerate(a):
        s += float(ak) * np.cos((i + 1) * th)
    for i, bk in enumerate(b):
        s += float(bk) * np.sin((i + 1) * th)
    return SupportField(grid, s=s)


def _chart_hessian(field):
    """(u1, u2, D2u) on the sphere grid, D2u shape (6,M,M,2,2)."""
    g = field.grid
    u1, u2, u11, u12, u22 = g.chart_derivs(field.u, kind="deg1")
    D2 = np.empty(u11.shape + (2, 2))
    D2[..., 0, 0] = u11
    D2[..., 0, 1] = u12
    D2[..., 1, 0] = u12
    D2[..., 1, 1] = u22
    return u1, u2, D2


def embed(field, with_derivs=False):
    """Map support values to surface points X = s p + grad s.

    n=1 returns X (N,2); n=2 returns X (6,M,M,3) in ambient coordinates.
    With with_derivs=True also returns chart first/second derivative data
    needed downstream (see invariants).
    """
    g = field.grid
    if field.n == 1:
        sp = g.deriv(field.s, 1)
        tang = np.stack([-np.sin(g.thetas), np.cos(g.thetas)], axis=-1)
        X = field.s[:, None] * g.nodes + sp[:, None] * tang
        if with_derivs:
            return X, sp
        return X
    u1, u2, D2 = _chart_hessian(field)
    t1 = g.tangents[:, None, None, 0, :]
    t2 = g.tangents[:, None, None, 1, :]
    a = g.axes[:, None, None, :]
    Y1 = g.Y1[None, :, :, None]
    Y2 = g.Y2[None, :, :, None]
    X = (u1[..., None] * t1 + u2[..., None] * t2
         + (field.u - g.Y1[None] * u1 - g.Y2[None] * u2)[..., None] * a)
    if with_derivs:
        return X, (u1, u2, D2)
    return X


def curvature_matrix(field, D2=None):
    """Frame components of b = hess s + s id (SPD iff the body is convex).

    n=1 returns the scalar b = s + s''.  n=2 returns (6,M,M,2,2) in the
    orthonormal tangent frame: b = w * P^{-T} (D^2 u) P^{-1}.
    """
    g = field.grid
    if field.n == 1:
        return field.s + g.deriv(field.s, 2)
    if D2 is None:
        _, _, D2 = _chart_hessian(field)
    Pi = g.frameP_inv
    return g.w[..., None, None] * np.einsum("...ca,...cd,...db->...ab", Pi, D2, Pi)


def hessian_eigs(D2):
    """Eigenvalues (min, max) of symmetric 2x2 fields, closed form."""
    tr = D2[..., 0, 0] + D2[..., 1, 1]
    det = D2[..., 0, 0] * D2[..., 1, 1] - D2[..., 0, 1] * D2[..., 1, 0]
    disc = np.sqrt(np.maximum((tr / 2) ** 2 - det, 0.0))
    return tr / 2 - disc, tr / 2 + disc


def convexity_margin(field, D2=None):
    """Smallest curvature eigenvalue over the grid; > 0 means strictly convex."""
    g = field.grid
    if field.n == 1:
        return float(np.min(field.s + g.deriv(field.s, 2)))
    if D2 is None:
        _, _, D2 = _chart_hessian(field)
    lo, _ = hessian_eigs(D2)
    return float(np.min(lo))


def require_convex(field, D2=None, eps=1e-10):
    m = convexity_margin(field, D2)
    if not np.isfinite(m) or m <= eps:
        raise ConvexityLost("curvature matrix lost positivity", value=m)
    return m


def gradient_norm(field):
    """Per-node |grad s| on the sphere (tangential gradient)."""
    g = field.grid
    if field.n == 1:
        return np.abs(g.deriv(field.s, 1))
    X = embed(field)
    gr = X - field.s[..., None] * g.nodes
    return np.linalg.norm(gr, axis=-1)


def homogeneity_residual(field):
    """Max mismatch of s across duplicate chart nodes (coherence of the six charts)."""
    if field.n == 1:
        return 0.0
    g = field.grid
    flat = field.s.reshape(-1)
    if g._dup_dst.size == 0:
        return 0.0
    return float(np.max(np.abs(flat[g._dup_dst] - flat[g._dup_src])))


def apply_linear_map(field, A):
    """Support field of the image body A . K, resampled on the same grid.

    Uses s_A(p) = |A^T p| * s(A^T p / |A^T p|) and grid interpolation
    (trigonometric on the circle, degree-7 stencils on the sphere).
    """
    g = field.grid
    A = np.asarray(A, dtype=float)
    dim = field.n + 1
    if A.shape != (dim, dim):
        raise ConfigError(f"linear map must be {dim}x{dim}")
    if abs(np.linalg.det(A)) < 1e-14:
        raise ConfigError("linear map must be invertible")
    q = g.nodes @ A                      # rows: A^T p
    qn = np.linalg.norm(q, axis=-1)
    qdir = q / qn[..., None]
    if field.n == 1:
        ang = np.arctan2(qdir[:, 1], qdir[:, 0])
        vals = g.interpolate(field.s, ang)
    else:
        vals = g.interpolate_at_directions(field.s, qdir.reshape(-1, 3)).reshape(qn.shape)
    return SupportField(g, s=qn * vals)
