"""Independent high-precision oracle for the frozen constants in the tests.

Everything here is derived straight from the support function with mpmath
(dps = 50), never through the package code paths: curve invariants come from
the closed forms in the theta parametrization, sphere chart invariants from
symbolic-style differentiation of the homogeneous degree-1 extension on the
cube faces. Run as a script to regenerate the table of constants that the
test modules assert against.

Curve conventions (n = 1, support s(theta)):
  b = s'' + s            curvature radius, must stay positive
  g = b / s              centro-affine metric (1x1)
  psi = 1 / (s^3 b)      Tchebychev function, = det g / [X', X]^2
  K = 1 / b              Gauss curvature
  rho = s K^{-1/3}       equiaffine support
  T = (3/2) s'/s + (1/2) b'/b          (lower index)
  |T|^2 = T^2 s / b
  Gamma = (1/2)(b'/b - s'/s)           Levi-Civita symbol of g
  H = (s/b) (T' - Gamma T)             scalar mean curvature (1/n) Div T
  flow rhs = (s/2) log(s^3 b)
"""

import mpmath as mp

mp.mp.dps = 50


# ---------------------------------------------------------------- n = 1 ----

def curve_invariants(s_func, th):
    """All scalar invariants of a convex curve at one angle via mp.diff."""
    s = s_func(th)
    s1 = mp.diff(s_func, th, 1)
    s2 = mp.diff(s_func, th, 2)
    s3 = mp.diff(s_func, th, 3)
    s4 = mp.diff(s_func, th, 4)
    b, b1, b2 = s2 + s, s3 + s1, s4 + s2
    T = mp.mpf(3) / 2 * s1 / s + mp.mpf(1) / 2 * b1 / b
    T1 = mp.mpf(3) / 2 * (s2 / s - (s1 / s) ** 2) \
        + mp.mpf(1) / 2 * (b2 / b - (b1 / b) ** 2)
    Gam = (b1 / b - s1 / s) / 2
    return dict(
        s=s, g=b / s, psi=1 / (s ** 3 * b), rho=s * b ** (mp.mpf(1) / 3),
        norm_T2=T ** 2 * s / b, H=(s / b) * (T1 - Gam * T),
        rhs=(s / 2) * mp.log(s ** 3 * b))


def curve_T2(s_func, th):
    return curve_invariants(s_func, th)["norm_T2"]


def curve_area(s_func, breakpoints):
    """Centro-affine length int sqrt(b/s) dtheta."""
    f = lambda th: mp.sqrt((mp.diff(s_func, th, 2) + s_func(th)) / s_func(th))
    return mp.quad(f, breakpoints)


def curve_int_T2(s_func, breakpoints):
    """int |T|^2 dmu with dmu = sqrt(b/s) dtheta."""
    def f(th):
        v = curve_invariants(s_func, th)
        return v["norm_T2"] * mp.sqrt(v["g"])
    return mp.quad(f, breakpoints)


def curve_sup_T2(s_func, period, samples=400, iters=200):
    """Golden-section refinement of the max of |T|^2 over one period."""
    pts = [period * mp.mpf(k) / samples for k in range(samples)]
    k0 = max(range(samples), key=lambda k: curve_T2(s_func, pts[k]))
    a = pts[k0 - 1]
    b = pts[(k0 + 1) % samples]
    if b < a:
        b += period
    gr = (mp.sqrt(5) - 1) / 2
    for _ in range(iters):
        c1 = b - gr * (b - a)
        c2 = a + gr * (b - a)
        if curve_T2(s_func, c1) > curve_T2(s_func, c2):
            b = c2
        else:
            a = c1
    return curve_T2(s_func, (a + b) / 2), (a + b) / 2


def translated_circle_sup_T2(c):
    """Closed form: s = 1 + c cos, |T|^2 = (9/4) c^2 sin^2 / s, maximized."""
    u = (-1 + mp.sqrt(1 - c * c)) / c
    return (mp.mpf(9) / 4) * c * c * (1 - u * u) / (1 + c * u)


# ---------------------------------------------------------------- n = 2 ----

# chart embeddings z(y1, y2) per face, matching the right-handed frames of
# the cubed sphere (outward normal = face axis at the center)
FACES = {
    '+x': lambda y1, y2: (mp.mpf(1), y1, y2),
    '-x': lambda y1, y2: (mp.mpf(-1), y2, y1),
    '+y': lambda y1, y2: (y2, mp.mpf(1), y1),
    '-y': lambda y1, y2: (y1, mp.mpf(-1), y2),
    '+z': lambda y1, y2: (y1, y2, mp.mpf(1)),
    '-z': lambda y1, y2: (y2, y1, mp.mpf(-1)),
}


def support_xyz(c):
    """s = 1 + c x y z on the unit sphere, extended homogeneous of degree 1."""
    def st(z1, z2, z3):
        r = mp.sqrt(z1 * z1 + z2 * z2 + z3 * z3)
        return r + c * z1 * z2 * z3 / (r * r)
    return st


def support_ellipsoid(a1, a2, a3):
    def st(z1, z2, z3):
        return mp.sqrt((a1 * z1) ** 2 + (a2 * z2) ** 2 + (a3 * z3) ** 2)
    return st


def chart_invariants(st, face, y1, y2):
    """Invariant stack at one chart point from the graph function u = s * w.

    u(y) = support of the body at direction (chart embedding of y); all
    invariants follow from u and its derivatives: g = D2u/u, Ghat from the
    Gauss decomposition, Gamma from derivatives of g, C = Ghat - Gamma.
    """
    emb = FACES[face]
    u = lambda a, b: st(*emb(a, b))
    d = lambda n1, n2: mp.diff(u, (y1, y2), (n1, n2))
    u0 = u(y1, y2)
    Du = [d(1, 0), d(0, 1)]
    u11, u12, u22 = d(2, 0), d(1, 1), d(0, 2)
    D2u = [[u11, u12], [u12, u22]]
    D3u = {(0, 0, 0): d(3, 0), (0, 0, 1): d(2, 1),
           (0, 1, 1): d(1, 2), (1, 1, 1): d(0, 3)}
    D3 = lambda k, i, j: D3u[tuple(sorted((k, i, j)))]
    w = mp.sqrt(1 + y1 * y1 + y2 * y2)
    s = u0 / w
    detD2u = u11 * u22 - u12 * u12
    g = [[D2u[i][j] / u0 for j in range(2)] for i in range(2)]
    detg = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    ginv = [[g[1][1] / detg, -g[0][1] / detg],
            [-g[0][1] / detg, g[0][0] / detg]]
    D2inv = [[u22 / detD2u, -u12 / detD2u], [-u12 / detD2u, u11 / detD2u]]
    Gh = [[[sum(D2inv[m][k] * (D3(k, i, j) + g[i][j] * Du[k])
                for k in range(2)) for j in range(2)] for i in range(2)]
          for m in range(2)]
    dg = [[[D3(i, j, l) / u0 - D2u[i][j] * Du[l] / u0 ** 2
            for l in range(2)] for j in range(2)] for i in range(2)]
    Gam = [[[sum(ginv[k][l] * (dg[j][l][i] + dg[i][l][j] - dg[i][j][l])
                 for l in range(2)) / 2 for j in range(2)] for i in range(2)]
           for k in range(2)]
    C = [[[Gh[k][i][j] - Gam[k][i][j] for j in range(2)] for i in range(2)]
         for k in range(2)]
    Clow = [[[sum(C[l][i][j] * g[l][k] for l in range(2)) for k in range(2)]
             for j in range(2)] for i in range(2)]
    T = [sum(C[k][k][i] for k in range(2)) / 2 for i in range(2)]
    Tup = [sum(ginv[i][j] * T[j] for j in range(2)) for i in range(2)]
    T2 = sum(Tup[i] * T[i] for i in range(2))
    Cup = [[[sum(ginv[i][a] * ginv[j][b] * ginv[k][c] * Clow[a][b][c]
                 for a in range(2) for b in range(2) for c in range(2))
             for k in range(2)] for j in range(2)] for i in range(2)]
    C2 = sum(Clow[i][j][k] * Cup[i][j][k]
             for i in range(2) for j in range(2) for k in range(2))
    detb = w ** 4 * detD2u

    def T_at(a, b):
        dd = lambda n1, n2: mp.diff(u, (a, b), (n1, n2))
        U0 = u(a, b)
        DU = [dd(1, 0), dd(0, 1)]
        V11, V12, V22 = dd(2, 0), dd(1, 1), dd(0, 2)
        DD2 = [[V11, V12], [V12, V22]]
        det2 = V11 * V22 - V12 * V12
        GG = [[DD2[i][j] / U0 for j in range(2)] for i in range(2)]
        detGG = GG[0][0] * GG[1][1] - GG[0][1] * GG[1][0]
        GGi = [[GG[1][1] / detGG, -GG[0][1] / detGG],
               [-GG[0][1] / detGG, GG[0][0] / detGG]]
        DD2i = [[V22 / det2, -V12 / det2], [-V12 / det2, V11 / det2]]
        D3U = {(0, 0, 0): dd(3, 0), (0, 0, 1): dd(2, 1),
               (0, 1, 1): dd(1, 2), (1, 1, 1): dd(0, 3)}
        DD3 = lambda k, i, j: D3U[tuple(sorted((k, i, j)))]
        GHH = [[[sum(DD2i[m][k] * (DD3(k, i, j) + GG[i][j] * DU[k])
                     for k in range(2)) for j in range(2)] for i in range(2)]
               for m in range(2)]
        dGG = [[[DD3(i, j, l) / U0 - DD2[i][j] * DU[l] / U0 ** 2
                 for l in range(2)] for j in range(2)] for i in range(2)]
        GAM = [[[sum(GGi[k][l] * (dGG[j][l][i] + dGG[i][l][j] - dGG[i][j][l])
                     for l in range(2)) / 2 for j in range(2)]
                for i in range(2)] for k in range(2)]
        CC = [[[GHH[k][i][j] - GAM[k][i][j] for j in range(2)]
               for i in range(2)] for k in range(2)]
        return [sum(CC[k][k][i] for k in range(2)) / 2 for i in range(2)]

    dT = [[mp.diff(lambda a, b, i=i: T_at(a, b)[i], (y1, y2), (1 - j, j))
           for j in range(2)] for i in range(2)]
    H = sum(ginv[i][j] * (dT[i][j] - sum(Gam[k][i][j] * T[k]
                                         for k in range(2)))
            for i in range(2) for j in range(2)) / 2
    return dict(
        s=s, g11=g[0][0], g12=g[0][1], g22=g[1][1], det_g=detg,
        T1=T[0], T2=T[1], norm_T2=T2, norm_C2=C2,
        psi=1 / (u0 ** 4 * detD2u), rho=s * detb ** mp.mpf('0.25'),
        H=H, J=C2 / 2, chi=C2 / 2 - 2 * T2 + 1,
        rhs_s=(s / 4) * mp.log(s ** 4 * detb))


# ------------------------------------------------------------- exact laws --

def sphere_radius(R0, t, n):
    return mp.mpf(R0) ** mp.e ** ((mp.mpf(n) + 1) / n * mp.mpf(t))


def ellipsoid_factor(rho0, t, n):
    n = mp.mpf(n)
    return mp.mpf(rho0) ** ((n + 2) / (2 * (n + 1))
                            * (mp.e ** ((n + 1) / n * mp.mpf(t)) - 1))


def main():
    show = lambda k, v: print(f"{k} = {mp.nstr(v, 22)}")
    c3 = mp.mpf('0.1')
    flower = lambda th: 1 + c3 * mp.cos(3 * th)
    for tag, th in (("pi/6", mp.pi / 6), ("pi/3", mp.pi / 3)):
        print(f"--- flower 1+0.1cos3 at {tag} ---")
        for k, v in curve_invariants(flower, th).items():
            show("  " + k, v)
    two = lambda th: 1 + mp.mpf('0.08') * mp.cos(2 * th) \
        + mp.mpf('0.02') * mp.sin(5 * th)
    print("--- two-mode 0.08cos2+0.02sin5 at 2pi*10/192 ---")
    for k, v in curve_invariants(two, 2 * mp.pi * 10 / 192).items():
        show("  " + k, v)
    pts16 = [2 * mp.pi * mp.mpf(k) / 16 for k in range(17)]
    show("two-mode area", curve_area(two, pts16))
    show("two-mode intT2", curve_int_T2(two, pts16))
    show("flower area", curve_area(flower, pts16))
    show("flower intT2", curve_int_T2(flower, pts16))
    show("flower supT2", curve_sup_T2(flower, 2 * mp.pi / 3)[0])
    tc = lambda th: 1 + mp.mpf('0.3') * mp.cos(th)
    show("translated c=0.3 area", curve_area(tc, [0, mp.pi, 2 * mp.pi]))
    show("translated c=0.3 intT2", curve_int_T2(tc, [0, mp.pi, 2 * mp.pi]))
    show("translated c=0.3 supT2", translated_circle_sup_T2(mp.mpf('0.3')))
    show("translated c=0.996 supT2", translated_circle_sup_T2(mp.mpf('0.996')))
    f05 = lambda th: 1 + mp.mpf('0.05') * mp.cos(3 * th)
    show("flower 0.05 area", curve_area(f05, pts16))
    show("1-exp(-2/3)", 1 - mp.e ** (mp.mpf(-2) / 3))
    show("exp(-1/2)", mp.e ** mp.mpf('-0.5'))
    show("2^(2/3)", mp.mpf(2) ** (mp.mpf(2) / 3))
    show("ln2/2", mp.log(2) / 2)
    show("log 16", mp.log(16))
    print("--- ellipsoid(2,1,1) +x (1/4,-1/2) ---")
    for k, v in chart_invariants(support_ellipsoid(2, 1, 1), '+x',
                                 mp.mpf(1) / 4, mp.mpf(-1) / 2).items():
        show("  " + k, v)
    print("--- s=1+0.3xyz +z (1/4,-1/2) ---")
    for k, v in chart_invariants(support_xyz(mp.mpf(3) / 10), '+z',
                                 mp.mpf(1) / 4, mp.mpf(-1) / 2).items():
        show("  " + k, v)
    print("--- s=1+0.3xyz +x (1/2,1/8) ---")
    for k, v in chart_invariants(support_xyz(mp.mpf(3) / 10), '+x',
                                 mp.mpf(1) / 2, mp.mpf(1) / 8).items():
        show("  " + k, v)


if __name__ == "__main__":
    main()
