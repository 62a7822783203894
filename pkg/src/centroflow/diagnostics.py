"""Machine-checkable verdicts for the laws the flow must satisfy.

Bound checks (inequalities with margins) run at 1e-8 relative tolerance;
identity checks involve centered time differences of invariant series and run
at 5% relative tolerance.  Tensor evolution identities are checked through
scalar contractions: the area law (trace of the metric evolution), the
integral |T|^2 law, and the pointwise |T|^2 law at its spatial maximum, where
tangential reparametrization of a scalar drops out to first order.
"""

import numpy as np

from . import invariants as inva
from . import oracles
from .support import curvature_matrix, gradient_norm, hessian_eigs

SPHERE_AREA = {1: 2.0 * np.pi, 2: 4.0 * np.pi}

SERIES_COLUMNS = ("t", "area", "area_rhs", "supT2", "supC2", "min_s", "max_s",
                  "eig_min_b", "eig_max_b", "rho_min", "rho_max", "roundness",
                  "residual_relsupport", "residual_prop21")


def _smooth_max(grid, values):
    """Max of a nodal scalar; Newton-refined off the lattice on circle grids."""
    if grid.n == 1:
        return grid.refine_max(values)[1]
    return float(np.max(values))


class BoundCheck:
    """Named inequality verdict: margin[k] = bound_k - observed_k (>= 0 holds)."""

    def __init__(self, name, margins, tolerance):
        self.name = name
        self.margins = np.asarray(margins, dtype=float)
        self.tolerance = tolerance
        worst = float(np.min(self.margins)) if self.margins.size else 0.0
        if worst >= 0.0:
            self.verdict = "Holds"
        elif worst >= -tolerance:
            self.verdict = "HoldsWithinTol"
        else:
            self.verdict = "Violated"
        self.worst_margin = worst

    def to_dict(self):
        return {"name": self.name, "verdict": self.verdict,
                "tolerance": self.tolerance, "worst_margin": self.worst_margin,
                "margins": [float(m) for m in self.margins]}


class SeriesBundle:
    """Per-snapshot invariant stacks and the derived scalar series."""

    def __init__(self, traj):
        self.traj = traj
        self.inv = [inva.compute_invariants(st.field) for st in traj.snapshots]
        self.t = traj.times
        n = traj.snapshots[0].field.n
        self.n = n
        self.area = np.array([iv.area for iv in self.inv])
        self.int_T2 = np.array(
            [inva.integrate_mu(iv.grid, iv.norm_T2, iv.sqrt_det_g) for iv in self.inv])
        self.area_rhs = 0.5 * n * self.int_T2
        self.supT2 = np.array([_smooth_max(iv.grid, iv.norm_T2) for iv in self.inv])
        self.supC2 = np.array([_smooth_max(iv.grid, iv.norm_C2) for iv in self.inv])
        self.min_s = np.array([st.field.min_s() for st in traj.snapshots])
        self.max_s = np.array([st.field.max_s() for st in traj.snapshots])
        eig_lo, eig_hi = [], []
        for st in traj.snapshots:
            b = curvature_matrix(st.field)
            if n == 1:
                eig_lo.append(float(np.min(b)))
                eig_hi.append(float(np.max(b)))
            else:
                lo, hi = hessian_eigs(b)
                eig_lo.append(float(np.min(lo)))
                eig_hi.append(float(np.max(hi)))
        self.eig_min_b = np.array(eig_lo)
        self.eig_max_b = np.array(eig_hi)
        self.rho_min = np.array([float(np.min(iv.rho)) for iv in self.inv])
        self.rho_max = np.array([float(np.max(iv.rho)) for iv in self.inv])
        self.roundness = np.array(
            [oracles.best_fit_ellipsoid(st.field)[1] for st in traj.snapshots])
        self.residual_relsupport = np.array(
            [iv.residual_relsupport for iv in self.inv])
        self._evolution_residuals()

    def _evolution_residuals(self):
        """Centered-difference residuals of the scalar evolution contractions.

        r_area: d(Area)/dt vs (n/2) int |T|^2 dmu            [metric trace law]
        r_intT2: d/dt int |T|^2 dmu vs int (rhs + (n/2)|T|^4) dmu
        r_supT2: d/dt |T|^2 at its spatial max vs the pointwise rhs
        All are relative; endpoints carry nan.
        """
        K = len(self.t)
        nan = np.full(K, np.nan)
        self.r_area, self.r_intT2, self.r_supT2 = nan.copy(), nan.copy(), nan.copy()
        if K < 3:
            self.residual_prop21 = nan
            return
        tevo = [inva.t2_evolution_rhs(iv) for iv in self.inv]
        int_rhs = np.array([
            inva.integrate_mu(iv.grid, te + 0.5 * self.n * iv.norm_T2 ** 2, iv.sqrt_det_g)
            for iv, te in zip(self.inv, tevo)])
        sup_rhs = np.empty(K)
        for k, (iv, te) in enumerate(zip(self.inv, tevo)):
            if self.n == 1:
                # evaluate at the interior max, not the nearest node: the node
                # offset costs O(h^2 rhs'') which dominates the residual floor
                th, _ = iv.grid.refine_max(iv.norm_T2)
                sup_rhs[k] = iv.grid.interpolate(te, th)
            else:
                sup_rhs[k] = float(te.reshape(-1)[np.argmax(iv.norm_T2)])
        for k in range(1, K - 1):
            dt2 = self.t[k + 1] - self.t[k - 1]
            dA = (self.area[k + 1] - self.area[k - 1]) / dt2
            self.r_area[k] = abs(dA - self.area_rhs[k]) / max(abs(self.area_rhs[k]), 1e-12)
            dI = (self.int_T2[k + 1] - self.int_T2[k - 1]) / dt2
            self.r_intT2[k] = abs(dI - int_rhs[k]) / max(abs(int_rhs[k]), 1e-12)
            dS = (self.supT2[k + 1] - self.supT2[k - 1]) / dt2
            self.r_supT2[k] = abs(dS - sup_rhs[k]) / max(abs(sup_rhs[k]), 1e-12)
        self.residual_prop21 = np.fmax(np.fmax(self.r_area, self.r_intT2), self.r_supT2)
        self.residual_prop21[0] = self.residual_prop21[-1] = np.nan

    def rows(self):
        cols = dict(t=self.t, area=self.area, area_rhs=self.area_rhs,
                    supT2=self.supT2, supC2=self.supC2, min_s=self.min_s,
                    max_s=self.max_s, eig_min_b=self.eig_min_b,
                    eig_max_b=self.eig_max_b, rho_min=self.rho_min,
                    rho_max=self.rho_max, roundness=self.roundness,
                    residual_relsupport=self.residual_relsupport,
                    residual_prop21=self.residual_prop21)
        return [{c: float(cols[c][k]) for c in SERIES_COLUMNS}
                for k in range(len(self.t))]


def check_c0(traj, tol=1e-8):
    """Double-exponential growth bounds on min/max of s.

    Anchored at snapshot 0 for plain runs; for renormalized runs each interval
    re-anchors at the previous snapshot divided by its recorded factor.
    """
    n = traj.snapshots[0].field.n
    c = (n + 1.0) / n
    renorm = any(abs(f - 1.0) > 0 for f in traj.renorm_factors)
    lo_m, hi_m = [0.0], [0.0]
    for k in range(1, len(traj.snapshots)):
        if renorm:
            a_min = traj.snapshots[k - 1].field.min_s() / traj.renorm_factors[k - 1]
            a_max = traj.snapshots[k - 1].field.max_s() / traj.renorm_factors[k - 1]
            dt = traj.snapshots[k].t - traj.snapshots[k - 1].t
        else:
            a_min = traj.snapshots[0].field.min_s()
            a_max = traj.snapshots[0].field.max_s()
            dt = traj.snapshots[k].t - traj.snapshots[0].t
        grow = np.exp(c * dt)
        lower = min(a_min ** grow, 1.0)
        upper = max(a_max ** grow, 1.0)
        smin = traj.snapshots[k].field.min_s()
        smax = traj.snapshots[k].field.max_s()
        lo_m.append((smin - lower) / max(abs(lower), 1e-300))
        hi_m.append((upper - smax) / max(abs(upper), 1e-300))
    return (BoundCheck("support_lower_growth_bound", lo_m, tol),
            BoundCheck("support_upper_growth_bound", hi_m, tol))


def check_c1(traj, tol=1e-8):
    """max |grad s| <= running max of s (gradient bound from convexity)."""
    margins = []
    run_max = -np.inf
    for st in traj.snapshots:
        run_max = max(run_max, st.field.max_s())
        margins.append(run_max - float(np.max(gradient_norm(st.field))))
    return BoundCheck("gradient_bound", margins, tol)


def check_pinch(traj, eps_cvx=1e-10):
    """Positivity of the curvature matrix over the run; reports empirical L."""
    bundle_lo, bundle_hi = [], []
    for st in traj.snapshots:
        b = curvature_matrix(st.field)
        if st.field.n == 1:
            bundle_lo.append(float(np.min(b)))
            bundle_hi.append(float(np.max(b)))
        else:
            lo, hi = hessian_eigs(b)
            bundle_lo.append(float(np.min(lo)))
            bundle_hi.append(float(np.max(hi)))
    L = max(max(bundle_hi), 1.0 / min(bundle_lo)) if min(bundle_lo) > 0 else np.inf
    margins = [lo - eps_cvx for lo in bundle_lo]
    return float(L), BoundCheck("curvature_pinch_positive", margins, 0.0)


def check_area_law(traj, bundle, tol_mono=1e-10, tol_ident=0.01, tol_iso=1e-6):
    """(monotone, identity, isoperimetric) verdicts for the area series."""
    A = bundle.area
    mono = BoundCheck("area_monotone", A[1:] - A[:-1] if len(A) > 1 else [0.0],
                      tol_mono)
    # identity margin convention: tol*max(1, rhs) - |diff| >= 0 means holds
    idm = []
    for k in range(1, len(A) - 1):
        dt2 = bundle.t[k + 1] - bundle.t[k - 1]
        dA = (A[k + 1] - A[k - 1]) / dt2
        idm.append(tol_ident * max(1.0, bundle.area_rhs[k])
                   - abs(dA - bundle.area_rhs[k]))
    ident = BoundCheck("area_identity", idm if idm else [0.0], 0.0)
    iso = BoundCheck("area_isoperimetric",
                     SPHERE_AREA[bundle.n] + tol_iso - A, 0.0)
    return mono, ident, iso


def check_tchebychev_laws(traj, bundle, tol=1e-8, ident_tol=0.05, decay_ratio=0.1):
    """A-priori sup |T|^2 bound, pointwise evolution identity, decay trend."""
    n = bundle.n
    bound = max((n + 3.0) / n, bundle.supT2[0])
    bcheck = BoundCheck("tchebychev_sup_bound", bound + tol - bundle.supT2, 0.0)
    interior = bundle.r_supT2[1:-1] if len(bundle.t) >= 3 else np.array([])
    ident = BoundCheck("tchebychev_identity",
                       ident_tol - interior if interior.size else [0.0], 0.0)
    decay = BoundCheck("tchebychev_decay",
                       [decay_ratio * bundle.supT2[0] - bundle.supT2[-1]], 0.0)
    return bcheck, ident, decay


def check_evolution_identities(traj, bundle):
    """Residual series of the scalar contractions (area, integral, pointwise)."""
    return {"r_area": bundle.r_area, "r_intT2": bundle.r_intT2,
            "r_supT2": bundle.r_supT2, "residual_prop21": bundle.residual_prop21}


def classify(traj, drift_tol=1e-6):
    """Shrinking / Expanding / Stationary / Undetermined from the s series."""
    if traj.termination == "Extinction":
        return "Shrinking"
    if traj.termination == "Blowup":
        return "Expanding"
    s0 = traj.snapshots[0].field.s
    drift = max(float(np.max(np.abs(st.field.s - s0))) for st in traj.snapshots)
    if drift / max(float(np.max(np.abs(s0))), 1e-300) <= drift_tol:
        return "Stationary"
    max_s = np.array([st.field.max_s() for st in traj.snapshots])
    min_s = np.array([st.field.min_s() for st in traj.snapshots])
    if np.all(np.diff(max_s) <= 1e-12) and max_s[-1] <= 0.5 * max_s[0]:
        return "Shrinking"
    if min_s[-1] >= 2.0 * min_s[0]:
        return "Expanding"
    return "Undetermined"


class DiagnosticsReport:
    def __init__(self, checks, residuals, summary, pinch_L):
        self.checks = checks
        self.residuals = residuals
        self.summary = summary
        self.pinch_L = pinch_L

    @property
    def violated(self):
        return [c.name for c in self.checks if c.verdict == "Violated"]

    def to_dict(self):
        return {
            "checks": [c.to_dict() for c in self.checks],
            "residuals": {k: [None if np.isnan(v) else float(v) for v in arr]
                          for k, arr in self.residuals.items()},
            "summary": self.summary,
            "pinch_L": None if np.isinf(self.pinch_L) else float(self.pinch_L),
        }


def run_report(traj, bundle=None, decay_ratio=None):
    """All checks on one trajectory; decay check only when a ratio is given."""
    if bundle is None:
        bundle = SeriesBundle(traj)
    lo, hi = check_c0(traj)
    c1 = check_c1(traj)
    L, pinch = check_pinch(traj)
    mono, ident, iso = check_area_law(traj, bundle)
    tb, tident, tdecay = check_tchebychev_laws(
        traj, bundle, decay_ratio=decay_ratio if decay_ratio else 0.1)
    checks = [lo, hi, c1, pinch, mono, ident, iso, tb, tident]
    if decay_ratio is not None:
        checks.append(tdecay)
    residuals = check_evolution_identities(traj, bundle)
    summary = {
        "classification": classify(traj),
        "termination": traj.termination,
        "roundness_initial": float(bundle.roundness[0]),
        "roundness_final": float(bundle.roundness[-1]),
        "supT2_initial": float(bundle.supT2[0]),
        "supT2_final": float(bundle.supT2[-1]),
    }
    return DiagnosticsReport(checks, residuals, summary, L), bundle
