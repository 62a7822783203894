"""How the stack transforms under linear maps of the ambient space.

The whole construction is equivariant under GL(n+1): applying A to the body
leaves g, |C|^2, |T|^2 and the area invariant when det A = 1, and for
general A the Tchebychev function obeys psi(A body) = psi(body)/(det A)^2
pointwise.  Since the support function of A body must be resampled on the
fixed grid, these are nontrivial interpolation-plus-geometry tests, not
algebraic identities of the code.  The best-fit ellipsoid inherits the
equivariance on exact ellipsoids: fit(A E) = A fit(E) A^T on shape matrices.
"""

import numpy as np

from centroflow.grids import CircleGrid
from centroflow.invariants import compute_invariants
from centroflow.oracles import best_fit_ellipsoid
from centroflow.support import apply_linear_map, ellipsoid_support, fourier_support


def sup_err(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def main():
    grid = CircleGrid(256)
    flower = fourier_support(grid, 1.0, a=[0.0, 0.0, 0.1])
    iv0 = compute_invariants(flower)

    # a mild special-linear map: rotated shear, condition number about 2.
    # harsher maps squeeze the body into a needle the fixed grid cannot
    # resolve, and the comparison degrades to interpolation noise.
    th = 0.3
    R = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    A = R @ np.array([[1.0, 0.55], [0.0, 1.0]]) @ R.T
    print("=== SL(2) invariance on the flower ===")
    print(f"A =\n{A}\n(det = {np.linalg.det(A):.12f})")
    ivA = compute_invariants(apply_linear_map(flower, A))
    for name, before, after in (
            ("area", iv0.area, ivA.area),
            ("max |T|^2", np.max(iv0.norm_T2), np.max(ivA.norm_T2)),
            ("max |C|^2", np.max(iv0.norm_C2), np.max(ivA.norm_C2)),
            ("max psi", np.max(iv0.psi), np.max(ivA.psi)),
            ("max rho", np.max(iv0.rho), np.max(ivA.rho))):
        print(f"  {name:10s} {before:.10f} -> {after:.10f} "
              f"(rel drift {abs(after - before) / abs(before):.2e})")

    print("\n=== GL scaling covariance of psi ===")
    # scaling keeps directions fixed, so the comparison is node by node;
    # psi picks up (det A)^(-2) = c^(-2(n+1)) and the product is invariant
    for c in (0.5, 2.0):
        ivc = compute_invariants(apply_linear_map(flower, c * np.eye(2)))
        drift = sup_err(ivc.psi * c ** 4, iv0.psi)
        print(f"  A = {c} I: sup |psi(A body) (det A)^2 - psi| = {drift:.3e}")

    print("\n=== best-fit ellipse equivariance ===")
    Q = np.diag([4.0, 1.0])
    spec0, round0 = best_fit_ellipsoid(ellipsoid_support(grid, Q))
    B = np.array([[1.0, 0.7], [0.0, 1.0]])  # a shear
    specB, roundB = best_fit_ellipsoid(
        apply_linear_map(ellipsoid_support(grid, Q), B))
    # support of A body is s(A^T x) scaled; shape matrices push forward by
    # Q -> A Q A^T
    pushed = B @ spec0.Q @ B.T
    print(f"  roundness before/after: {round0:.2e} / {roundB:.2e}")
    print(f"  sup |fit(B E) - B fit(E) B^T| = {sup_err(specB.Q, pushed):.3e}")


if __name__ == "__main__":
    main()
