"""Sphere quadrature, increment splitting, and the pointwise identities.

The law evaluations average cubic increment kernels over a set of unit
directions; this script inspects the quadrature quality of the direction
sets, the longitudinal/transverse split of increments, and the two closed
identities the kernel algebra rests on.
"""

import numpy as np

import exactlaws as ex
from exactlaws.geometry import identity227_batch

print("direction sets (antipodally closed, weights sum to 1):")
for spec in ("icosa:0", "icosa:1", "icosa:2", "random:128:7"):
    ds = ex.parse_direction_spec(spec)
    print(
        f"  {spec:13s} {len(ds):5d} nodes   "
        f"|sum w n|     = {np.max(np.abs(ds.first_moment())):.1e}   "
        f"|2nd mom - I/3| = {ds.second_moment_error():.1e}"
    )

# Longitudinal/transverse split of an increment relative to a direction.
grid = ex.make_grid(16)
v = ex.abc_flow(grid)
nhat = np.array([1.0, 2.0, -1.0])
nhat /= np.linalg.norm(nhat)
du = ex.increment(v, 0.4 * nhat)
pair = ex.split_long_trans(du, nhat)
recon = pair.longitudinal.values + pair.transverse.values
ortho = np.einsum("cxyz,cxyz->xyz", pair.longitudinal.values, pair.transverse.values)
print("\nincrement split at separation 0.4:")
print(f"  completeness |du_L + du_T - du| = {np.max(np.abs(recon - du.values)):.2e}")
print(f"  orthogonality max |du_L . du_T| = {np.max(np.abs(ortho)):.2e}")

# The Jacobian of the unit separation vector and the mixed-vector identity
# built on it; the right-hand side collapses when all three vectors agree.
ell = np.array([0.3, -0.4, 1.2])
M = ex.dndl(ell)
print("\nJacobian of n(l) at l = (0.3, -0.4, 1.2):")
print(f"  symmetric: {np.allclose(M, M.T)}   trace = {np.trace(M):.6f} "
      f"(exact 2/|l| = {2 / np.linalg.norm(ell):.6f})")

rng = np.random.Generator(np.random.Philox(key=[11, 0]))
m = 50_000
ells = rng.standard_normal((m, 3))
ells /= np.linalg.norm(ells, axis=1)[:, None]
A, B, C = (rng.standard_normal((m, 3)) for _ in range(3))
lhs, rhs = identity227_batch(ells, A, B, C)
print(f"\nmixed-vector identity over {m} random samples:")
print(f"  max |lhs - rhs| / (1 + |rhs|) = {np.max(np.abs(lhs - rhs) / (1 + np.abs(rhs))):.2e}")
lhs_eq, _ = identity227_batch(ells, A, A, A)
print(f"  equal-vector degenerate case  = {np.max(np.abs(lhs_eq)):.2e}")

worst = max(
    ex.triple_product_check(rng.standard_normal(3), rng.standard_normal(3))
    for _ in range(2000)
)
print(f"  triple-product residual       = {worst:.2e}")
