"""End-to-end exact-law verification at desk scale.

Runs the full verification verdict the `exactlaws verify` command wraps:
the mixed-vector identity sampling, the coefficient-system oracle, ball vs
shell equivalence across an epsilon ladder, the exact degeneracies, the
smooth-field vanishing orders, and the consistency of the combined-value
flux coefficients with the solved coefficient systems.
"""

import time

from exactlaws.cli import VerifyConfig, run_verify

cfg = VerifyConfig(suite="all", n=32, seed=7)
print(f"verification suite on a {cfg.n}^3 grid, seed {cfg.seed}, directions {cfg.dirs}\n")

start = time.perf_counter()
verdict = run_verify(cfg)
elapsed = time.perf_counter() - start

verdict.print_lines()
print(f"\n{len(verdict.checks)} checks in {elapsed:.1f}s")
