"""Rankings eventually freeze when D is diagonalizable over the reals.

Each score difference times e_+^lambda is a finite sum of exponentials in
lambda. The one with the largest rate wins past a computable lambda_max,
so no ranking change can happen there. This script computes that bound for
a random symmetric network and checks it against a sweep.
"""

import numpy as np

from pwprank import (SweepSpec, isolate_roots, lambda_sweep, real_eigendecomposition,
                     score_difference_expsum)

rng = np.random.default_rng(2000)
a = rng.random((5, 5))
d = np.triu(a) + np.triu(a, 1).T
spec = real_eigendecomposition(d)
print("eigenvalues:", np.round(spec.eigenvalues, 4))

bound, roots = 0.0, []
for i in range(5):
    for j in range(i + 1, 5):
        iso = isolate_roots(score_difference_expsum(spec, "importance", i, j), (1e-3, 50.0))
        bound = max(bound, iso.lambda_max)
        roots += [(r, i + 1, j + 1) for r in iso.roots]
print(f"lambda_max = {bound:.6g}")
for r, i, j in sorted(roots):
    print(f"  importance of {i} and {j} cross at {r:.10g}")

rep = lambda_sweep(d, SweepSpec(1e-3, 2 * bound))
print()
print(rep.format_table())
