"""The directed cycle: every vertex equally important, for every lambda.

Indirect influence at distance k along Z_n depends only on k. Below
lambda = 2 nearer vertices always receive more; past that the order of
the T_k can change, but the scores stay uniform. A single chord breaks the
symmetry, and the resulting ranking stays put over a wide range of weights.
"""

import numpy as np

from pwprank import circuit_graph, circuit_indirect, indirect_scores, pwp_transform
from pwprank import ranking_from_scores

for lam in (0.5, 1.9, 6.0):
    ts = [circuit_indirect(6, k, lam) for k in range(1, 7)]
    imp = indirect_scores(pwp_transform(circuit_graph(6).d, lam), "importance").values
    print(f"lambda = {lam}: T_k = {np.round(ts, 4)}, importance spread = {np.ptp(imp):.1e}")
print()

z = circuit_graph(6)
for eps in (1e-4, 1e-2, 1.0, 10.0):
    g = z.with_edge("3", "6", eps)
    r = ranking_from_scores(indirect_scores(pwp_transform(g.d, 1.0), "importance"))
    print(f"chord 3->6 with weight {eps:g}: {r.format(g.labels)}")
