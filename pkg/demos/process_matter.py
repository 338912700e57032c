"""A production line as a two-sided network.

Processes consume and produce materials. Folding the block matrix gives
one network among processes and one among materials; both are chains, so
upstream items dominate influence while the middle of the line dominates
importance at small lambda.
"""

from pwprank import (from_matrix, indirect_scores, process_matter_chain, process_matter_fold,
                     pwp_transform, ranking_from_scores)

g, k = process_matter_chain(4)
proc, mat = process_matter_fold(g.d, k)
sides = [("processes", from_matrix(proc, g.labels[:k])), ("materials", from_matrix(mat, g.labels[k:]))]
for name, net in sides:
    for kind in ("influence", "importance"):
        for lam in (0.5, 5.0):
            s = indirect_scores(pwp_transform(net.d, lam), kind)
            print(f"{name:<9} {kind:<10} lambda={lam:<4} {ranking_from_scores(s).format(net.labels)}")
