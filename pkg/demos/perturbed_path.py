"""Adding one edge to L_6 and watching the ranking move.

The edge 2 -> 4 gets weight eps while lambda stays at 1. Because the graph
stays acyclic every score is affine in eps, so each threshold below is an
exact rational number.
"""

from fractions import Fraction

from pwprank import SweepSpec, epsilon_sweep, linear_graph
from pwprank.reproduction import search_l6_edge

base = linear_graph(6)
rep = epsilon_sweep(base, ("2", "4"), SweepSpec(0.0, 40.0, param="epsilon", grid_points=401))
print(rep.format_table())
print()
for c in rep.crossings[1:]:
    frac = Fraction(c.value).limit_denominator(1000)
    pairs = ", ".join(f"{rep.labels[a]}/{rep.labels[b]}" for a, b in c.pairs)
    print(f"eps = {c.value:<14.12g} = {str(frac):<8} swaps {pairs}")
print()

# Which extra edge reproduces this sequence? Try all of them.
search = search_l6_edge()
print("edges giving the same ranking sequence:", search.matches)
