"""
Rainbow planar matchings in a randomly coloured K_{n,n}
=======================================================

Colour every edge of the complete bipartite graph independently with one of
r colours and look for the largest non-crossing matching whose colours are
all different.
"""

import numpy as np

from planarmatch import (ExperimentConfig, alpha0, max_rainbow_exact, max_rainbow_greedy,
                         run_rainbow, sample_colouring)

# A single instance, with the witness matching the exact solver returns.
c = sample_colouring(8, 8, seed=5)
print(c.colour)
sol = max_rainbow_exact(c)
print("exact R_n =", sol.size, "edges", sol.witness.edges)
print("greedy lower bound =", max_rainbow_greedy(c).size)

# The largest alpha = r/n for which the rainbow count can approach r.
print("alpha0 =", round(alpha0(), 7))

# Monte Carlo over many instances: the ratio R_n / r stays strictly inside (0, 1).
rep = run_rainbow(ExperimentConfig("rainbow", n=8, r=8, trials=500, seed=1))
st = rep.statistics["R_n"]
print(f"mean {st.mean:.3f}  variance {st.variance:.3f}  ratio {rep.statistics['R_n/r'].mean:.3f}")
for check in rep.checks:
    print(f"  {check.name:<20} {check.status}")

# With few colours and many vertices the greedy solver already finds nearly r.
sizes = run_rainbow(ExperimentConfig("rainbow", n=500, r=10, solver="greedy",
                                     trials=30, seed=2)).samples["R_n"]
print("greedy sizes at n=500, r=10:", np.bincount(sizes, minlength=11)[5:])
