"""
Exact avoidance probabilities and their exponential bounds
==========================================================

The probability that t positions of a random injection all avoid a set of s
targets is a ratio of falling factorials. Comparing it with the
exponential sandwich shows how tight the estimates are.
"""

from planarmatch import (chernoff_bound, joint_bound_A1A2, prob_A1c_bounds, prob_A1c_exact,
                         prob_joint_A1A2_exact, tail_bound_general)

for k, s, t in [(100, 10, 2), (200, 10, 10), (400, 25, 25)]:
    exact = prob_A1c_exact(k, s, t)
    lo, hi, regime = prob_A1c_bounds(k, s, t)
    print(f"k={k:3d} s={s:2d} t={t:2d}: {lo:.5f} <= {float(exact):.5f} <= {hi:.5f}  regime={regime}")

# Two disjoint blocks are nearly independent.
joint = prob_joint_A1A2_exact(16, 1, 1)
print("joint", joint, "=", float(joint), "bound", round(joint_bound_A1A2(16, 1, 1).raw, 4))

print("Chernoff, theta=100, gamma=0.5:", chernoff_bound(100, 0.5))
threshold, p = tail_bound_general(100_000, 4)
print(f"P(T_n >= {threshold:.2f}) >= {p:.6f} at n = 1e5")
