"""
Longest increasing subsequences of random injections
====================================================

A uniform injection of 1..n into 1..k is a random planar-matching problem in
disguise: its longest increasing subsequence T_n is the largest planar
matching between the bottom points and their images. The segmented count X_t
gives a cheap lower bound.
"""

import math

from planarmatch import (ExperimentConfig, lis_length, mean_bounds_Tn,
                         mean_bounds_Xt, mu_t, run_dependent, sample_injection, segmented_count)
from planarmatch.dependent import lis_witness

inj = sample_injection(12, 20, seed=3)
print("pi =", inj.pi)
print("T_n =", lis_length(inj), "witness", lis_witness(inj))
seg = segmented_count(inj, 3)
print(f"X_3 = {seg.x_t} of {seg.I} blocks, top width s = {seg.s}")

# Simulated means against the closed-form estimates.
for n in (100, 400):
    t = math.isqrt(n)
    rep = run_dependent(ExperimentConfig("dependent", n=n, k=n, t=t, trials=300, seed=n))
    lo, hi, _ = mean_bounds_Tn(n, 0.1)
    print(f"n={n}: E T_n ~ {rep.statistics['T_n'].mean:.2f}, bounds ({lo:.2f}, {hi:.2f}); "
          f"E X_t ~ {rep.statistics['X_t'].mean:.3f}, mu_t = {mu_t(n, t):.3f}, "
          f"window {tuple(round(v, 3) for v in mean_bounds_Xt(n, k=n, t=t))}")
