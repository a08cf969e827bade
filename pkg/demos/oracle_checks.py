"""
Cross-checking the solvers against brute force
==============================================

Every fast routine has a slow twin that simply enumerates. Running them side
by side on small inputs is the quickest way to trust the fast ones.
"""

from planarmatch import cli

for suite, kmax in (("a1c", 8), ("joint", 10), ("rainbow", 6), ("lis", 6)):
    checked, bad = cli.oracle_check(suite, kmax=kmax, trials=200, seed=1)
    print(f"{suite:8s} {checked:4d} cases, {bad} mismatches")
