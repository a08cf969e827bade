"""Rainbow planar matchings of a uniformly edge-coloured K_{n,n}.

Solvers for R_n (the largest planar matching whose edge colours are pairwise
distinct) and the closed-form quantities behind its concentration bounds.
Logarithms are natural.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from .graph_core import ColourAssignment, PlanarMatching, validate_planar

MAX_EXACT_N = 14
MAX_EXACT_R = 20
MAX_COLOUR_BITS = 64


class ResourceGuardError(ValueError):
    """An instance is too large for the exact solver; use the greedy one."""


@dataclass(frozen=True)
class RainbowSolution:
    size: int
    witness: PlanarMatching
    exact: bool


def is_rainbow(m: PlanarMatching, c: ColourAssignment) -> bool:
    for i, j in m.edges:
        if not (1 <= i <= c.n and 1 <= j <= c.n):
            raise IndexError(f"edge ({i}, {j}) outside K_{{{c.n},{c.n}}}")
    if not validate_planar(m, c.n, c.n):
        return False
    colours = [c(i, j) for i, j in m.edges]
    return len(set(colours)) == len(colours)


def max_rainbow_exact(c: ColourAssignment, max_n: int = MAX_EXACT_N,
                      max_r: int = MAX_EXACT_R) -> RainbowSolution:
    """Largest rainbow planar matching by memoised branch and bound.

    State is (row, first free column, used-colour bit set). From a state the
    search either skips the row or matches it to the first column carrying
    each still-unused colour; later columns of the same colour are dominated.
    A branch stops as soon as it reaches min(rows left, columns left, colours
    left).
    """
    n, r = c.n, c.r
    if n > max_n or r > max_r or r > MAX_COLOUR_BITS:
        raise ResourceGuardError(
            f"exact solver limited to n <= {max_n}, r <= {min(max_r, MAX_COLOUR_BITS)} "
            f"(got n={n}, r={r}); use max_rainbow_greedy for a lower bound")
    rows = [[x - 1 for x in row] for row in c.colour.tolist()]
    memo: dict[tuple[int, int, int], int] = {}

    def best(i: int, j: int, used: int, nused: int) -> int:
        cap = min(n - i, n - j, r - nused)
        if cap <= 0:
            return 0
        key = (i, j, used)
        hit = memo.get(key)
        if hit is not None:
            return hit
        value = best(i + 1, j, used, nused)
        if value < cap:
            row = rows[i]
            seen = used
            for jj in range(j, n):
                bit = 1 << row[jj]
                if seen & bit:
                    continue
                seen |= bit
                cand = 1 + best(i + 1, jj + 1, used | bit, nused + 1)
                if cand > value:
                    value = cand
                    if value == cap:
                        break
        memo[key] = value
        return value

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * n + 100))
    try:
        size = best(0, 0, 0, 0)
        edges = []
        i = j = used = nused = 0
        while len(edges) < size:
            target = size - len(edges)
            if best(i + 1, j, used, nused) == target:
                i += 1
                continue
            row = rows[i]
            for jj in range(j, n):
                bit = 1 << row[jj]
                if not used & bit and 1 + best(i + 1, jj + 1, used | bit, nused + 1) == target:
                    edges.append((i + 1, jj + 1))
                    i, j, used, nused = i + 1, jj + 1, used | bit, nused + 1
                    break
            else:  # pragma: no cover
                raise AssertionError("witness reconstruction failed")
    finally:
        sys.setrecursionlimit(limit)
    return RainbowSolution(size=size, witness=PlanarMatching(tuple(edges)), exact=True)


def max_rainbow_greedy(c: ColourAssignment) -> RainbowSolution:
    """Left-to-right sweep: each row takes the first later column with an unused colour.

    Gives a valid rainbow planar matching, hence a lower bound on R_n.
    """
    n, r = c.n, c.r
    used = bytearray(r + 1)
    nused = 0
    edges = []
    j = 0
    grid = c.colour
    for i in range(n):
        if j >= n or nused == r:
            break
        row = grid[i, j:].tolist()
        for off, col in enumerate(row):
            if not used[col]:
                used[col] = 1
                nused += 1
                edges.append((i + 1, j + off + 1))
                j += off + 1
                break
    return RainbowSolution(size=len(edges), witness=PlanarMatching(tuple(edges)), exact=False)


def rainbow_prob_exact(t: int, r: int) -> Fraction:
    """P(t fixed edges get pairwise distinct colours) as an exact fraction."""
    if t < 1 or r < 1:
        raise ValueError("t and r must be positive")
    num = 1
    for i in range(1, t):
        num *= r - i
        if num == 0:
            return Fraction(0)
    return Fraction(num, r ** (t - 1))


def rainbow_prob(t: int, r: int) -> float:
    """prod_{i=1}^{t-1} (r - i) / r; zero once t > r."""
    return float(rainbow_prob_exact(t, r))


def rainbow_prob_upper(t: int, r: int) -> float:
    """sqrt(e) * exp(-t^2 / (2r)), valid for t <= r."""
    if not 1 <= t <= r:
        raise ValueError(f"bound needs 1 <= t <= r, got t={t}, r={r}")
    return math.exp(0.5 - t * t / (2.0 * r))


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs 0 <= x <= 1, got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log(x) - (1.0 - x) * math.log1p(-x)


def _entropy_gap(x: float) -> float:
    return 2.0 * binary_entropy(x) - x / 2.0


def alpha0(tol: float = 1e-12) -> float:
    """Root of 2H(x) = x/2 in (1/2, 1), by bisection.

    The gap 2H(x) - x/2 is positive at 1/2, equals -1/2 at 1, and is strictly
    decreasing in between, so the root is unique.
    """
    lo, hi = 0.5, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _entropy_gap(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def upper_tail_terms(n: int, alpha: float, eps: float) -> range:
    """Integer sizes t with (1-eps)*alpha*n < t <= min(n, alpha*n)."""
    lo = math.floor((1.0 - eps) * alpha * n) + 1
    hi = math.floor(min(n, alpha * n))
    return range(lo, hi + 1)


def upper_tail_log_bound(n: int, alpha: float, eps: float) -> float:
    """Log of the unclamped union bound on P(some rainbow matching exceeds (1-eps)r)."""
    if not 0.0 < eps < 0.5:
        raise ValueError(f"need 0 < eps < 1/2, got {eps}")
    if alpha <= 0.5:
        raise ValueError(f"need alpha > 1/2, got {alpha}")
    x = (1.0 - eps) * alpha
    if x >= 1.0:
        raise ValueError(f"need (1-eps)*alpha < 1, got {x}")
    m = len(upper_tail_terms(n, alpha, eps))
    if m == 0:
        return -math.inf
    return (0.5 + math.log(m) + 2.0 * math.log(n)
            + 2.0 * n * binary_entropy(x) - x * (1.0 - eps) * n / 2.0)


def upper_tail_bound(n: int, alpha: float, eps: float) -> float:
    """min(1, sqrt(e) m n^2 exp(2nH((1-eps)alpha) - (1-eps)^2 alpha n / 2)).

    m counts the matching sizes above (1-eps)r that fit in K_{n,n}.
    """
    return math.exp(min(0.0, upper_tail_log_bound(n, alpha, eps)))


def upper_tail_binomial_step_literal(n: int, alpha: float, eps: float) -> bool:
    """Whether C(n, t) <= C(n, (1-eps) r) holds for every summed t.

    The union bound replaces C(n, t) by its value at (1-eps)r; that is only
    literal when the summed sizes sit on the decreasing side of the binomial.
    """
    return (1.0 - eps) * alpha * n >= n / 2.0


def lower_tail_bound(n: int, alpha: float, eps: float) -> float:
    """min(1, n (2^alpha eps)^n), bounding P(R_n <= eps r)."""
    if not 0.0 < eps < 0.5:
        raise ValueError(f"need 0 < eps < 1/2, got {eps}")
    if alpha <= 0.0:
        raise ValueError(f"need alpha > 0, got {alpha}")
    log_val = math.log(n) + n * (alpha * math.log(2.0) + math.log(eps))
    return math.exp(min(0.0, log_val))
