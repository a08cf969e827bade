"""Planar matchings of a uniform 1-regular subgraph of K_{k,n}.

The largest planar matching T_n of an injection pi is the length of the
longest increasing subsequence of (pi(1), ..., pi(n)). The segmented count
X_t lower-bounds it; the rest of this module evaluates the closed-form
estimates on P(A_1^c), E X_t, var X_t and E T_n.

Probabilities that are ratios of falling factorials are returned as
``fractions.Fraction`` so callers can compare them exactly.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import NamedTuple, Sequence

import numpy as np

from .graph_core import Injection, segment

REGIME_LIMIT = Fraction(1, 8)


def falling(a: int, b: int) -> int:
    """(a)_b = a (a-1) ... (a-b+1), with (a)_0 = 1."""
    if b < 0:
        raise ValueError("falling factorial length must be non-negative")
    return math.perm(a, b) if a >= 0 else math.prod(range(a, a - b, -1))


class Sandwich(NamedTuple):
    lower: float
    upper: float
    in_regime: bool


class BoundValue(NamedTuple):
    value: float
    raw: float
    in_regime: bool


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


# -- longest increasing subsequence ---------------------------------------

def _values(inj) -> Sequence[int]:
    if isinstance(inj, Injection):
        return inj.pi
    return inj.tolist() if isinstance(inj, np.ndarray) else inj


def lis_length(inj: Injection | Sequence[int]) -> int:
    """Patience sorting: pile tops stay sorted, each value lands on one pile."""
    tops: list[int] = []
    for v in _values(inj):
        pos = bisect_left(tops, v)
        if pos == len(tops):
            tops.append(v)
        else:
            tops[pos] = v
    return len(tops)


def lis_length_oracle(inj: Injection | Sequence[int]) -> int:
    """Quadratic dynamic programme over "longest run ending at position i"."""
    vals = list(_values(inj))
    ending = [1] * len(vals)
    for i, v in enumerate(vals):
        for h in range(i):
            if vals[h] < v and ending[h] + 1 > ending[i]:
                ending[i] = ending[h] + 1
    return max(ending, default=0)


def lis_witness(inj: Injection | Sequence[int]) -> list[tuple[int, int]]:
    """One longest increasing subsequence, as 1-based planar matching edges (i, pi(i))."""
    vals = list(_values(inj))
    tops: list[int] = []
    top_idx: list[int] = []
    parent = [-1] * len(vals)
    for i, v in enumerate(vals):
        pos = bisect_left(tops, v)
        if pos:
            parent[i] = top_idx[pos - 1]
        if pos == len(tops):
            tops.append(v)
            top_idx.append(i)
        else:
            tops[pos] = v
            top_idx[pos] = i
    out = []
    i = top_idx[-1] if top_idx else -1
    while i >= 0:
        out.append((i + 1, vals[i]))
        i = parent[i]
    return out[::-1]


# -- segmentation ----------------------------------------------------------

@dataclass(frozen=True)
class SegStats:
    t: int
    s: int
    I: int  # noqa: E741
    x_t: int
    indicators: tuple[bool, ...] = field(repr=False)


def valid_segment_sizes(n: int, k: int) -> list[int]:
    """All t in 1..n for which s = k t / n is an integer."""
    step = n // math.gcd(n, k)
    return list(range(step, n + 1, step))


def snap_segment_size(n: int, k: int, t: int) -> int:
    """The valid segment size nearest to t (ties go to the smaller one)."""
    return min(valid_segment_sizes(n, k), key=lambda v: (abs(v - t), v))


def top_block_width(n: int, k: int, t: int) -> int:
    if (k * t) % n:
        near = sorted(valid_segment_sizes(n, k), key=lambda v: (abs(v - t), v))[:3]
        raise ValueError(f"s = k*t/n = {k * t / n:g} is not an integer for n={n}, "
                         f"k={k}, t={t}; nearby valid t: {sorted(near)}")
    return k * t // n


def segmented_count(inj: Injection, t: int) -> SegStats:
    """X_t: how many aligned block pairs (bottom block i, top block i) share an edge."""
    n, k = inj.n, inj.k
    s = top_block_width(n, k, t)
    seg = segment(n, t, k, s)
    count = seg.I
    pi = np.asarray(inj.pi, dtype=np.int64)
    bottom = np.minimum(np.arange(n) // t, count - 1)
    top = np.minimum((pi - 1) // s, seg.J - 1)
    hits = np.zeros(count, dtype=bool)
    hits[bottom[bottom == top]] = True
    indicators = tuple(bool(h) for h in hits)
    return SegStats(t=t, s=s, I=count, x_t=int(hits.sum()), indicators=indicators)


# -- avoidance probabilities ------------------------------------------------

def prob_A1c_exact(k: int, s: int, t: int) -> Fraction:
    """P(pi(1..t) all avoid 1..s) = (k-s)_t / (k)_t, exactly."""
    if not (1 <= s <= k and 1 <= t <= k):
        raise ValueError(f"need 1 <= s, t <= k, got k={k}, s={s}, t={t}")
    if t > k - s:
        return Fraction(0)
    return Fraction(falling(k - s, t), falling(k, t))


def in_avoidance_regime(k: int, s: int, t: int) -> bool:
    return Fraction(s + t, k) <= REGIME_LIMIT


def prob_A1c_bounds(k: int, s: int, t: int) -> Sandwich:
    """(exp(-st/k - 8(s+t)^2 t/k^2), exp(-st/k + 4(s+t)^2 t/k^2)), clamped to [0, 1]."""
    if not (1 <= s <= k and 1 <= t <= k):
        raise ValueError(f"need 1 <= s, t <= k, got k={k}, s={s}, t={t}")
    main = s * t / k
    corr = (s + t) ** 2 * t / k ** 2
    return Sandwich(lower=_clamp01(math.exp(-main - 8.0 * corr)),
                    upper=_clamp01(math.exp(-main + 4.0 * corr)),
                    in_regime=in_avoidance_regime(k, s, t))


def prob_joint_A1A2_exact(k: int, s: int, t: int) -> Fraction:
    """P(A_1^c and A_2^c) for blocks {1..t}->{1..s} and {t+1..2t}->{s+1..2s}.

    Split by how many positions of each bottom block land in the other
    block's top segment (j1 and j2); everything else avoids 1..2s.
    """
    if not (1 <= s and 1 <= t and 2 * s <= k and 2 * t <= k):
        raise ValueError(f"need 2s <= k and 2t <= k, got k={k}, s={s}, t={t}")
    weights = [comb(t, j) * falling(s, j) for j in range(min(s, t) + 1)]
    # both blocks only enter through m = j1 + j2 once the weights are convolved
    pair = [0] * (2 * len(weights) - 1)
    for j1, w1 in enumerate(weights):
        for j2, w2 in enumerate(weights):
            pair[j1 + j2] += w1 * w2
    rest = k - 2 * s
    total = 0
    tail = falling(rest, 2 * t - len(pair) + 1)
    for m in range(len(pair) - 1, -1, -1):
        total += pair[m] * tail
        tail *= rest - (2 * t - m)
    return Fraction(total, falling(k, 2 * t))


def joint_bound_A1A2(k: int, s: int, t: int) -> BoundValue:
    """P(A_1^c)^2 exp(5t^2/k), the correlation bound on the joint avoidance."""
    p = float(prob_A1c_exact(k, s, t))
    raw = p * p * math.exp(5.0 * t * t / k)
    return BoundValue(value=_clamp01(raw), raw=raw, in_regime=in_avoidance_regime(k, s, t))


def falling_ratio(a: int, b: int, c: int) -> Fraction:
    """f(a, b, c) = (a-b)_c / (a)_c."""
    if a < 1 or b < 0 or c < 0:
        raise ValueError(f"need a >= 1, b >= 0, c >= 0, got ({a}, {b}, {c})")
    if c > a:
        raise ValueError(f"(a)_c vanishes for c={c} > a={a}")
    return Fraction(falling(a - b, c), falling(a, c))


def falling_ratio_bounds(a: int, b: int, c: int) -> Sandwich:
    """(exp(-2bc/a - c^2/a), exp(-bc/a + c^2/a)); in regime when c >= 1 and (b+c)/a < 1/2."""
    lower = math.exp(-2.0 * b * c / a - c * c / a)
    upper = math.exp(-b * c / a + c * c / a)
    return Sandwich(lower=lower, upper=upper, in_regime=c >= 1 and 2 * (b + c) < a)


# -- segment count and T_n estimates ----------------------------------------

def mu_t(n: int, t: int) -> float:
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    return (n / t) * -math.expm1(-t * t / n)


def mean_bounds_Xt(n: int, k: int, t: int) -> tuple[float, float]:
    """(mu_t - (17/t) e^{-t^2/n}, mu_t + (32n/k^2) e^{-t^2/n})."""
    if k < n:
        raise ValueError(f"need k >= n, got n={n}, k={k}")
    top_block_width(n, k, t)
    decay = math.exp(-t * t / n)
    mu = mu_t(n, t)
    return mu - 17.0 / t * decay, mu + 32.0 * n / k ** 2 * decay


def mean_Xt_exact(n: int, k: int, t: int) -> Fraction:
    """E X_t when t divides n: every block pair hits with the same probability."""
    s = top_block_width(n, k, t)
    if n % t:
        raise ValueError("exact mean needs t to divide n (equal-width blocks)")
    return (n // t) * (1 - prob_A1c_exact(k, s, t))


class MeanBounds(NamedTuple):
    lower: float
    upper: float
    vacuous_lower: bool


def mean_bounds_Tn(n: int, eps: float) -> MeanBounds:
    """((1 - 1/e) sqrt(n) - 17/sqrt(n), (e + eps) sqrt(n) + 1); lower floored at 0."""
    if n < 1 or eps < 0:
        raise ValueError(f"need n >= 1 and eps >= 0, got n={n}, eps={eps}")
    root = math.sqrt(n)
    low = -math.expm1(-1.0) * root - 17.0 / root
    return MeanBounds(lower=max(0.0, low), upper=(math.e + eps) * root + 1.0,
                      vacuous_lower=low <= 0.0)


def tail_bound_cap(n: int) -> float:
    """Largest admissible b: n / (32^2 log n)."""
    return n / (1024.0 * math.log(n)) if n > 1 else 0.0


def tail_bound_general(n: int, b: float) -> tuple[float, float]:
    """(sqrt(n / (b log n)), 1 - n^{-(b/2 - 1)}): P(T_n >= threshold) >= the second entry."""
    cap = tail_bound_cap(n)
    if cap <= 2.0:
        raise ValueError(f"no admissible b for n={n}: n/(1024 log n) = {cap:.4g} <= 2")
    if not 2.0 < b <= cap:
        raise ValueError(f"need 2 < b <= {cap:.4g} for n={n}, got b={b}")
    log_n = math.log(n)
    return math.sqrt(n / (b * log_n)), -math.expm1(-(b / 2.0 - 1.0) * log_n)


def chernoff_bound(theta: float, gamma: float) -> float:
    """min(1, 2 exp(-gamma^2 theta / 4)) for a Bernoulli sum with mean theta."""
    if not 0.0 < gamma <= 0.5:
        raise ValueError(f"need 0 < gamma <= 1/2, got {gamma}")
    if theta <= 0.0:
        raise ValueError(f"need theta > 0, got {theta}")
    return min(1.0, 2.0 * math.exp(-gamma * gamma * theta / 4.0))


def var_bound_Xt(n: int, k: int, D: float) -> float:
    """D (sqrt(n) + n^2/k); D is unknown, so this only annotates reports."""
    if D <= 0 or k < n:
        raise ValueError(f"need D > 0 and k >= n, got D={D}, n={n}, k={k}")
    return D * (math.sqrt(n) + n * n / k)


def var_shape_Xt(n: int, k: int) -> float:
    """The D-free factor sqrt(n) + n^2/k of the variance estimate."""
    return var_bound_Xt(n, k, 1.0)


@dataclass(frozen=True)
class BoundsReport:
    """Analytic values for one (n, k, t) configuration, each with its regime flag."""

    n: int
    k: int
    t: int
    s: int
    eps: float
    mu_t: float
    mean_xt_lower: float
    mean_xt_upper: float
    mean_xt_exact: float | None
    mu_low: float
    mu_up: float
    mu_low_vacuous: bool
    pa1c_exact: float
    pa_one_lower: float
    pa_one_upper: float
    pa_one_in_regime: bool
    pa_two_bound: float | None
    pa_two_raw: float | None
    pa_joint_exact: float | None
    pa_two_in_regime: bool
    var_shape: float
    tail_b: float | None = None
    tail_threshold: float | None = None
    tail_prob_lower: float | None = None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def bounds_report(n: int, k: int, t: int, eps: float = 0.1,
                  b: float | None = None) -> BoundsReport:
    s = top_block_width(n, k, t)
    low, up = mean_bounds_Xt(n, k, t)
    mb = mean_bounds_Tn(n, eps)
    pa = prob_A1c_bounds(k, s, t)
    joint = raw = jexact = None
    if 2 * s <= k and 2 * t <= k:
        bv = joint_bound_A1A2(k, s, t)
        joint, raw = bv.value, bv.raw
        jexact = float(prob_joint_A1A2_exact(k, s, t))
    threshold = tail_p = None
    if b is not None:
        threshold, tail_p = tail_bound_general(n, b)
    return BoundsReport(
        n=n, k=k, t=t, s=s, eps=eps, mu_t=mu_t(n, t),
        mean_xt_lower=low, mean_xt_upper=up,
        mean_xt_exact=float(mean_Xt_exact(n, k, t)) if n % t == 0 else None,
        mu_low=mb.lower, mu_up=mb.upper, mu_low_vacuous=mb.vacuous_lower,
        pa1c_exact=float(prob_A1c_exact(k, s, t)),
        pa_one_lower=pa.lower, pa_one_upper=pa.upper, pa_one_in_regime=pa.in_regime,
        pa_two_bound=joint, pa_two_raw=raw, pa_joint_exact=jexact,
        pa_two_in_regime=in_avoidance_regime(k, s, t),
        var_shape=var_shape_Xt(n, k), tail_b=b, tail_threshold=threshold,
        tail_prob_lower=tail_p,
    )
