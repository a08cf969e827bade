"""Seeded Monte Carlo runs for R_n, T_n and X_t, plus brute-force oracles.

Trial ``i`` of a run draws from the stream ``make_rng(seed, i)`` and results
are merged in trial order, so a report depends only on (config, seed) and
not on the number of workers.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Callable, Literal

import numpy as np

from . import dependent, rainbow
from .graph_core import (RNG_ALGORITHM, ColourAssignment, Injection, make_rng,
                         sample_colouring, sample_injection_values)

SIGMA_SLACK = 4.0
THREADS_ENV = "PLANARMATCH_THREADS"


@dataclass(frozen=True)
class ExperimentConfig:
    mode: Literal["rainbow", "dependent"]
    n: int
    trials: int = 1000
    seed: int = 0
    k: int | None = None
    r: int | None = None
    alpha: float | None = None
    t: int | str | None = None
    eps: float = 0.1
    b: float | None = None
    solver: Literal["exact", "greedy", "lis"] | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.mode == "rainbow":
            if self.r is None and self.alpha is None:
                raise ValueError("rainbow mode needs r or alpha")
            if self.r is None:
                object.__setattr__(self, "r", max(1, round(self.alpha * self.n)))
            if self.alpha is None:
                object.__setattr__(self, "alpha", self.r / self.n)
            if self.solver is None:
                object.__setattr__(self, "solver", "exact")
            if self.solver not in ("exact", "greedy"):
                raise ValueError(f"rainbow solver must be exact or greedy, got {self.solver}")
            if self.k is not None or self.t is not None:
                raise ValueError("k and t belong to dependent mode")
        elif self.mode == "dependent":
            if self.k is None:
                object.__setattr__(self, "k", self.n)
            if self.k < self.n:
                raise ValueError(f"dependent mode needs k >= n, got n={self.n}, k={self.k}")
            if self.solver is None:
                object.__setattr__(self, "solver", "lis")
            if self.solver != "lis":
                raise ValueError(f"dependent solver must be lis, got {self.solver}")
            if self.r is not None or self.alpha is not None:
                raise ValueError("r and alpha belong to rainbow mode")
            if isinstance(self.t, str) and self.t != "sqrt":
                object.__setattr__(self, "t", int(self.t))
        else:
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class Check:
    name: str
    equation: str
    analytic: float | list | None
    empirical: float | None
    status: Literal["pass", "fail", "flagged"]
    note: str = ""


@dataclass
class StatSummary:
    mean: float
    variance: float
    standard_error: float
    variance_se: float
    minimum: float
    maximum: float


@dataclass
class ExperimentReport:
    config: dict
    rng_algorithm: str
    statistics: dict[str, StatSummary]
    empirical_tail: dict[str, float]
    bound_values: dict
    checks: list[Check]
    samples: dict[str, list] = field(repr=False)
    notes: list[str] = field(default_factory=list)
    schema_version: int = 1

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        data = dict(data)
        data["statistics"] = {k: StatSummary(**v) for k, v in data["statistics"].items()}
        data["checks"] = [Check(**c) for c in data["checks"]]
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


# -- small statistics helpers ------------------------------------------------

def summarize(values) -> StatSummary:
    x = np.asarray(values, dtype=float)
    N = x.size
    mean = float(x.mean())
    if N > 1:
        var = float(x.var(ddof=1))
        dev = x - mean
        m2, m4 = float(np.mean(dev ** 2)), float(np.mean(dev ** 4))
        var_se = math.sqrt(max(0.0, m4 - m2 * m2) / N)
    else:
        var = var_se = 0.0
    return StatSummary(mean=mean, variance=var, standard_error=math.sqrt(var / N),
                       variance_se=var_se, minimum=float(x.min()), maximum=float(x.max()))


def empirical_tail(samples, threshold: float, side: str = ">=") -> float:
    """Fraction of samples on ``side`` of ``threshold`` (one of >=, >, <=, <)."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("empirical_tail needs at least one sample")
    ops = {">=": np.greater_equal, ">": np.greater, "<=": np.less_equal, "<": np.less}
    if side not in ops:
        raise ValueError(f"side must be one of {sorted(ops)}, got {side!r}")
    return float(np.mean(ops[side](x, threshold)))


def _freq_slack(p: float, trials: int) -> float:
    return SIGMA_SLACK * math.sqrt(max(p * (1.0 - p), 0.0) / trials)


# -- parallel trial execution ----------------------------------------------

def resolve_workers(workers: int | None = None) -> int:
    cap = os.environ.get(THREADS_ENV)
    if workers is None:
        workers = int(cap) if cap else 1
    elif cap:
        workers = min(workers, int(cap))
    return max(1, int(workers))


def _run_chunk(fn: Callable, cfg: ExperimentConfig, lo: int, hi: int) -> list:
    return [fn(cfg, i) for i in range(lo, hi)]


def run_trials(fn: Callable, cfg: ExperimentConfig, workers: int | None = None) -> list:
    """Evaluate ``fn(cfg, i)`` for every trial and return results in trial order."""
    workers = resolve_workers(workers)
    if workers == 1 or cfg.trials == 1:
        return _run_chunk(fn, cfg, 0, cfg.trials)
    chunks = min(cfg.trials, 4 * workers)
    edges = np.linspace(0, cfg.trials, chunks + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_run_chunk, itertools.repeat(fn), itertools.repeat(cfg),
                         edges[:-1].tolist(), edges[1:].tolist())
        return [x for part in parts for x in part]


# -- rainbow runs ------------------------------------------------------------

def rainbow_trial(cfg: ExperimentConfig, trial: int) -> tuple[int, bool]:
    c = sample_colouring(cfg.n, cfg.r, make_rng(cfg.seed, trial))
    if cfg.solver == "exact" and cfg.r <= rainbow.MAX_COLOUR_BITS:
        sol = rainbow.max_rainbow_exact(c, max_n=max(cfg.n, rainbow.MAX_EXACT_N),
                                        max_r=max(cfg.r, rainbow.MAX_EXACT_R))
    else:
        sol = rainbow.max_rainbow_greedy(c)
    if not rainbow.is_rainbow(sol.witness, c) or sol.size > min(cfg.n, cfg.r):
        raise AssertionError(f"trial {trial}: invalid rainbow witness")
    return sol.size, sol.exact


def _guard_rainbow(cfg: ExperimentConfig) -> None:
    if cfg.solver == "exact" and (cfg.n > rainbow.MAX_EXACT_N or cfg.r > rainbow.MAX_EXACT_R):
        raise rainbow.ResourceGuardError(
            f"exact solver limited to n <= {rainbow.MAX_EXACT_N}, r <= {rainbow.MAX_EXACT_R} "
            f"(got n={cfg.n}, r={cfg.r}); rerun with solver='greedy'")


def run_rainbow(cfg: ExperimentConfig, workers: int | None = None) -> ExperimentReport:
    if cfg.mode != "rainbow":
        raise ValueError("run_rainbow needs a rainbow config")
    _guard_rainbow(cfg)
    results = run_trials(rainbow_trial, cfg, workers)
    sizes = [s for s, _ in results]
    exact_flags = [e for _, e in results]
    n, r, alpha, eps = cfg.n, cfg.r, cfg.alpha, cfg.eps
    exact = all(exact_flags)
    stat = summarize(sizes)
    ratio = summarize(np.asarray(sizes) / r)

    tails = {
        f"P(R_n <= {eps * r:g})": empirical_tail(sizes, eps * r, "<="),
        f"P(R_n > {(1 - eps) * r:g})": empirical_tail(sizes, (1 - eps) * r, ">"),
    }
    bounds: dict = {"alpha0": rainbow.alpha0(), "alpha": alpha}
    checks: list[Check] = []
    notes: list[str] = []
    if not exact:
        notes.append("greedy solver: R_n values are lower bounds")

    checks.append(Check("size_cap", "R_n <= min(n, r)", min(n, r), stat.maximum,
                        "pass" if stat.maximum <= min(n, r) else "fail"))

    slack = SIGMA_SLACK * stat.variance_se
    status = "pass" if stat.variance <= 2 * stat.mean + slack else "fail"
    if not exact:
        status = "flagged"
    checks.append(Check("variance_le_2mean", "var(R_n) <= 2 E R_n", 2 * stat.mean,
                        stat.variance, status, f"slack {slack:.6g} (4 SE of variance)"))

    if 0 < eps < 0.5:
        low = rainbow.lower_tail_bound(n, alpha, eps)
        bounds["lower_tail_bound"] = low
        emp = tails[f"P(R_n <= {eps * r:g})"]
        ok = emp <= low + _freq_slack(low, cfg.trials)
        checks.append(Check("lower_tail", "P(R_n <= eps r) <= n (2^alpha eps)^n", low, emp,
                            ("pass" if ok else "fail") if exact else "flagged"))
        if alpha > 0.5 and (1 - eps) * alpha < 1:
            up = rainbow.upper_tail_bound(n, alpha, eps)
            bounds["upper_tail_bound"] = up
            bounds["upper_tail_binomial_step_literal"] = \
                rainbow.upper_tail_binomial_step_literal(n, alpha, eps)
            emp = tails[f"P(R_n > {(1 - eps) * r:g})"]
            ok = emp <= up + _freq_slack(up, cfg.trials)
            checks.append(Check("upper_tail",
                                "P(R_n > (1-eps) r) <= sqrt(e) m n^2 e^{2nH((1-eps)alpha) - (1-eps)^2 alpha n/2}",
                                up, emp, ("pass" if ok else "fail") if exact else "flagged"))
        else:
            notes.append("upper tail bound needs alpha > 1/2 and (1-eps) alpha < 1; skipped")

    checks.append(Check("ratio_inside_unit", "beta_1 r <= R_n <= beta_2 r", [0.0, 1.0],
                        ratio.mean, "pass" if 0.0 < ratio.mean < 1.0 else "flagged",
                        "mean of R_n / r"))

    return ExperimentReport(
        config=asdict(cfg), rng_algorithm=RNG_ALGORITHM,
        statistics={"R_n": stat, "R_n/r": ratio}, empirical_tail=tails,
        bound_values=bounds, checks=checks,
        samples={"R_n": sizes, "solver_exact": exact_flags}, notes=notes)


# -- dependent runs ----------------------------------------------------------

def resolve_segment_size(cfg: ExperimentConfig) -> tuple[int | None, str]:
    """Turn the config's t (int, "sqrt" or None) into a valid segment size."""
    n, k = cfg.n, cfg.k
    if cfg.t is None:
        return None, ""
    if cfg.t == "sqrt":
        want = max(1, round(math.sqrt(n)))
        t = dependent.snap_segment_size(n, k, want)
        note = f"t=sqrt resolved to {want}" + (f", snapped to {t}" if t != want else "")
        return t, note
    t = int(cfg.t)
    dependent.top_block_width(n, k, t)
    return t, ""


def dependent_trial(cfg: ExperimentConfig, trial: int, t: int | None = None) -> tuple[int, int | None]:
    rng = make_rng(cfg.seed, trial)
    values = sample_injection_values(cfg.n, cfg.k, rng)
    T_n = dependent.lis_length(values.tolist())
    if t is None:
        return T_n, None
    x_t = dependent.segmented_count(Injection(cfg.n, cfg.k, values), t).x_t
    if x_t > T_n:
        raise AssertionError(f"trial {trial}: X_t={x_t} exceeds T_n={T_n}")
    return T_n, x_t


class _DependentTrial:
    """Picklable trial callable carrying the resolved segment size."""

    def __init__(self, t):
        self.t = t

    def __call__(self, cfg, trial):
        return dependent_trial(cfg, trial, self.t)


def run_dependent(cfg: ExperimentConfig, workers: int | None = None) -> ExperimentReport:
    if cfg.mode != "dependent":
        raise ValueError("run_dependent needs a dependent config")
    n, k, eps = cfg.n, cfg.k, cfg.eps
    t, t_note = resolve_segment_size(cfg)
    results = run_trials(_DependentTrial(t), cfg, workers)
    T = [a for a, _ in results]
    stats = {"T_n": summarize(T)}
    samples: dict[str, list] = {"T_n": T}
    notes = [t_note] if t_note else []
    checks: list[Check] = []
    tails: dict[str, float] = {}

    mb = dependent.mean_bounds_Tn(n, eps)
    bounds: dict = {"mu_low": mb.lower, "mu_up": mb.upper, "mu_low_vacuous": mb.vacuous_lower}
    m = stats["T_n"].mean
    checks.append(Check("mean_Tn", "mu_low <= E T_n <= mu_up", [mb.lower, mb.upper], m,
                        "pass" if mb.lower < m < mb.upper else "fail",
                        "vacuous lower end" if mb.vacuous_lower else ""))

    if t is not None:
        X = [b for _, b in results]
        samples["X_t"] = X
        stats["X_t"] = sx = summarize(X)
        rep = dependent.bounds_report(n, k, t, eps)
        bounds.update({key: v for key, v in rep.as_dict().items()
                       if key not in ("n", "k", "eps", "mu_low", "mu_up", "mu_low_vacuous")})
        lo, hi = rep.mean_xt_lower, rep.mean_xt_upper
        slack = SIGMA_SLACK * sx.standard_error
        ok = lo - slack <= sx.mean <= hi + slack
        checks.append(Check("mean_Xt",
                            "mu_t - (17/t) e^{-t^2/n} <= E X_t <= mu_t + (32n/k^2) e^{-t^2/n}",
                            [lo, hi], sx.mean, "pass" if ok else "fail",
                            f"slack {slack:.6g} (4 SE)"))
        checks.append(Check("var_Xt_shape", "var(X_t) <= D (sqrt(n) + n^2/k)",
                            rep.var_shape, sx.variance, "flagged",
                            f"implied D >= {sx.variance / rep.var_shape:.6g}; D is not computable"))
        viol = sum(1 for a, b in results if b > a)
        checks.append(Check("Xt_le_Tn", "X_t <= T_n in every trial", 0, viol,
                            "pass" if viol == 0 else "fail"))

    if cfg.b is not None:
        threshold, p_low = dependent.tail_bound_general(n, cfg.b)
        bounds.update({"tail_threshold": threshold, "tail_prob_lower": p_low})
        emp = empirical_tail(T, threshold, ">=")
        tails[f"P(T_n >= {threshold:.6g})"] = emp
        failures = sum(1 for v in T if v < threshold)
        allowed = math.floor(cfg.trials * (1.0 - p_low)) + 2
        checks.append(Check("tail_Tn", "P(T_n >= sqrt(n/(b log n))) >= 1 - n^{-(b/2-1)}",
                            p_low, emp, "pass" if failures <= allowed else "fail",
                            f"{failures} failures, {allowed} allowed"))

    return ExperimentReport(
        config=asdict(cfg) | {"t_resolved": t}, rng_algorithm=RNG_ALGORITHM,
        statistics=stats, empirical_tail=tails, bound_values=bounds, checks=checks,
        samples=samples, notes=notes)


def run(cfg: ExperimentConfig, workers: int | None = None) -> ExperimentReport:
    return run_rainbow(cfg, workers) if cfg.mode == "rainbow" else run_dependent(cfg, workers)


# -- brute-force oracles -----------------------------------------------------

def brute_force_Rn(c: ColourAssignment) -> int:
    """Largest rainbow planar matching by trying every (row set, column set) pair."""
    n = c.n
    if n > 6:
        raise ValueError(f"brute force limited to n <= 6, got n={n}")
    grid = c.colour
    for size in range(min(n, c.r), 0, -1):
        for rows in itertools.combinations(range(n), size):
            for cols in itertools.combinations(range(n), size):
                if len({int(grid[i, j]) for i, j in zip(rows, cols)}) == size:
                    return size
    return 0


def brute_force_A1c(k: int, s: int, t: int) -> Fraction:
    """P(pi(1..t) avoids 1..s), by listing every injection of 1..t into 1..k."""
    counts = _min_histogram(k, t)
    return Fraction(sum(counts[s + 1:]), math.perm(k, t))


_MIN_CACHE: dict[tuple[int, int], list[int]] = {}


def _min_histogram(k: int, t: int) -> list[int]:
    if k > 10:
        raise ValueError(f"enumeration limited to k <= 10, got k={k}")
    key = (k, t)
    if key not in _MIN_CACHE:
        counts = [0] * (k + 2)
        for p in itertools.permutations(range(1, k + 1), t):
            counts[min(p)] += 1
        _MIN_CACHE[key] = counts
    return _MIN_CACHE[key]


def brute_force_event_probs(k: int, s: int, t: int) -> tuple[Fraction, Fraction]:
    """Exact (P(A_1^c), P(A_1^c and A_2^c)) by listing injections of 1..2t into 1..k."""
    if k > 12 or t > 2:
        raise ValueError(f"enumeration limited to k <= 12 and t <= 2, got k={k}, t={t}")
    if 2 * t > k or not 1 <= s <= k:
        raise ValueError(f"need 2t <= k and 1 <= s <= k, got k={k}, s={s}, t={t}")
    total = a1c = joint = 0
    for p in itertools.permutations(range(1, k + 1), 2 * t):
        total += 1
        if all(v > s for v in p[:t]):
            a1c += 1
            if all(not s < v <= 2 * s for v in p[t:]):
                joint += 1
    return Fraction(a1c, total), Fraction(joint, total)


def binomial_two_sided_tail(m: int, p, gamma) -> Fraction:
    """P(|Bin(m, p) - mp| >= gamma m p), summed exactly over the pmf."""
    p = Fraction(str(p))
    gamma = Fraction(str(gamma))
    theta = m * p
    total = Fraction(0)
    for j in range(m + 1):
        if abs(j - theta) >= gamma * theta:
            total += math.comb(m, j) * p ** j * (1 - p) ** (m - j)
    return total
