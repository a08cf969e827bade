"""Batch command line: ``planarmatch <subcommand> [flags]``.

Exit codes: 0 success, 2 usage error, 3 a check failed under ``--check``,
4 I/O failure, 5 resource guard (instance too large for the exact solver).
"""

from __future__ import annotations

import argparse
import sys

from . import dependent, montecarlo, rainbow, reports
from .graph_core import PlanarMatching, make_rng, sample_colouring, sample_injection

EXIT_OK, EXIT_USAGE, EXIT_CHECK, EXIT_IO, EXIT_GUARD = 0, 2, 3, 4, 5

BOUNDS = ("pa_one", "pa_two", "falling_ratio", "mean_xt", "mean_tn", "tail", "chernoff",
          "rainbow_prob", "upper_tail", "lower_tail", "alpha0", "mu_t", "var_xt")
SUITES = ("a1c", "joint", "rainbow", "lis")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or comma list, got {text!r}")


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _segment(text: str):
    return text if text == "sqrt" else int(text)


def _outputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="JSON report path")
    p.add_argument("--csv", help="per-trial CSV path")
    p.add_argument("--svg", help="SVG of mean statistic vs n (sweep mode)")
    p.add_argument("--check", action="store_true", help="exit 3 if any check fails")
    p.add_argument("--workers", type=int, default=None,
                   help=f"worker processes (capped by ${montecarlo.THREADS_ENV})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="planarmatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rainbow-sim", help="Monte Carlo for R_n on coloured K_{n,n}")
    p.add_argument("--n", type=_int_list, required=True, help="n, or a comma list to sweep")
    p.add_argument("--r", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--solver", choices=("exact", "greedy"), default="exact")
    _outputs(p)

    p = sub.add_parser("dependent-sim", help="Monte Carlo for T_n and X_t on random injections")
    p.add_argument("--n", type=_int_list, required=True, help="n, or a comma list to sweep")
    p.add_argument("--k", type=int, help="top vertex count (default k = n)")
    p.add_argument("--t", type=_segment, help="segment size or 'sqrt'")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--b", type=float)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--solver", choices=("lis",), default="lis")
    _outputs(p)

    p = sub.add_parser("bounds", help="evaluate one analytic quantity")
    p.add_argument("--which", choices=BOUNDS, required=True)
    for flag in ("--n", "--k", "--s", "--t", "--r"):
        p.add_argument(flag, type=int)
    p.add_argument("--a", type=int, help="falling_ratio first argument")
    p.add_argument("--alpha", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--D", type=float, default=1.0)

    p = sub.add_parser("exact", help="solve one sampled instance exactly")
    p.add_argument("--mode", choices=("rainbow", "dependent"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=_seed, default=0)

    p = sub.add_parser("oracle-check", help="compare exact formulas with brute force")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--kmax", type=int, default=9)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=_seed, default=0)
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    cmd = parser.parse_args(argv)
    if cmd.command == "rainbow-sim" and cmd.r is None and cmd.alpha is None:
        parser.error("rainbow-sim needs --r or --alpha")
    if cmd.command == "rainbow-sim" and cmd.r is not None and cmd.alpha is not None:
        parser.error("give only one of --r and --alpha")
    if cmd.command == "dependent-sim" and cmd.k is not None and any(n > cmd.k for n in cmd.n):
        parser.error("dependent-sim needs k >= n")
    if cmd.command == "exact" and cmd.mode == "rainbow" and cmd.r is None:
        parser.error("exact --mode rainbow needs --r")
    if cmd.command == "exact" and cmd.mode == "rainbow" and cmd.k is not None:
        parser.error("--k belongs to --mode dependent")
    if cmd.command == "exact" and cmd.mode == "dependent" and cmd.r is not None:
        parser.error("--r belongs to --mode rainbow")
    if cmd.command in ("rainbow-sim", "dependent-sim") and cmd.trials < 1:
        parser.error("--trials must be >= 1")
    return cmd


# -- execution ---------------------------------------------------------------

def _configs(cmd) -> list[montecarlo.ExperimentConfig]:
    out = []
    for n in cmd.n:
        if cmd.command == "rainbow-sim":
            out.append(montecarlo.ExperimentConfig(
                mode="rainbow", n=n, r=cmd.r, alpha=cmd.alpha, trials=cmd.trials,
                seed=cmd.seed, eps=cmd.eps, solver=cmd.solver))
        else:
            out.append(montecarlo.ExperimentConfig(
                mode="dependent", n=n, k=cmd.k or n, t=cmd.t, trials=cmd.trials,
                seed=cmd.seed, eps=cmd.eps, b=cmd.b, solver=cmd.solver))
    return out


def _print_checks(rep: montecarlo.ExperimentReport) -> None:
    cfg = rep.config
    print(f"{cfg['mode']} n={cfg['n']} trials={cfg['trials']} seed={cfg['seed']}")
    for name, st in rep.statistics.items():
        print(f"  {name}: mean {st.mean:.6g}  var {st.variance:.6g}  se {st.standard_error:.3g}")
    for c in rep.checks:
        print(f"  [{c.status.upper():7}] {c.name}: analytic {c.analytic}  empirical {c.empirical}"
              + (f"  ({c.note})" if c.note else ""))
    for note in rep.notes:
        print(f"  note: {note}")


def _simulate(cmd) -> int:
    reps = [montecarlo.run(cfg, cmd.workers) for cfg in _configs(cmd)]
    for rep in reps:
        _print_checks(rep)
    try:
        if cmd.out:
            reports.write_json(cmd.out, reps[0] if len(reps) == 1 else reps)
        if cmd.csv:
            reports.write_csv(cmd.csv, reps)
        if cmd.svg:
            reports.write_svg(cmd.svg, reps, "R_n" if cmd.command == "rainbow-sim" else "T_n")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if cmd.check and not all(rep.passed for rep in reps):
        return EXIT_CHECK
    return EXIT_OK


def _need(cmd, *names):
    missing = [f"--{n}" for n in names if getattr(cmd, n) is None]
    if missing:
        raise ValueError(f"--which {cmd.which} needs {' '.join(missing)}")
    return [getattr(cmd, n) for n in names]


def _bounds(cmd) -> int:
    w = cmd.which
    if w == "pa_one":
        k, s, t = _need(cmd, "k", "s", "t")
        sw = dependent.prob_A1c_bounds(k, s, t)
        rows = [("lower", sw.lower), ("upper", sw.upper),
                ("exact", float(dependent.prob_A1c_exact(k, s, t))), ("in_regime", sw.in_regime)]
    elif w == "pa_two":
        k, s, t = _need(cmd, "k", "s", "t")
        bv = dependent.joint_bound_A1A2(k, s, t)
        rows = [("bound", bv.value), ("raw", bv.raw),
                ("exact", float(dependent.prob_joint_A1A2_exact(k, s, t))), ("in_regime", bv.in_regime)]
    elif w == "falling_ratio":
        a, b, c = _need(cmd, "a", "s", "t")
        sw = dependent.falling_ratio_bounds(a, b, c)
        rows = [("lower", sw.lower), ("value", float(dependent.falling_ratio(a, b, c))),
                ("upper", sw.upper), ("in_regime", sw.in_regime)]
    elif w == "mean_xt":
        n, k, t = _need(cmd, "n", "k", "t")
        lo, hi = dependent.mean_bounds_Xt(n, k, t)
        rows = [("lower", lo), ("upper", hi), ("mu_t", dependent.mu_t(n, t))]
        if n % t == 0:
            rows.append(("exact", float(dependent.mean_Xt_exact(n, k, t))))
    elif w == "mean_tn":
        n, eps = _need(cmd, "n", "eps")
        mb = dependent.mean_bounds_Tn(n, eps)
        rows = [("mu_low", mb.lower), ("mu_up", mb.upper), ("vacuous_lower", mb.vacuous_lower)]
    elif w == "tail":
        n, b = _need(cmd, "n", "b")
        threshold, p = dependent.tail_bound_general(n, b)
        rows = [("threshold", threshold), ("prob_lower", p)]
    elif w == "chernoff":
        theta, gamma = _need(cmd, "theta", "gamma")
        rows = [("bound", dependent.chernoff_bound(theta, gamma))]
    elif w == "rainbow_prob":
        t, r = _need(cmd, "t", "r")
        rows = [("exact", rainbow.rainbow_prob(t, r))]
        if t <= r:
            rows.append(("upper", rainbow.rainbow_prob_upper(t, r)))
    elif w == "upper_tail":
        n, alpha, eps = _need(cmd, "n", "alpha", "eps")
        rows = [("bound", rainbow.upper_tail_bound(n, alpha, eps)),
                ("binomial_step_literal", rainbow.upper_tail_binomial_step_literal(n, alpha, eps))]
    elif w == "lower_tail":
        n, alpha, eps = _need(cmd, "n", "alpha", "eps")
        rows = [("bound", rainbow.lower_tail_bound(n, alpha, eps))]
    elif w == "alpha0":
        rows = [("alpha0", rainbow.alpha0())]
    elif w == "mu_t":
        n, t = _need(cmd, "n", "t")
        rows = [("mu_t", dependent.mu_t(n, t))]
    else:  # var_xt
        n, k = _need(cmd, "n", "k")
        rows = [("bound", dependent.var_bound_Xt(n, k, cmd.D))]
    for name, value in rows:
        print(f"{name} {value:.6g}" if isinstance(value, float) else f"{name} {value}")
    return EXIT_OK


def _exact(cmd) -> int:
    if cmd.mode == "rainbow":
        c = sample_colouring(cmd.n, cmd.r, make_rng(cmd.seed))
        sol = rainbow.max_rainbow_exact(c)
        assert rainbow.is_rainbow(sol.witness, c)
        print(f"R_n {sol.size}")
        print("witness " + " ".join(f"({i},{j})" for i, j in sol.witness.edges))
        print("colours " + " ".join(str(c(i, j)) for i, j in sol.witness.edges))
    else:
        inj = sample_injection(cmd.n, cmd.k or cmd.n, make_rng(cmd.seed))
        edges = dependent.lis_witness(inj)
        print(f"T_n {dependent.lis_length(inj)}")
        print("pi " + " ".join(map(str, inj.pi)))
        print("witness " + " ".join(f"({i},{j})" for i, j in PlanarMatching(edges).edges))
    return EXIT_OK


def oracle_check(suite: str, kmax: int = 9, trials: int = 500, seed: int = 0) -> tuple[int, int]:
    """Return (cases verified, mismatches) for one brute-force equivalence suite."""
    checked = bad = 0
    if suite == "a1c":
        for k in range(1, kmax + 1):
            for t in range(1, k + 1):
                for s in range(1, k + 1):
                    checked += 1
                    bad += dependent.prob_A1c_exact(k, s, t) != montecarlo.brute_force_A1c(k, s, t)
    elif suite == "joint":
        for k in range(2, min(kmax, 12) + 1):
            for t in (1, 2):
                for s in range(1, k // 2 + 1):
                    if 2 * t > k:
                        continue
                    pa, pj = montecarlo.brute_force_event_probs(k, s, t)
                    checked += 1
                    bad += (pa != dependent.prob_A1c_exact(k, s, t)
                            or pj != dependent.prob_joint_A1A2_exact(k, s, t))
    elif suite == "rainbow":
        rng = make_rng(seed)
        for _ in range(trials):
            n, r = int(rng.integers(1, 7)), int(rng.integers(1, 7))
            c = sample_colouring(n, r, rng)
            ex = rainbow.max_rainbow_exact(c).size
            checked += 1
            bad += ex != montecarlo.brute_force_Rn(c) or rainbow.max_rainbow_greedy(c).size > ex
    else:
        rng = make_rng(seed)
        for _ in range(trials):
            n = int(rng.integers(1, 201))
            inj = sample_injection(n, int(rng.choice([n, 2 * n, n * n])), rng)
            checked += 1
            bad += dependent.lis_length(inj) != dependent.lis_length_oracle(inj)
    return checked, int(bad)


def execute(cmd) -> int:
    try:
        if cmd.command in ("rainbow-sim", "dependent-sim"):
            return _simulate(cmd)
        if cmd.command == "bounds":
            return _bounds(cmd)
        if cmd.command == "exact":
            return _exact(cmd)
        checked, bad = oracle_check(cmd.suite, cmd.kmax, cmd.trials, cmd.seed)
        print(f"{cmd.suite}: {checked} cases verified, {bad} mismatches")
        return EXIT_OK if bad == 0 else EXIT_CHECK
    except rainbow.ResourceGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    return execute(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
