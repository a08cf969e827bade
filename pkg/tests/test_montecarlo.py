import math
from fractions import Fraction

import numpy as np
import pytest

from planarmatch import reports
from planarmatch.graph_core import ColourAssignment, make_rng
from planarmatch.dependent import chernoff_bound
from planarmatch.montecarlo import (ExperimentConfig, ExperimentReport, brute_force_A1c,
                                    brute_force_event_probs, brute_force_Rn, empirical_tail,
                                    resolve_segment_size, resolve_workers, run_dependent,
                                    run_rainbow, summarize)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("rainbow", n=4, trials=0, r=4)
    with pytest.raises(ValueError):
        ExperimentConfig("rainbow", n=4)
    with pytest.raises(ValueError):
        ExperimentConfig("dependent", n=5, k=4)
    with pytest.raises(ValueError):
        ExperimentConfig("dependent", n=5, solver="exact")
    with pytest.raises(ValueError):
        ExperimentConfig("rainbow", n=4, r=4, k=5)
    cfg = ExperimentConfig("rainbow", n=8, alpha=1.0)
    assert cfg.r == 8 and cfg.solver == "exact"
    assert ExperimentConfig("dependent", n=9).k == 9


def test_sqrt_sentinel_snaps():
    t, note = resolve_segment_size(ExperimentConfig("dependent", n=400, k=400, t="sqrt"))
    assert t == 20 and "20" in note
    t, note = resolve_segment_size(ExperimentConfig("dependent", n=10, k=15, t="sqrt"))
    assert t == 2 and "snapped" in note
    with pytest.raises(ValueError):
        resolve_segment_size(ExperimentConfig("dependent", n=10, k=15, t=3))


# -- rainbow -------------------------------------------------------------------

def test_rainbow_single_colour():
    rep = run_rainbow(ExperimentConfig("rainbow", n=5, r=1, trials=1, seed=3))
    st = rep.statistics["R_n"]
    assert st.mean == 1 and st.variance == 0


def test_rainbow_report_deterministic():
    cfg = ExperimentConfig("rainbow", n=6, r=5, trials=50, seed=9)
    assert reports.dumps(run_rainbow(cfg)) == reports.dumps(run_rainbow(cfg))


def test_rainbow_variance_check_small():
    rep = run_rainbow(ExperimentConfig("rainbow", n=8, r=8, trials=400, seed=1))
    c = rep.check("variance_le_2mean")
    assert c.status == "pass"
    assert rep.check("size_cap").status == "pass"
    assert 0 < rep.statistics["R_n/r"].mean < 1


def test_rainbow_greedy_is_flagged_not_failed():
    rep = run_rainbow(ExperimentConfig("rainbow", n=30, r=30, solver="greedy", trials=20, seed=2))
    assert rep.check("variance_le_2mean").status == "flagged"
    assert rep.check("lower_tail").status == "flagged"
    assert not any(rep.samples["solver_exact"])


def test_rainbow_exact_guard():
    from planarmatch.rainbow import ResourceGuardError
    with pytest.raises(ResourceGuardError):
        run_rainbow(ExperimentConfig("rainbow", n=20, r=20, trials=1))


# -- dependent -------------------------------------------------------------------

def test_dependent_trivial():
    rep = run_dependent(ExperimentConfig("dependent", n=1, k=1, t=1, trials=5, seed=0))
    assert rep.samples["T_n"] == [1] * 5
    assert rep.samples["X_t"] == [1] * 5


def test_dependent_checks_present():
    rep = run_dependent(ExperimentConfig("dependent", n=100, k=200, t=10, trials=100, seed=4))
    names = {c.name for c in rep.checks}
    assert {"mean_Tn", "mean_Xt", "var_Xt_shape", "Xt_le_Tn"} <= names
    assert rep.check("Xt_le_Tn").empirical == 0
    assert rep.check("var_Xt_shape").status == "flagged"
    assert all(x <= t for x, t in zip(rep.samples["X_t"], rep.samples["T_n"]))


def test_dependent_tail_check():
    rep = run_dependent(ExperimentConfig("dependent", n=30_000, b=2.5, trials=3, seed=5))
    c = rep.check("tail_Tn")
    assert c.status == "pass" and c.empirical == 1.0


def test_json_round_trip():
    rep = run_dependent(ExperimentConfig("dependent", n=36, k=72, t="sqrt", trials=30, seed=6))
    back = reports.loads(reports.dumps(rep))
    assert back == rep
    rep2 = run_rainbow(ExperimentConfig("rainbow", n=5, r=5, trials=10, seed=6))
    sweep = reports.loads(reports.dumps([rep2, rep2]))
    assert sweep == [rep2, rep2]
    assert ExperimentReport.from_dict(rep2.to_dict()) == rep2


def test_workers_do_not_change_report(monkeypatch):
    monkeypatch.delenv("PLANARMATCH_THREADS", raising=False)
    cfg = ExperimentConfig("dependent", n=64, k=128, t=8, trials=40, seed=12)
    serial = reports.dumps(run_dependent(cfg, workers=1))
    assert reports.dumps(run_dependent(cfg, workers=3)) == serial


def test_thread_cap_env(monkeypatch):
    monkeypatch.setenv("PLANARMATCH_THREADS", "2")
    assert resolve_workers(8) == 2
    assert resolve_workers(None) == 2
    monkeypatch.delenv("PLANARMATCH_THREADS")
    assert resolve_workers(None) == 1
    assert resolve_workers(5) == 5


# -- oracles and helpers ---------------------------------------------------------

def test_brute_force_Rn_examples():
    assert brute_force_Rn(ColourAssignment.from_rows([[1] * 4] * 4)) == 1
    assert brute_force_Rn(ColourAssignment.from_rows([[1, 3], [4, 2]])) == 2
    with pytest.raises(ValueError):
        brute_force_Rn(ColourAssignment.from_rows(np.ones((7, 7), dtype=int)))


def test_brute_force_event_probs_examples():
    assert brute_force_event_probs(4, 2, 2)[0] == Fraction(1, 6)
    assert brute_force_event_probs(12, 1, 1) == (Fraction(11, 12), Fraction(11 * 10 + 1, 132))
    assert brute_force_event_probs(6, 6, 1)[0] == 0
    assert brute_force_A1c(9, 9, 4) == 0
    with pytest.raises(ValueError):
        brute_force_event_probs(13, 1, 1)


def test_brute_force_event_probs_k16():
    # k=16 sits above the enumeration guard; count the 240 pairs directly
    hits = sum(1 for a in range(1, 17) for b in range(1, 17) if a != b and a != 1 and b != 2)
    assert Fraction(hits, 240) == Fraction(211, 240)


def test_empirical_tail():
    assert empirical_tail([3, 3, 3], 3, ">=") == 1.0
    assert empirical_tail([1, 2, 3], 4, ">=") == 0.0
    assert empirical_tail([1, 2, 3, 4], 2, "<=") == 0.5
    with pytest.raises(ValueError):
        empirical_tail([], 1)
    with pytest.raises(ValueError):
        empirical_tail([1], 1, "==")


def test_bernoulli_sums_respect_chernoff():
    rng = make_rng(77)
    sums = rng.binomial(1, 0.3, size=(1000, 200)).sum(axis=1)
    theta = 60.0
    for g in (0.1, 0.2, 0.3, 0.4, 0.5):
        freq = empirical_tail(np.abs(sums - theta), g * theta, ">=")
        assert freq <= chernoff_bound(theta, g)


def test_summarize():
    st = summarize([1, 2, 3, 4])
    assert st.mean == 2.5
    assert st.variance == pytest.approx(5 / 3)
    assert st.standard_error == pytest.approx(math.sqrt(5 / 12))
