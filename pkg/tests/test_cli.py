import csv
import json

import pytest

from planarmatch import cli, reports
from planarmatch.graph_core import ColourAssignment, PlanarMatching
from planarmatch.rainbow import is_rainbow


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def test_parse_dependent():
    cmd = cli.parse_args("dependent-sim --n 400 --k 400 --t sqrt --trials 1000 --seed 7 "
                         "--out report.json".split())
    assert cmd.command == "dependent-sim" and cmd.n == [400] and cmd.t == "sqrt"
    assert cmd.out == "report.json" and cmd.seed == 7


def test_parse_rainbow_alpha():
    cmd = cli.parse_args("rainbow-sim --n 8 --alpha 1.0 --trials 2000 --solver exact --seed 1".split())
    assert cli._configs(cmd)[0].r == 8


@pytest.mark.parametrize("argv", [
    "rainbow-sim --n 8",
    "rainbow-sim --n 8 --r 3 --alpha 1.0",
    "rainbow-sim --n 8 --r 3 --k 4",
    "dependent-sim --n 8 --k 4",
    "dependent-sim --n 8 --bogus 1",
    "bounds --k 100",
    "exact --mode rainbow --n 4",
    "frobnicate",
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        cli.parse_args(argv.split())
    assert exc.value.code == 2


def test_bounds_pa_one(capsys):
    code, out = run("bounds --which pa_one --k 100 --s 10 --t 2".split(), capsys)
    assert code == 0
    vals = dict(line.split() for line in out.out.splitlines())
    assert vals["lower"] == "0.650249" and vals["upper"] == "0.918696"
    assert vals["exact"] == "0.809091"


def test_bounds_missing_argument_exit_2(capsys):
    code, out = run("bounds --which pa_two --k 16".split(), capsys)
    assert code == 2 and "--s" in out.err


@pytest.mark.parametrize("argv", [
    "bounds --which pa_two --k 16 --s 1 --t 1",
    "bounds --which mean_xt --n 100 --k 100 --t 10",
    "bounds --which mean_tn --n 400 --eps 0",
    "bounds --which tail --n 100000 --b 4",
    "bounds --which chernoff --theta 100 --gamma 0.5",
    "bounds --which rainbow_prob --t 3 --r 4",
    "bounds --which upper_tail --n 100 --alpha 1 --eps 0.02",
    "bounds --which lower_tail --n 10 --alpha 1 --eps 0.1",
    "bounds --which alpha0",
    "bounds --which mu_t --n 100 --t 10",
    "bounds --which var_xt --n 100 --k 10000",
    "bounds --which falling_ratio --a 4 --s 2 --t 2",
])
def test_bounds_all_quantities(argv, capsys):
    code, out = run(argv.split(), capsys)
    assert code == 0 and out.out.strip()


def test_exact_rainbow_witness(capsys):
    code, out = run("exact --mode rainbow --n 4 --r 4 --seed 3".split(), capsys)
    assert code == 0
    lines = dict(line.split(" ", 1) for line in out.out.splitlines())
    edges = tuple(tuple(int(v) for v in e.strip("()").split(","))
                  for e in lines["witness"].split())
    assert int(lines["R_n"]) == len(edges)
    from planarmatch.graph_core import make_rng, sample_colouring
    c = sample_colouring(4, 4, make_rng(3))
    assert is_rainbow(PlanarMatching(edges), c)


def test_exact_guard_exit_5(capsys):
    code, out = run("exact --mode rainbow --n 20 --r 20".split(), capsys)
    assert code == 5 and "greedy" in out.err


def test_exact_dependent(capsys):
    code, out = run("exact --mode dependent --n 30 --k 60 --seed 2".split(), capsys)
    assert code == 0 and out.out.startswith("T_n ")


@pytest.mark.parametrize("suite,word", [("a1c", "285 cases"), ("joint", "cases"),
                                         ("rainbow", "500 cases"), ("lis", "cases")])
def test_oracle_suites(suite, word, capsys):
    extra = ["--trials", "200"] if suite == "lis" else []
    code, out = run(["oracle-check", "--suite", suite, "--kmax", "9" if suite == "a1c" else "12"] + extra,
                    capsys)
    assert code == 0 and word in out.out and "0 mismatches" in out.out


def test_outputs_and_determinism(tmp_path, capsys):
    base = ["dependent-sim", "--n", "36,64", "--t", "sqrt", "--trials", "25", "--seed", "7"]
    files = []
    for run_id in ("a", "b"):
        out, csv_path, svg = (tmp_path / f"{run_id}.{ext}" for ext in ("json", "csv", "svg"))
        code, _ = run(base + ["--out", str(out), "--csv", str(csv_path), "--svg", str(svg)], capsys)
        assert code == 0
        files.append([p.read_bytes() for p in (out, csv_path, svg)])
    assert files[0] == files[1]
    with open(tmp_path / "a.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["trial", "n", "k", "t", "s", "T_n", "X_t"]
    assert len(rows) == 1 + 2 * 25
    assert files[0][0].endswith(b"\n") and b"\r\n" in files[0][1]
    data = json.loads(files[0][0])
    assert data["schema_version"] == 1 and len(data["sweep"]) == 2
    assert files[0][2].startswith(b'<?xml') and b'version="1.1"' in files[0][2]
    loaded = reports.loads(files[0][0].decode())
    assert [r.config["n"] for r in loaded] == [36, 64]


def test_rainbow_csv(tmp_path, capsys):
    path = tmp_path / "r.csv"
    code, _ = run(f"rainbow-sim --n 6 --r 6 --trials 12 --seed 1 --csv {path}".split(), capsys)
    assert code == 0
    rows = list(csv.reader(open(path, newline="")))
    assert rows[0] == ["trial", "n", "r", "R_n", "solver_exact"] and len(rows) == 13


def test_check_flag_exit_3(capsys):
    # the X_t mean bound is violated at n = k = 100 (see README)
    code, _ = run("dependent-sim --n 100 --t 10 --trials 400 --seed 1 --check".split(), capsys)
    assert code == 3
    code, _ = run("rainbow-sim --n 6 --r 6 --trials 50 --seed 1 --check".split(), capsys)
    assert code == 0


def test_io_failure_exit_4(tmp_path, capsys):
    bad = tmp_path / "missing" / "x.json"
    code, out = run(f"rainbow-sim --n 4 --r 4 --trials 3 --out {bad}".split(), capsys)
    assert code == 4 and "error" in out.err
