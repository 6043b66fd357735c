import csv
import io
import math
import random
from fractions import Fraction

import pytest

from guclab.dimacs import write_dimacs
from guclab.engine import SAT, UNSAT
from guclab.generators import FamilyParams, guc_hard, k4_core
from guclab.harness import (
    CSV_COLUMNS,
    ExperimentConfig,
    ProbabilityEstimate,
    estimate_probability,
    iter_trials,
    records_to_csv,
    run_experiment,
    run_trial,
    scaling_sweep,
    summary_to_json,
    sweep_to_csv,
    sweep_to_gnuplot,
    trial_seed,
    wilson_interval,
)


def test_trial_seed_is_pure_and_spread():
    assert trial_seed(0, 0) == trial_seed(0, 0)
    seeds = {trial_seed(m, i) for m in range(5) for i in range(200)}
    assert len(seeds) == 1000
    assert all(0 <= s < 2**64 for s in seeds)


def test_csv_byte_identical():
    cfg = ExperimentConfig(family="guc-hard", M=5, trials=40, master_seed=11)
    a = records_to_csv(run_experiment(cfg)[0])
    b = records_to_csv(run_experiment(cfg)[0])
    assert a == b
    assert a.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert len(a.splitlines()) == 41


def test_trial_order_independence():
    cfg = ExperimentConfig(family="rguc-hard", M=3, trials=30, master_seed=2)
    f = cfg.build_formula()
    forward = [run_trial(f, cfg, i) for i in range(30)]
    order = list(range(30))
    random.Random(0).shuffle(order)
    shuffled = {i: run_trial(f, cfg, i) for i in order}
    assert forward == [shuffled[i] for i in range(30)]


def test_workers_match_serial():
    cfg = ExperimentConfig(family="guc-hard", M=5, trials=24, master_seed=4)
    serial = list(iter_trials(cfg))
    cfg.workers = 2
    assert list(iter_trials(cfg)) == serial


def test_guc_hard_always_sat():
    records, summary = run_experiment(ExperimentConfig(family="guc-hard", M=6, trials=100))
    assert summary["verdicts"] == {SAT: 100}
    assert all(r.total == r.free + r.forced for r in records)


def test_k4_tseitin_always_unsat():
    _, summary = run_experiment(ExperimentConfig(family="tseitin", graph="complete:4", trials=30))
    assert summary["verdicts"] == {UNSAT: 30}


def test_dimacs_family(tmp_path):
    from guclab.cnf import Formula

    path = tmp_path / "two.cnf"
    path.write_text(write_dimacs(Formula([[1], [2]])))
    records, _ = run_experiment(ExperimentConfig(family="dimacs-file", dimacs_path=str(path), trials=3))
    assert [(r.verdict, r.total, r.forced, r.free) for r in records] == [(SAT, 2, 2, 0)] * 3


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(family="nope")
    with pytest.raises(ValueError):
        ExperimentConfig(trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(family="dimacs-file")


def test_timing_is_opt_in():
    cfg = ExperimentConfig(family="guc-hard", M=4, trials=5)
    assert all(r.ms == 0 for r in iter_trials(cfg))


def test_summary_json_sorted():
    _, summary = run_experiment(ExperimentConfig(family="guc-hard", M=4, trials=5))
    text = summary_to_json(summary)
    assert '"trials": 5' in text and text.endswith("\n")


@pytest.mark.parametrize(
    "hits, n, low, high",
    [(0, 10, 0.0, 0.27753), (5, 10, 0.23659, 0.76341), (50, 100, 0.40383, 0.59617)],
)
def test_wilson_values(hits, n, low, high):
    lo, hi = wilson_interval(hits, n)
    assert lo == pytest.approx(low, abs=1e-4)
    assert hi == pytest.approx(high, abs=1e-4)


def test_wilson_coverage():
    # 100 repeated estimates of p=0.3 at n=200; a 95% interval should cover ~95 of them
    rng = random.Random(123)
    p, n = 0.3, 200
    covered = 0
    for _ in range(100):
        hits = sum(rng.random() < p for _ in range(n))
        lo, hi = wilson_interval(hits, n)
        covered += lo <= p <= hi
    assert covered >= 90


def test_always_event_frequency_one():
    est = estimate_probability(ExperimentConfig(family="guc-hard", M=4, trials=200, event="always"))
    assert est.frequency == 1.0 and est.exact == 1


def test_estimate_guc_hard_conditional():
    cfg = ExperimentConfig(family="guc-hard", M=5, trials=3000, event="x1-false", master_seed=9)
    est = estimate_probability(cfg)
    assert est.exact == Fraction(1, 3)
    assert est.sigma_distance() <= 4
    assert est.ci_low <= est.frequency <= est.ci_high
    # the x1-false flag of a full solve is the same first-descent event
    records = list(iter_trials(ExperimentConfig(family="guc-hard", M=5, trials=300, master_seed=9)))
    assert all(r.verdict == SAT for r in records)
    freq = sum(r.x1_false for r in records) / 300
    assert abs(freq - 1 / 3) <= 4 * math.sqrt((1 / 3) * (2 / 3) / 300)


def test_estimate_to_dict():
    est = ProbabilityEstimate("x1-false", 10, 3, 0.3, 0.1, 0.6, Fraction(1, 3), 12)
    d = est.to_dict()
    assert d["exact"] == "1/3" and d["oracle_nodes"] == 12
    assert d["sigma_distance"] == pytest.approx(abs(0.3 - 1 / 3) / math.sqrt(2 / 9 / 10))


def test_estimate_without_exact():
    est = estimate_probability(
        ExperimentConfig(family="rguc-hard", M=6, heuristic="rguc", trials=20, event="satisfied"),
        max_nodes=10)
    assert est.exact is None and est.sigma_distance() is None


def test_sweep_outputs():
    rows = scaling_sweep([6, 8], range(4))
    assert [r.n for r in rows] == [6, 8]
    assert all(r.runs == 4 and r.exhausted_fraction == 0 for r in rows)
    text = sweep_to_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert [int(p["n"]) for p in parsed] == [6, 8]
    dat = sweep_to_gnuplot(rows).splitlines()
    assert dat[0].startswith("#") and len(dat) == 3
    assert scaling_sweep([6], range(4))[0].totals == rows[0].totals


def test_sweep_budget_exhaustion_is_counted():
    rows = scaling_sweep([8], range(3), budget=5)
    assert rows[0].exhausted_fraction == 1.0
    assert rows[0].max == 5


def test_build_formula_families():
    cfg = ExperimentConfig(family="guc-hard", M=6)
    assert cfg.build_formula() == guc_hard(FamilyParams(6, k4_core(7)))
    assert ExperimentConfig(family="tseitin").scaffold_width == 0
