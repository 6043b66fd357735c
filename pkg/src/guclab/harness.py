"""Experiment orchestration: seeded trials, probability estimates, scaling sweeps."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .cnf import Formula
from .dimacs import read_dimacs
from .engine import BUDGET_EXHAUSTED, DEFAULT_BUDGET, SATISFIED, DescentSampler, solve
from .generators import FamilyParams, guc_hard, parse_graph_spec, random_regular_graph, rguc_hard, tseitin
from .heuristics import RandomSource, get_heuristic
from .oracle import OracleLimitError, descent_distribution, make_event

FAMILIES = ("guc-hard", "rguc-hard", "tseitin", "dimacs-file")
CSV_COLUMNS = ("trial", "seed", "verdict", "total", "free", "forced", "flips", "depth",
               "x1_false", "all_true", "descent_sat", "ms")
WILSON_Z = 1.959963984540054


def trial_seed(master_seed: int, index: int) -> int:
    """64-bit seed for one trial; a pure function of (master seed, trial index)."""
    digest = hashlib.blake2b(f"{master_seed}/{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass
class ExperimentConfig:
    family: str = "guc-hard"
    M: int = 6
    graph: str = "complete:4"
    parity: int = 1
    dimacs_path: str | None = None
    heuristic: str = "guc"
    pure_literals: bool = True
    trials: int = 100
    master_seed: int = 0
    budget: int = DEFAULT_BUDGET
    event: str = "x1-false"
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r} (expected one of {FAMILIES})")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.family == "dimacs-file" and not self.dimacs_path:
            raise ValueError("family 'dimacs-file' needs a DIMACS path")

    @property
    def scaffold_width(self) -> int:
        return self.M if self.family in ("guc-hard", "rguc-hard") else 0

    def build_formula(self) -> Formula:
        if self.family == "dimacs-file":
            return read_dimacs(self.dimacs_path)
        graph = parse_graph_spec(self.graph, self.parity)
        if self.family == "tseitin":
            return tseitin(graph)
        params = FamilyParams(self.M, tseitin(graph, first_var=self.M + 1))
        return guc_hard(params) if self.family == "guc-hard" else rguc_hard(params)


@dataclass
class TrialRecord:
    trial: int
    seed: int
    verdict: str
    total: int
    free: int
    forced: int
    flips: int
    depth: int
    x1_false: int
    all_true: int
    descent_sat: int
    ms: int

    def row(self) -> list:
        return [getattr(self, c) for c in CSV_COLUMNS]


def _descent_flags(terminal: str, assignment: frozenset, M: int) -> tuple[int, int, int]:
    all_true = int(M > 0 and all(i in assignment for i in range(1, M + 1)))
    return int(-1 in assignment), all_true, int(terminal == SATISFIED)


def run_trial(f: Formula, cfg: ExperimentConfig, index: int) -> TrialRecord:
    seed = trial_seed(cfg.master_seed, index)
    heuristic = get_heuristic(cfg.heuristic, cfg.pure_literals)
    start = time.perf_counter()
    stats = solve(f, heuristic, RandomSource(seed), cfg.budget)
    elapsed = time.perf_counter() - start
    fd = stats.first_descent
    flags = _descent_flags(fd.terminal, fd.assignment, cfg.scaffold_width) if fd else (0, 0, 0)
    return TrialRecord(
        trial=index, seed=seed, verdict=stats.verdict,
        total=stats.total_choices, free=stats.free_choices, forced=stats.forced_choices,
        flips=stats.flips, depth=stats.peak_depth,
        x1_false=flags[0], all_true=flags[1], descent_sat=flags[2],
        # wall time breaks byte-identical reports, so it is opt-in
        ms=round(elapsed * 1000) if cfg.timing else 0,
    )


def _run_chunk(args) -> list[TrialRecord]:
    f, cfg, indices = args
    return [run_trial(f, cfg, i) for i in indices]


def iter_trials(cfg: ExperimentConfig, f: Formula | None = None) -> Iterator[TrialRecord]:
    """Yield one record per trial, in trial-index order."""
    f = cfg.build_formula() if f is None else f
    if cfg.workers <= 1:
        for i in range(cfg.trials):
            yield run_trial(f, cfg, i)
        return
    step = max(1, cfg.trials // (cfg.workers * 4))
    chunks = [(f, cfg, range(i, min(i + step, cfg.trials))) for i in range(0, cfg.trials, step)]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        for records in pool.map(_run_chunk, chunks):
            yield from records


def summarize(records: Sequence[TrialRecord]) -> dict:
    totals = [r.total for r in records]
    verdicts: dict[str, int] = {}
    for r in records:
        verdicts[r.verdict] = verdicts.get(r.verdict, 0) + 1
    n = len(records)
    return {
        "trials": n,
        "verdicts": dict(sorted(verdicts.items())),
        "choices": {
            "mean": statistics.fmean(totals) if totals else 0.0,
            "median": statistics.median(totals) if totals else 0,
            "max": max(totals, default=0),
        },
        "events": {
            "x1_false": sum(r.x1_false for r in records) / n if n else 0.0,
            "all_true": sum(r.all_true for r in records) / n if n else 0.0,
            "descent_sat": sum(r.descent_sat for r in records) / n if n else 0.0,
        },
    }


def run_experiment(cfg: ExperimentConfig) -> tuple[list[TrialRecord], dict]:
    records = list(iter_trials(cfg))
    summary = summarize(records)
    summary["config"] = asdict(cfg)
    return records, summary


def records_to_csv(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()


def wilson_interval(hits: int, n: int, z: float = WILSON_Z) -> tuple[float, float]:
    if n <= 0:
        raise ValueError("need at least one trial")
    p = hits / n
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class ProbabilityEstimate:
    event: str
    trials: int
    hits: int
    frequency: float
    ci_low: float
    ci_high: float
    exact: Fraction | None = None
    oracle_nodes: int | None = None

    def sigma_distance(self) -> float | None:
        """|frequency - exact| in binomial standard deviations of the exact value."""
        if self.exact is None:
            return None
        p = float(self.exact)
        sd = math.sqrt(p * (1 - p) / self.trials)
        diff = abs(self.frequency - p)
        if sd == 0:
            return 0.0 if diff == 0 else math.inf
        return diff / sd

    def to_dict(self) -> dict:
        d = asdict(self)
        d["exact"] = None if self.exact is None else f"{self.exact.numerator}/{self.exact.denominator}"
        d["exact_decimal"] = None if self.exact is None else float(self.exact)
        d["sigma_distance"] = self.sigma_distance()
        return d


def estimate_probability(cfg: ExperimentConfig, with_oracle: bool = True,
                         max_nodes: int = 10**6) -> ProbabilityEstimate:
    """Monte Carlo frequency of ``cfg.event`` over first descents, with Wilson 95% CI.

    The exact first-descent probability is reported alongside when the
    oracle can enumerate the instance within ``max_nodes``.
    """
    f = cfg.build_formula()
    M = cfg.scaffold_width
    event = make_event(cfg.event, M or None)
    heuristic = get_heuristic(cfg.heuristic, cfg.pure_literals)
    sampler = DescentSampler(f, heuristic)
    hits = 0
    for i in range(cfg.trials):
        outcome = sampler.sample(RandomSource(trial_seed(cfg.master_seed, i)))
        hits += bool(event(outcome.terminal, outcome.assignment))
    low, high = wilson_interval(hits, cfg.trials)
    est = ProbabilityEstimate(cfg.event, cfg.trials, hits, hits / cfg.trials, low, high)
    if with_oracle:
        try:
            dist = descent_distribution(f, heuristic, max_nodes)
        except OracleLimitError:
            dist = None
        if dist is not None and dist.complete:
            est.exact = dist.probability(event)
            est.oracle_nodes = dist.nodes
    return est


@dataclass
class SweepRow:
    n: int
    runs: int
    median: float
    mean: float
    max: int
    exhausted_fraction: float
    totals: list[int] = field(default_factory=list, repr=False)


SWEEP_COLUMNS = ("n", "runs", "median", "mean", "max", "exhausted_fraction")


def scaling_sweep(sizes: Sequence[int], seeds: Sequence[int], heuristic: str = "guc",
                  degree: int = 3, budget: int = DEFAULT_BUDGET,
                  pure_literals: bool = True) -> list[SweepRow]:
    """Choice counts of full solves on random regular Tseitin cores, per core size.

    For seed ``s`` the graph is ``regular:n:degree:s`` (odd charge) and the
    solver is seeded with ``trial_seed(s, n)``.
    """
    h = get_heuristic(heuristic, pure_literals)
    rows = []
    for n in sizes:
        totals = []
        exhausted = 0
        for s in seeds:
            f = tseitin(random_regular_graph(n, degree, s))
            stats = solve(f, h, RandomSource(trial_seed(s, n)), budget)
            totals.append(stats.total_choices)
            exhausted += stats.verdict == BUDGET_EXHAUSTED
        rows.append(SweepRow(n, len(totals), statistics.median(totals), statistics.fmean(totals),
                             max(totals), exhausted / len(totals), totals))
    return rows


def sweep_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for r in rows:
        writer.writerow([getattr(r, c) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def sweep_to_gnuplot(rows: Iterable[SweepRow]) -> str:
    lines = ["# " + " ".join(SWEEP_COLUMNS)]
    for r in rows:
        lines.append(" ".join(str(getattr(r, c)) for c in SWEEP_COLUMNS))
    return "\n".join(lines) + "\n"


def summary_to_json(summary: dict) -> str:
    return json.dumps(summary, indent=2, sort_keys=True) + "\n"

