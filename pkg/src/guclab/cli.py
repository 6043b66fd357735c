"""Command line interface: generate, solve, experiment, sweep, oracle."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .dimacs import DimacsError, read_dimacs, write_dimacs
from .engine import DEFAULT_BUDGET, SAT, UNSAT, format_trace_line, solve
from .generators import parse_graph_spec
from .harness import (
    ExperimentConfig,
    estimate_probability,
    records_to_csv,
    run_experiment,
    scaling_sweep,
    summary_to_json,
    sweep_to_csv,
    sweep_to_gnuplot,
)
from .heuristics import RandomSource, get_heuristic
from .oracle import (
    EVENT_NAMES,
    OracleLimitError,
    brute_force_sat,
    descent_distribution,
    enumerate_satisfying,
    make_event,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _shared(p: argparse.ArgumentParser, *, trials: bool = False) -> None:
    p.add_argument("--family", choices=("guc-hard", "rguc-hard", "tseitin", "dimacs-file"),
                   default="guc-hard")
    p.add_argument("--M", type=int, default=6, help="scaffold width")
    p.add_argument("--graph", default="complete:4",
                   help="cycle:N | complete:N | regular:N:D:SEED (default complete:4)")
    p.add_argument("--parity", choices=("odd", "even"), default="odd", help="total charge parity")
    p.add_argument("--input", help="DIMACS file (implies --family dimacs-file)")
    p.add_argument("--heuristic", choices=("guc", "rguc"), default="guc")
    p.add_argument("--no-pure-literals", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--event", choices=EVENT_NAMES, default="x1-false")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    if trials:
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--workers", type=int, default=1)


def _config(args, trials: int = 1) -> ExperimentConfig:
    family = "dimacs-file" if args.input else args.family
    return ExperimentConfig(
        family=family, M=args.M, graph=args.graph, parity=1 if args.parity == "odd" else 0,
        dimacs_path=args.input, heuristic=args.heuristic,
        pure_literals=not args.no_pure_literals, trials=getattr(args, "trials", trials),
        master_seed=args.seed, budget=args.budget, event=args.event,
        workers=getattr(args, "workers", 1), timing=getattr(args, "timing", False),
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    cfg = _config(args)
    f = cfg.build_formula()
    comments = [f"family {cfg.family}"]
    if cfg.family != "dimacs-file":
        graph = parse_graph_spec(cfg.graph, cfg.parity)
        if cfg.scaffold_width:
            comments.append(f"M {cfg.M}")
        comments.append(f"graph {cfg.graph}")
        comments.append("charges " + "".join(map(str, graph.charges)))
    comments.append(f"seed {cfg.master_seed}")
    _emit(write_dimacs(f, comments), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    cfg = _config(args)
    f = cfg.build_formula()
    lines = []
    trace = (lambda depth, c: lines.append(format_trace_line(depth, c))) if args.trace else None
    stats = solve(f, get_heuristic(cfg.heuristic, cfg.pure_literals), RandomSource(cfg.master_seed),
                  cfg.budget, trace=trace)
    if args.trace:
        text = "\n".join(lines) + ("\n" if lines else "")
        if args.trace == "-":
            sys.stdout.write(text)
        else:
            Path(args.trace).write_text(text)
    status = {SAT: "SATISFIABLE", UNSAT: "UNSATISFIABLE"}.get(stats.verdict, "UNKNOWN")
    out = [
        f"s {status}",
        f"c verdict={stats.verdict} total={stats.total_choices} free={stats.free_choices} "
        f"forced={stats.forced_choices} flips={stats.flips} depth={stats.peak_depth} seed={stats.seed}",
    ]
    if stats.witness is not None:
        lits = sorted(stats.witness, key=abs)
        out.append("v " + " ".join(map(str, lits)) + " 0")
    _emit("\n".join(out) + "\n", args.out)
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = _config(args)
    if args.descent_only:
        est = estimate_probability(cfg)
        _emit(json.dumps(est.to_dict(), indent=2, sort_keys=True) + "\n", args.out)
        return EXIT_OK
    records, summary = run_experiment(cfg)
    if args.format == "json":
        payload = {"summary": summary, "trials": [r.__dict__ for r in records]}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _emit(records_to_csv(records), args.out)
        if args.out:
            Path(args.out + ".summary.json").write_text(summary_to_json(summary))
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",")]
    except ValueError:
        raise UsageError(f"bad --sizes {args.sizes!r}") from None
    seeds = range(args.seed, args.seed + args.trials)
    rows = scaling_sweep(sizes, seeds, args.heuristic, args.degree, args.budget,
                         not args.no_pure_literals)
    if args.out:
        Path(args.out).write_text(sweep_to_csv(rows))
        Path(args.out).with_suffix(".dat").write_text(sweep_to_gnuplot(rows))
    else:
        sys.stdout.write(sweep_to_csv(rows))
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = _config(args)
    f = cfg.build_formula()
    try:
        if args.mode == "sat":
            ok, witness = brute_force_sat(f)
            text = "SAT " + " ".join(map(str, sorted(witness, key=abs))) if ok else "UNSAT"
        elif args.mode == "count":
            count, _ = enumerate_satisfying(f)
            text = str(count)
        else:
            event = make_event(cfg.event, cfg.scaffold_width or None)
            dist = descent_distribution(f, get_heuristic(cfg.heuristic, cfg.pure_literals),
                                        args.max_nodes)
            p = dist.probability(event)
            if not dist.complete:
                sys.stderr.write(f"incomplete: node budget {args.max_nodes} exceeded; "
                                 f"partial mass {p.numerator}/{p.denominator}\n")
                return EXIT_INFEASIBLE
            text = f"{p.numerator}/{p.denominator} {float(p):.10g}"
    except OracleLimitError as exc:
        sys.stderr.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    _emit(text + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="guclab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"guclab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="emit a formula family as DIMACS")
    _shared(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="run the backtracking engine once")
    _shared(p)
    p.add_argument("--trace", nargs="?", const="-", help="dump the choice trail (to PATH or stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("experiment", help="seeded trials with CSV/JSON reporting")
    _shared(p, trials=True)
    p.add_argument("--descent-only", action="store_true",
                   help="estimate the event probability over first descents")
    p.add_argument("--timing", action="store_true", help="fill the ms column (not reproducible)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("sweep", help="choice-count scaling on random regular Tseitin cores")
    _shared(p, trials=True)
    p.add_argument("--sizes", default="6,8,10,12,14")
    p.add_argument("--degree", type=int, default=3)
    p.set_defaults(func=cmd_sweep, trials=50)

    p = sub.add_parser("oracle", help="exhaustive ground truth")
    _shared(p)
    p.add_argument("--mode", choices=("sat", "count", "descent-prob"), default="sat")
    p.add_argument("--max-nodes", type=int, default=10**6)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DimacsError, ValueError, OSError) as exc:
        sys.stderr.write(f"guclab {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
