"""Backtracking DPLL laboratory for GUC and Randomized GUC on hard satisfiable formulas."""

from .cnf import CNFError, Formula, apply_assignment, clause_bucket, is_satisfying, pure_literals
from .dimacs import DimacsError, parse_dimacs, write_dimacs
from .engine import DescentOutcome, DescentSampler, RunStats, SearchState, descend, first_descent, solve
from .generators import (
    ChargedGraph,
    FamilyParams,
    attach_literal,
    chain_formula,
    complete_graph,
    cycle_graph,
    edge_expansion,
    graph_library,
    guc_hard,
    random_regular_graph,
    rguc_hard,
    tseitin,
)
from .heuristics import GUC, Choice, RandomizedGUC, RandomSource, get_heuristic, guc_choose, rguc_choose
from .oracle import brute_force_sat, descent_probability, enumerate_satisfying

__version__ = "0.1.0"
