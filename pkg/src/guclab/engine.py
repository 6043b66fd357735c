"""Instrumented backtracking DPLL engine.

The engine walks down the assignment tree making heuristic choices. On a
contradiction it pops the trail back to the most recent free choice, flips
that literal and marks the flip forced. Every literal assignment, flips
included, is one choice.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable

from .cnf import Formula, sorted_clause
from .heuristics import FLIP, Choice, Heuristic

SAT = "sat"
UNSAT = "unsat"
BUDGET_EXHAUSTED = "budget_exhausted"

SATISFIED = "satisfied"
CONTRADICTION = "contradiction"

DEFAULT_BUDGET = 10**7


class SearchState:
    """Mutable view of ``F[I]`` for the current trail, restored by undo log.

    Each original clause keeps its current size and a satisfied flag;
    clause ids are bucketed by size. The reduced clause contents are built
    only when a bucket is read, and deduplicated there, so callers always
    see the formula under set semantics.
    """

    def __init__(self, formula: Formula):
        self.formula = formula
        clauses = [tuple(sorted_clause(c)) for c in formula]
        self._clauses = clauses
        self._frozen = [frozenset(c) for c in clauses]
        width = max((len(c) for c in clauses), default=0)
        self._size = [len(c) for c in clauses]
        self._satisfied = [False] * len(clauses)
        self._buckets: list[set[int]] = [set() for _ in range(width + 1)]
        self._occ: dict[int, list[int]] = defaultdict(list)
        self._vars = formula.variables()
        # indexed by literal: a negative literal -v lands at len - v, clear of 1..n
        self._counts = [0] * (2 * formula.max_variable() + 1)
        for cid, clause in enumerate(clauses):
            self._buckets[len(clause)].add(cid)
            for lit in clause:
                self._occ[lit].append(cid)
                self._counts[lit] += 1
        self._active = len(clauses)
        self._true: set[int] = set()
        self._log: list[tuple[int, list[int], list[int]]] = []
        self.assigned: list[int] = []
        self._root = (list(self._size), [set(b) for b in self._buckets], list(self._counts))

    def assign(self, lit: int) -> None:
        true = self._true
        if lit in true or -lit in true:
            raise ValueError(f"x{abs(lit)} is already assigned")
        true.add(lit)
        satisfied = self._satisfied
        size = self._size
        buckets = self._buckets
        counts = self._counts
        clauses = self._clauses
        newly_sat = []
        for cid in self._occ.get(lit, ()):
            if satisfied[cid]:
                continue
            satisfied[cid] = True
            newly_sat.append(cid)
            buckets[size[cid]].discard(cid)
            for l in clauses[cid]:
                counts[l] -= 1
        neg = -lit
        shortened = []
        for cid in self._occ.get(neg, ()):
            if satisfied[cid]:
                continue
            n = size[cid]
            buckets[n].discard(cid)
            buckets[n - 1].add(cid)
            size[cid] = n - 1
            shortened.append(cid)
        self._active -= len(newly_sat)
        self._log.append((lit, newly_sat, shortened))
        self.assigned.append(lit)

    def undo(self) -> int:
        lit, newly_sat, shortened = self._log.pop()
        size = self._size
        buckets = self._buckets
        for cid in shortened:
            n = size[cid]
            buckets[n].discard(cid)
            buckets[n + 1].add(cid)
            size[cid] = n + 1
        true = self._true
        satisfied = self._satisfied
        counts = self._counts
        clauses = self._clauses
        for cid in newly_sat:
            satisfied[cid] = False
            buckets[size[cid]].add(cid)
            for l in clauses[cid]:
                counts[l] += 1
        self._active += len(newly_sat)
        true.discard(lit)
        return self.assigned.pop()

    def reset(self) -> None:
        """Return to the root (empty assignment) in one step."""
        if not self._log:
            return
        size, buckets, counts = self._root
        self._size[:] = size
        self._buckets = [set(b) for b in buckets]
        self._counts[:] = counts
        self._satisfied = [False] * len(self._clauses)
        self._active = len(self._clauses)
        self._true.clear()
        self._log.clear()
        self.assigned.clear()

    def move_to(self, target: list[int]) -> None:
        """Re-point the state at the trail ``target``, keeping the shared prefix."""
        held = self.assigned
        common = 0
        for x, y in zip(held, target):
            if x != y:
                break
            common += 1
        while len(held) > common:
            self.undo()
        for lit in target[common:]:
            self.assign(lit)

    @property
    def depth(self) -> int:
        return len(self.assigned)

    @property
    def is_empty(self) -> bool:
        return not self._active

    @property
    def contains_empty_clause(self) -> bool:
        return bool(self._buckets and self._buckets[0])

    def _content(self, cid: int) -> frozenset:
        clause = self._clauses[cid]
        if self._size[cid] == len(clause):
            return self._frozen[cid]
        true = self._true
        return frozenset(l for l in clause if -l not in true)

    def clause_bucket(self, size: int) -> set[frozenset]:
        if size >= len(self._buckets):
            return set()
        return {self._content(cid) for cid in self._buckets[size]}

    def min_nonempty_bucket(self) -> int:
        for size, ids in enumerate(self._buckets):
            if ids:
                return size
        raise ValueError("min bucket is undefined for the empty formula")

    def unit_literals(self) -> set[int]:
        if len(self._buckets) < 2:
            return set()
        true = self._true
        clauses = self._clauses
        return {l for cid in self._buckets[1] for l in clauses[cid] if -l not in true}

    def pure_literals(self) -> set[int]:
        # counts are over unsatisfied clauses of the original formula, so a
        # falsified literal can still carry a count; assigned variables are skipped
        counts = self._counts
        true = self._true
        out = set()
        for v in self._vars:
            if v in true or -v in true:
                continue
            pos, neg = counts[v], counts[-v]
            if pos and not neg:
                out.add(v)
            elif neg and not pos:
                out.add(-v)
        return out

    def to_formula(self) -> Formula:
        return Formula(self._content(cid) for cid, s in enumerate(self._satisfied) if not s)


@dataclass(frozen=True)
class DescentOutcome:
    terminal: str
    trail: tuple[Choice, ...]
    assignment: frozenset

    @classmethod
    def from_trail(cls, terminal: str, trail) -> "DescentOutcome":
        trail = tuple(trail)
        return cls(terminal, trail, frozenset(c.literal for c in trail))


@dataclass
class RunStats:
    verdict: str
    witness: frozenset | None = None
    total_choices: int = 0
    free_choices: int = 0
    forced_choices: int = 0
    flips: int = 0
    peak_depth: int = 0
    seed: int | None = None
    first_descent: DescentOutcome | None = field(default=None, repr=False)


TraceHook = Callable[[int, Choice], None]


def solve(
    f: Formula,
    heuristic: Heuristic,
    rng: random.Random,
    budget: int = DEFAULT_BUDGET,
    trace: TraceHook | None = None,
) -> RunStats:
    """Run the backtracking search until sat, unsat, or the choice budget is spent.

    ``trace`` is called as ``trace(depth, choice)`` for every assignment made.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    state = SearchState(f)
    trail: list[Choice] = []
    stats = RunStats(verdict=UNSAT, seed=getattr(rng, "initial_seed", None))

    def make(choice: Choice) -> bool:
        if stats.total_choices + 1 > budget:
            stats.verdict = BUDGET_EXHAUSTED
            return False
        stats.total_choices += 1
        if choice.forced:
            stats.forced_choices += 1
        else:
            stats.free_choices += 1
        if choice.source == FLIP:
            stats.flips += 1
        state.assign(choice.literal)
        trail.append(choice)
        stats.peak_depth = max(stats.peak_depth, len(trail))
        if trace is not None:
            trace(len(trail), choice)
        return True

    while True:
        if state.contains_empty_clause:
            if stats.first_descent is None:
                stats.first_descent = DescentOutcome.from_trail(CONTRADICTION, trail)
            while trail and trail[-1].forced:
                trail.pop()
                state.undo()
            if not trail:
                stats.verdict = UNSAT
                return stats
            last = trail.pop()
            state.undo()
            if not make(Choice(-last.literal, True, FLIP)):
                return stats
            continue
        if state.is_empty:
            if stats.first_descent is None:
                stats.first_descent = DescentOutcome.from_trail(SATISFIED, trail)
            stats.verdict = SAT
            stats.witness = frozenset(c.literal for c in trail)
            return stats
        if stats.total_choices + 1 > budget:
            stats.verdict = BUDGET_EXHAUSTED
            return stats
        make(heuristic.choose(state, rng))


def descend(state: SearchState, heuristic: Heuristic, rng: random.Random) -> DescentOutcome:
    """Go down from ``state`` until satisfied or contradictory; leaves ``state`` as found."""
    trail = []
    at_root = state.depth == 0
    try:
        while True:
            if state.contains_empty_clause:
                return DescentOutcome.from_trail(CONTRADICTION, trail)
            if state.is_empty:
                return DescentOutcome.from_trail(SATISFIED, trail)
            choice = heuristic.choose(state, rng)
            state.assign(choice.literal)
            trail.append(choice)
    finally:
        if at_root and len(trail) > 4:
            state.reset()
        else:
            for _ in trail:
                state.undo()


class DescentSampler:
    """Repeated first descents from the root of one formula.

    The heuristic's candidates depend only on the current assignment set,
    so they are memoized per state (up to ``max_states`` entries) and the
    walk re-syncs the search state only on a cache miss. Draws go through
    :meth:`Heuristic.draw`, so for the same rng each sample equals
    ``descend`` from the root.
    """

    def __init__(self, f: Formula, heuristic: Heuristic, max_states: int = 200_000):
        self.heuristic = heuristic
        self.max_states = max_states
        self._state = SearchState(f)
        self._memo: dict[frozenset, tuple] = {}

    def _step(self, key: frozenset, trail: list[int]) -> tuple:
        step = self._memo.get(key)
        if step is not None:
            return step
        state = self._state
        state.move_to(trail)
        if state.contains_empty_clause:
            step = (CONTRADICTION,)
        elif state.is_empty:
            step = (SATISFIED,)
        else:
            step = self.heuristic.candidates(state, lazy=True)
        if len(self._memo) < self.max_states:
            self._memo[key] = step
        return step

    def sample(self, rng: random.Random) -> DescentOutcome:
        trail: list[Choice] = []
        lits: list[int] = []
        key = frozenset()
        while True:
            step = self._step(key, lits)
            if len(step) == 1:
                return DescentOutcome(step[0], tuple(trail), key)
            choice = self.heuristic.draw(step[0], step[1], rng)
            trail.append(choice)
            lits.append(choice.literal)
            key = key | {choice.literal}


def first_descent(f: Formula, heuristic: Heuristic, rng: random.Random) -> DescentOutcome:
    return descend(SearchState(f), heuristic, rng)


def format_trace_line(depth: int, choice: Choice) -> str:
    kind = "forced" if choice.forced else "free"
    return f"{depth} {choice.literal} {kind} {choice.source}"
