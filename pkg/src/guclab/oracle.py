"""Ground truth: exhaustive satisfiability and exact first-descent probabilities."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .cnf import Formula, lit_key, sorted_literals
from .engine import CONTRADICTION, SATISFIED, SearchState
from .heuristics import Heuristic

MAX_SAT_VARS = 25
MAX_COUNT_VARS = 20
MAX_DESCENT_NODES = 10**6

Event = Callable[[str, frozenset], bool]


class OracleLimitError(ValueError):
    """The request exceeds the oracle's exhaustive-enumeration bound."""


class IncompleteEnumeration(OracleLimitError):
    def __init__(self, partial: Fraction, nodes: int):
        self.partial = partial
        self.nodes = nodes
        super().__init__(f"descent tree exceeds {nodes} nodes; partial mass {partial}")


def _truth_tables(f: Formula, limit: int) -> tuple[list[int], int]:
    """Satisfaction bitmask of f over all total assignments of its variables.

    Bit ``a`` stands for the assignment whose j-th variable (ascending) is
    true iff bit ``n-1-j`` of ``a`` is set, so numeric order of ``a`` is
    lexicographic order with false < true.
    """
    vs = f.variables()
    n = len(vs)
    if n > limit:
        raise OracleLimitError(f"{n} variables exceeds the exhaustive bound of {limit}")
    size = 1 << n
    full = (1 << size) - 1
    tables = {}
    for j, v in enumerate(vs):
        shift = n - 1 - j
        block = 1 << shift
        # ones on indices whose bit `shift` is set
        pattern = ((1 << block) - 1) << block
        period = 2 * block
        t = pattern
        span = period
        while span < size:
            t |= t << span
            span *= 2
        tables[v] = t & full
    sat = full
    for clause in f.clauses:
        c = 0
        for lit in clause:
            c |= tables[lit] if lit > 0 else full ^ tables[-lit]
        sat &= c
        if not sat:
            break
    return vs, sat


def _decode(vs: list[int], index: int) -> frozenset:
    n = len(vs)
    return frozenset(v if (index >> (n - 1 - j)) & 1 else -v for j, v in enumerate(vs))


def brute_force_sat(f: Formula) -> tuple[bool, frozenset | None]:
    """Exhaustive check; returns the lexicographically least witness when sat."""
    vs, sat = _truth_tables(f, MAX_SAT_VARS)
    if not sat:
        return False, None
    return True, _decode(vs, (sat & -sat).bit_length() - 1)


def enumerate_satisfying(f: Formula, listing: bool = False) -> tuple[int, list[frozenset] | None]:
    vs, sat = _truth_tables(f, MAX_COUNT_VARS)
    count = sat.bit_count()
    if not listing:
        return count, None
    out = []
    while sat:
        low = sat & -sat
        out.append(_decode(vs, low.bit_length() - 1))
        sat ^= low
    return count, out


@dataclass
class DescentDistribution:
    outcomes: dict[tuple[str, frozenset], Fraction] = field(default_factory=dict)
    complete: bool = True
    nodes: int = 0

    @property
    def total_mass(self) -> Fraction:
        return sum(self.outcomes.values(), Fraction(0))

    def probability(self, event: Event) -> Fraction:
        return sum((p for (t, a), p in self.outcomes.items() if event(t, a)), Fraction(0))


def _assignment_key(a: frozenset) -> tuple:
    return tuple(lit_key(l) for l in sorted_literals(a))


def descent_distribution(f: Formula, heuristic: Heuristic,
                         max_nodes: int = MAX_DESCENT_NODES) -> DescentDistribution:
    """Exact law of the first-descent terminal record.

    Every step adds one literal, so states at depth d are exactly the
    reachable assignments of size d; mass is pushed forward layer by layer
    and paths reaching the same assignment merge. Each state is rebuilt on
    the engine's own :class:`SearchState` and branched with the heuristic's
    own candidate description.
    """
    state = SearchState(f)
    dist = DescentDistribution()
    layer: dict[frozenset, Fraction] = {frozenset(): Fraction(1)}
    while layer:
        nxt: dict[frozenset, Fraction] = defaultdict(Fraction)
        for a in sorted(layer, key=_assignment_key):
            if dist.nodes >= max_nodes:
                dist.complete = False
                state.reset()
                return dist
            dist.nodes += 1
            mass = layer[a]
            state.move_to(sorted_literals(a))
            if state.contains_empty_clause:
                key = (CONTRADICTION, a)
                dist.outcomes[key] = dist.outcomes.get(key, 0) + mass
            elif state.is_empty:
                key = (SATISFIED, a)
                dist.outcomes[key] = dist.outcomes.get(key, 0) + mass
            else:
                _, probs = heuristic.distribution(state)
                for lit, p in probs.items():
                    nxt[a | {lit}] += mass * p
        layer = nxt
    state.reset()
    return dist


def descent_probability(f: Formula, heuristic: Heuristic, event: Event,
                        max_nodes: int = MAX_DESCENT_NODES) -> Fraction:
    dist = descent_distribution(f, heuristic, max_nodes)
    p = dist.probability(event)
    if not dist.complete:
        raise IncompleteEnumeration(p, dist.nodes)
    return p


# Event predicates over a terminal record (terminal kind, assignment).

def event_always(terminal: str, assignment: frozenset) -> bool:
    return True


def event_x1_false(terminal: str, assignment: frozenset) -> bool:
    return -1 in assignment


def event_satisfied(terminal: str, assignment: frozenset) -> bool:
    return terminal == SATISFIED


def event_all_true(M: int) -> Event:
    """x_1..x_M all set true by the descent."""
    wanted = frozenset(range(1, M + 1))

    def pred(terminal: str, assignment: frozenset) -> bool:
        return wanted <= assignment

    return pred


EVENT_NAMES = ("x1-false", "all-true", "satisfied", "always")


def make_event(name: str, M: int | None = None) -> Event:
    if name == "x1-false":
        return event_x1_false
    if name == "satisfied":
        return event_satisfied
    if name == "always":
        return event_always
    if name == "all-true":
        if not M:
            raise ValueError("event 'all-true' needs the scaffold width M")
        return event_all_true(M)
    raise ValueError(f"unknown event {name!r} (expected one of {EVENT_NAMES})")
