"""Literal-selection heuristics: GUC and Randomized GUC.

A heuristic looks at a formula view (anything with ``min_nonempty_bucket``,
``clause_bucket`` and ``pure_literals``; both :class:`~guclab.cnf.Formula`
and the engine's search state qualify) and returns a :class:`Choice`.

Every random step is a two-stage draw: a group uniformly at random, then a
literal uniformly from that group. :meth:`Heuristic.candidates` exposes the
groups so that sampling (``choose``) and exact enumeration
(``distribution``) read the same description.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol

from .cnf import clause_key, sorted_clause, sorted_literals

UNIT = "unit"
PURE = "pure"
SPLIT = "split"
FLIP = "flip"


class FormulaView(Protocol):
    def min_nonempty_bucket(self) -> int: ...
    def clause_bucket(self, size: int): ...
    def pure_literals(self): ...
    def unit_literals(self): ...


@dataclass(frozen=True, slots=True)
class Choice:
    literal: int
    forced: bool
    source: str

    def __post_init__(self):
        if (self.source == SPLIT) == self.forced:
            raise ValueError(f"source {self.source!r} inconsistent with forced={self.forced}")


class RandomSource(random.Random):
    """Seeded PRNG that remembers the seed it started from."""

    def __init__(self, seed: int = 0):
        self.initial_seed = seed
        super().__init__(seed)


class Heuristic:
    """Shared steps 1-3 of the GUC family; subclasses define the split step."""

    name = "base"

    def __init__(self, pure_literals: bool = True):
        self.use_pure_literals = pure_literals

    def __repr__(self) -> str:
        flag = "" if self.use_pure_literals else ", pure_literals=False"
        return f"{type(self).__name__}({flag.lstrip(', ')})"

    def split_group(self, clause: frozenset) -> list[int]:
        raise NotImplementedError

    def candidates(self, f: FormulaView, lazy: bool = False) -> tuple[str, list]:
        """Return the step kind and its draw groups.

        With ``lazy`` the split groups are returned as bare clauses (still in
        canonical order) and expanded by the caller after the clause draw.
        """
        m = f.min_nonempty_bucket()
        if m == 0:
            raise ValueError("formula contains the empty clause")
        if m == 1:
            return UNIT, [sorted_literals(f.unit_literals())]
        if self.use_pure_literals:
            pure = f.pure_literals()
            if pure:
                return PURE, [sorted_literals(pure)]
        bucket = sorted(f.clause_bucket(m), key=clause_key)
        return SPLIT, bucket if lazy else [self.split_group(c) for c in bucket]

    def choose(self, f: FormulaView, rng: random.Random) -> Choice:
        source, groups = self.candidates(f, lazy=True)
        return self.draw(source, groups, rng)

    def draw(self, source: str, groups: list, rng: random.Random) -> Choice:
        """The two-stage draw over lazy candidates: a group, then a literal in it."""
        group = groups[_pick(rng, len(groups))]
        if source == SPLIT:
            group = self.split_group(group)
        return Choice(group[_pick(rng, len(group))], source != SPLIT, source)

    def distribution(self, f: FormulaView) -> tuple[str, dict[int, Fraction]]:
        """Exact probability of each literal being chosen on ``f``."""
        source, groups = self.candidates(f)
        probs: dict[int, Fraction] = {}
        for group in groups:
            share = Fraction(1, len(groups) * len(group))
            for lit in group:
                probs[lit] = probs.get(lit, 0) + share
        return source, probs


class GUC(Heuristic):
    """Satisfy a random literal of a random shortest clause."""

    name = "guc"

    def split_group(self, clause):
        return sorted_clause(clause)


class RandomizedGUC(Heuristic):
    """Like GUC, but the split literal is drawn from C together with its negations."""

    name = "rguc"

    def split_group(self, clause):
        return sorted_literals(list(clause) + [-l for l in clause])


HEURISTICS = {GUC.name: GUC, RandomizedGUC.name: RandomizedGUC}


def get_heuristic(name: str, pure_literals: bool = True) -> Heuristic:
    try:
        return HEURISTICS[name](pure_literals=pure_literals)
    except KeyError:
        raise ValueError(f"unknown heuristic {name!r} (expected one of {sorted(HEURISTICS)})") from None


def guc_choose(f: FormulaView, rng: random.Random, pure_literals: bool = True) -> Choice:
    return GUC(pure_literals).choose(f, rng)


def rguc_choose(f: FormulaView, rng: random.Random, pure_literals: bool = True) -> Choice:
    return RandomizedGUC(pure_literals).choose(f, rng)


def _pick(rng: random.Random, n: int) -> int:
    return 0 if n == 1 else rng.randrange(n)
