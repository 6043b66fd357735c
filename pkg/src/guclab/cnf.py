"""CNF data model.

Literals are nonzero signed integers in the DIMACS convention: ``v`` is the
variable ``x_v`` and ``-v`` its negation. A clause is a ``frozenset`` of
literals, a formula is a set of clauses, and an assignment is a consistent
``frozenset`` of literals.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator

Literal = int
Clause = frozenset
Assignment = frozenset

EMPTY_CLAUSE: frozenset = frozenset()


class CNFError(ValueError):
    """Raised when a clause, formula or assignment violates its invariants."""


def var(lit: Literal) -> int:
    return lit if lit > 0 else -lit


def negate(lit: Literal) -> Literal:
    return -lit


def lit_key(lit: Literal) -> tuple[int, bool]:
    # variable index first, positive before negative
    return (lit if lit > 0 else -lit, lit < 0)


@lru_cache(maxsize=1 << 16)
def clause_key(clause: frozenset) -> tuple:
    """Canonical sort key for a clause (lexicographic over ordered literals)."""
    return tuple(lit_key(l) for l in sorted(clause, key=lit_key))


def sorted_clause(clause: Iterable[Literal]) -> list[Literal]:
    return sorted(clause, key=lit_key)


def sorted_literals(lits: Iterable[Literal]) -> list[Literal]:
    return sorted(lits, key=lit_key)


def make_clause(lits: Iterable[Literal]) -> frozenset:
    clause = frozenset(lits)
    for lit in clause:
        if not isinstance(lit, int) or lit == 0:
            raise CNFError(f"invalid literal {lit!r}")
        if -lit in clause:
            raise CNFError(f"clause contains complementary pair on x{var(lit)}")
    return clause


def make_assignment(lits: Iterable[Literal]) -> frozenset:
    """Build an assignment, rejecting any variable set both ways."""
    try:
        return make_clause(lits)
    except CNFError as exc:
        raise CNFError(f"inconsistent assignment: {exc}") from None


class Formula:
    """An immutable CNF formula with set semantics.

    Equal clauses collapse. The empty formula (no clauses, satisfied) is
    distinct from a formula containing the empty clause (contradiction).
    """

    __slots__ = ("_clauses", "_hash")

    def __init__(self, clauses: Iterable[Iterable[Literal]] = ()):
        self._clauses = frozenset(
            c if isinstance(c, frozenset) and _valid(c) else make_clause(c) for c in clauses
        )
        self._hash = None

    @property
    def clauses(self) -> frozenset:
        return self._clauses

    def __iter__(self) -> Iterator[frozenset]:
        return iter(sorted(self._clauses, key=clause_key))

    def __len__(self) -> int:
        return len(self._clauses)

    def __contains__(self, clause) -> bool:
        return frozenset(clause) in self._clauses

    def __eq__(self, other) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return self._clauses == other._clauses

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._clauses)
        return self._hash

    def __or__(self, other: "Formula") -> "Formula":
        return Formula(self._clauses | other._clauses)

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, sorted_clause(c))) + "}" for c in self)
        return f"Formula({{{body}}})"

    @property
    def is_empty(self) -> bool:
        return not self._clauses

    @property
    def contains_empty_clause(self) -> bool:
        return EMPTY_CLAUSE in self._clauses

    def variables(self) -> list[int]:
        return sorted({var(l) for c in self._clauses for l in c})

    def max_variable(self) -> int:
        return max((var(l) for c in self._clauses for l in c), default=0)

    def literals(self) -> set[Literal]:
        return {l for c in self._clauses for l in c}

    def width(self) -> int:
        return max((len(c) for c in self._clauses), default=0)

    def apply(self, assignment: Iterable[Literal]) -> "Formula":
        """Return F[I]: drop satisfied clauses, delete falsified literals."""
        i = make_assignment(assignment)
        falsified = frozenset(-l for l in i)
        out = set()
        for c in self._clauses:
            if c & i:
                continue
            out.add(c - falsified if c & falsified else c)
        return Formula(out)

    def pure_literals(self) -> set[Literal]:
        lits = self.literals()
        return {l for l in lits if -l not in lits}

    def unit_literals(self) -> set[Literal]:
        return {l for c in self._clauses if len(c) == 1 for l in c}

    def clause_bucket(self, size: int) -> set[frozenset]:
        if size < 0:
            raise ValueError("bucket size must be nonnegative")
        return {c for c in self._clauses if len(c) == size}

    def min_nonempty_bucket(self) -> int:
        if not self._clauses:
            raise ValueError("min bucket is undefined for the empty formula")
        return min(len(c) for c in self._clauses)


def _valid(clause: frozenset) -> bool:
    for lit in clause:
        if not isinstance(lit, int) or lit == 0 or -lit in clause:
            return False
    return True


def apply_assignment(f: Formula, i: Iterable[Literal]) -> Formula:
    return f.apply(i)


def pure_literals(f: Formula) -> set[Literal]:
    return f.pure_literals()


def clause_bucket(f: Formula, size: int) -> set[frozenset]:
    return f.clause_bucket(size)


def min_nonempty_bucket(f: Formula) -> int:
    return f.min_nonempty_bucket()


def is_satisfying(f: Formula, i: Iterable[Literal]) -> bool:
    return f.apply(i).is_empty


def format_literal(lit: Literal) -> str:
    return f"x{lit}" if lit > 0 else f"~x{-lit}"
