"""Charged graphs, Tseitin formulas and the two hard satisfiable families."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cnf import CNFError, Formula, var

MAX_TSEITIN_DEGREE = 6
MAX_EXPANSION_VERTICES = 20


class DegenerateCoreError(CNFError):
    """An isolated vertex carries charge 1, so the core is trivially unsatisfiable."""


@dataclass(frozen=True)
class ChargedGraph:
    """Multigraph with 0/1 vertex charges. Vertices are ``0..vertex_count-1``."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    charges: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        object.__setattr__(self, "charges", tuple(int(c) for c in self.charges))
        if self.vertex_count < 1:
            raise ValueError("graph needs at least one vertex")
        if len(self.charges) != self.vertex_count:
            raise ValueError("one charge per vertex required")
        if any(c not in (0, 1) for c in self.charges):
            raise ValueError("charges must be 0 or 1")
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")

    @property
    def total_charge_parity(self) -> int:
        return sum(self.charges) % 2

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def incident_edges(self, vertex: int) -> list[int]:
        return [i for i, (u, v) in enumerate(self.edges) if vertex in (u, v)]

    def is_connected(self) -> bool:
        adj = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.vertex_count

    def with_charges(self, charges) -> "ChargedGraph":
        return ChargedGraph(self.vertex_count, self.edges, tuple(charges))

    def with_parity(self, parity: int) -> "ChargedGraph":
        """Single charge on vertex 0 for odd parity, no charges for even."""
        charges = [0] * self.vertex_count
        charges[0] = parity % 2
        return self.with_charges(charges)


def _default_charges(n: int, parity: int) -> tuple[int, ...]:
    return tuple([parity % 2] + [0] * (n - 1))


def cycle_graph(n: int, parity: int = 1) -> ChargedGraph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return ChargedGraph(n, tuple((i, (i + 1) % n) for i in range(n)), _default_charges(n, parity))


def complete_graph(n: int, parity: int = 1) -> ChargedGraph:
    if n < 2:
        raise ValueError("complete graph needs at least 2 vertices")
    return ChargedGraph(n, tuple(itertools.combinations(range(n), 2)), _default_charges(n, parity))


def random_regular_graph(n: int, d: int, rng: random.Random | int, parity: int = 1,
                         max_tries: int = 10_000) -> ChargedGraph:
    """Connected d-regular multigraph from the pairing (configuration) model.

    Pairings with a self-loop or a disconnected result are rejected and
    redrawn. Parallel edges are kept.
    """
    if (n * d) % 2:
        raise ValueError("n*d must be even")
    if d < 1 or d >= n:
        raise ValueError("need 1 <= d < n")
    if isinstance(rng, int):
        rng = random.Random(rng)
    points = [v for v in range(n) for _ in range(d)]
    for _ in range(max_tries):
        rng.shuffle(points)
        pairs = [(min(a, b), max(a, b)) for a, b in zip(points[::2], points[1::2])]
        if any(a == b for a, b in pairs):
            continue
        g = ChargedGraph(n, tuple(sorted(pairs)), _default_charges(n, parity))
        if g.is_connected():
            return g
    raise RuntimeError(f"no connected {d}-regular pairing on {n} vertices after {max_tries} tries")


def graph_library(max_edges: int = 12, parity: int = 1) -> list[ChargedGraph]:
    """The standard small graphs: cycles, complete graphs and a few seeded 3-regular graphs.

    Only graphs with at most ``max_edges`` edges are returned, in a fixed order.
    """
    out = [cycle_graph(n, parity) for n in range(3, max_edges + 1)]
    out += [complete_graph(n, parity) for n in range(3, 8)]
    out += [random_regular_graph(n, 3, seed, parity) for n in (4, 6, 8) for seed in range(3)]
    return [g for g in out if len(g.edges) <= max_edges]


def parse_graph_spec(spec: str, parity: int = 1) -> ChargedGraph:
    """Build a graph from ``cycle:N``, ``complete:N`` or ``regular:N:D:SEED``."""
    parts = spec.split(":")
    try:
        if parts[0] == "cycle" and len(parts) == 2:
            return cycle_graph(int(parts[1]), parity)
        if parts[0] == "complete" and len(parts) == 2:
            return complete_graph(int(parts[1]), parity)
        if parts[0] == "regular" and len(parts) == 4:
            n, d, seed = map(int, parts[1:])
            return random_regular_graph(n, d, seed, parity)
    except ValueError as exc:
        raise ValueError(f"bad graph spec {spec!r}: {exc}") from None
    raise ValueError(f"bad graph spec {spec!r} (expected cycle:N, complete:N or regular:N:D:SEED)")


def edge_expansion(g: ChargedGraph) -> Fraction:
    """min |boundary(S)| / |S| over vertex sets with 1 <= |S| <= n/2."""
    n = g.vertex_count
    if n > MAX_EXPANSION_VERTICES:
        raise ValueError(f"exhaustive expansion limited to {MAX_EXPANSION_VERTICES} vertices")
    if n < 2:
        raise ValueError("expansion needs at least 2 vertices")
    masks = np.arange(1, 1 << n, dtype=np.int64)
    sizes = np.zeros_like(masks)
    for v in range(n):
        sizes += (masks >> v) & 1
    keep = sizes <= n // 2
    masks, sizes = masks[keep], sizes[keep]
    boundary = np.zeros_like(masks)
    for u, v in g.edges:
        boundary += ((masks >> u) ^ (masks >> v)) & 1
    best = Fraction(int(boundary[0]), int(sizes[0]))
    for s in np.unique(sizes):
        b = int(boundary[sizes == s].min())
        best = min(best, Fraction(b, int(s)))
    return best


def tseitin(g: ChargedGraph, first_var: int = 1) -> Formula:
    """Parity constraints: edge i is variable ``first_var + i``; XOR at v equals charge(v)."""
    deg = g.degrees()
    if max(deg, default=0) > MAX_TSEITIN_DEGREE:
        raise ValueError(f"vertex degree exceeds {MAX_TSEITIN_DEGREE}")
    clauses = []
    for v in range(g.vertex_count):
        edge_vars = [first_var + i for i in g.incident_edges(v)]
        if not edge_vars:
            if g.charges[v]:
                raise DegenerateCoreError(f"isolated vertex {v} has charge 1")
            continue
        for bits in itertools.product((0, 1), repeat=len(edge_vars)):
            if sum(bits) % 2 != g.charges[v]:
                # rule out this pattern: each literal is false under it
                clauses.append([-x if b else x for x, b in zip(edge_vars, bits)])
    return Formula(clauses)


def k4_core(first_var: int = 1) -> Formula:
    """Tseitin formula of K4 with one charged vertex: 6 variables, 16 clauses, unsatisfiable."""
    return tseitin(complete_graph(4), first_var)


def attach_literal(lit: int, f: Formula) -> Formula:
    """The ``x v E`` operator: add ``lit`` to every clause of ``f``."""
    if var(lit) in f.variables():
        raise CNFError(f"x{var(lit)} already occurs in the formula")
    return Formula(c | {lit} for c in f.clauses)


def chain_formula(guard: int, M: int) -> Formula:
    """guard v H, where H forces x_2 = ... = x_M through a cyclic implication chain."""
    if M < 3:
        raise ValueError("chain needs M >= 3")
    if 2 <= var(guard) <= M:
        raise CNFError("guard variable collides with the chain variables")
    clauses = [[guard, i, -(i + 1)] for i in range(2, M)]
    clauses.append([guard, M, -2])
    return Formula(clauses)


@dataclass(frozen=True)
class FamilyParams:
    M: int
    core: Formula

    def check(self, min_M: int, divisible_by: int = 1) -> None:
        if self.M < min_M:
            raise ValueError(f"M must be >= {min_M}")
        if self.M % divisible_by:
            raise ValueError(f"M must be divisible by {divisible_by}")
        low = [v for v in self.core.variables() if v <= self.M]
        if low:
            raise ValueError(f"core uses scaffold variables {low}")


def guc_hard(p: FamilyParams) -> Formula:
    """(x1 v core) together with (~x1 v chain over x2..xM)."""
    p.check(min_M=4)
    return attach_literal(1, p.core) | chain_formula(-1, p.M)


def rguc_cluster(a: int, b: int, c: int) -> list[list[int]]:
    return [[a, -b, -c], [b, -c, -a], [c, -a, -b]]


def rguc_hard(p: FamilyParams) -> Formula:
    """(x_i v core) for every i <= M plus one symmetric 3-clause cluster per triple."""
    p.check(min_M=3, divisible_by=3)
    out = Formula()
    for i in range(1, p.M + 1):
        out = out | attach_literal(i, p.core)
    clusters = []
    for j in range(0, p.M, 3):
        clusters.extend(rguc_cluster(j + 1, j + 2, j + 3))
    return out | Formula(clusters)
