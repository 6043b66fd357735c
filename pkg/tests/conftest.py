import itertools
import random

import pytest

from guclab.cnf import Formula
from guclab.generators import FamilyParams, guc_hard, k4_core, rguc_hard


def naive_models(f: Formula):
    """All satisfying total assignments by direct clause evaluation."""
    vs = f.variables()
    out = []
    for bits in itertools.product((False, True), repeat=len(vs)):
        a = {v if b else -v for v, b in zip(vs, bits)}
        if all(c & a for c in f.clauses):
            out.append(frozenset(a))
    return out


def random_cnf(rng: random.Random, n_vars: int, n_clauses: int, k: int = 3) -> Formula:
    clauses = []
    for _ in range(n_clauses):
        vs = rng.sample(range(1, n_vars + 1), min(k, n_vars))
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return Formula(clauses)


@pytest.fixture
def guc4():
    return guc_hard(FamilyParams(4, k4_core(5)))


@pytest.fixture
def rguc3():
    return rguc_hard(FamilyParams(3, k4_core(4)))
