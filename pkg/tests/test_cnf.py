import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from guclab.cnf import (
    CNFError,
    Formula,
    apply_assignment,
    clause_bucket,
    is_satisfying,
    make_assignment,
    make_clause,
    negate,
    pure_literals,
)
from guclab.generators import FamilyParams, complete_graph, cycle_graph, guc_hard, k4_core, tseitin

MAX_VAR = 8

literals = st.integers(1, MAX_VAR).flatmap(lambda v: st.sampled_from([v, -v]))


@st.composite
def clauses(draw, max_size=4):
    vs = draw(st.lists(st.integers(1, MAX_VAR), max_size=max_size, unique=True))
    return frozenset(v if draw(st.booleans()) else -v for v in vs)


formulas = st.lists(clauses(), max_size=10).map(Formula)


@st.composite
def assignments(draw):
    vs = draw(st.lists(st.integers(1, MAX_VAR), max_size=MAX_VAR, unique=True))
    return frozenset(v if draw(st.booleans()) else -v for v in vs)


def test_negate_involution():
    for l in (1, -1, 7, -42):
        assert negate(negate(l)) == l


def test_clause_rejects_complementary_pair_and_zero():
    with pytest.raises(CNFError):
        make_clause([1, -1])
    with pytest.raises(CNFError):
        make_clause([0, 2])
    with pytest.raises(CNFError):
        make_assignment([3, -3])


def test_set_semantics():
    f = Formula([[1, 2], [2, 1], [1, 2]])
    assert len(f) == 1
    assert Formula() != Formula([[]])
    assert Formula().is_empty and not Formula().contains_empty_clause
    assert Formula([[]]).contains_empty_clause


def test_apply_empty_clause():
    f = Formula([[1, 2], [-1]])
    assert apply_assignment(f, {1}) == Formula([[]])


def test_apply_satisfied():
    assert apply_assignment(Formula([[1, 2]]), {1}).is_empty


def test_apply_collapses_duplicates():
    f = Formula([[1, 3], [2, 3]])
    assert apply_assignment(f, {-1, -2}) == Formula([[3]])


def test_apply_on_guc_hard_by_definition():
    f = guc_hard(FamilyParams(4, tseitin(complete_graph(4), first_var=5)))
    got = apply_assignment(f, {-1})
    # recompute F[I] clause by clause from the definition
    expected = set()
    for c in f.clauses:
        if -1 in c:
            continue
        expected.add(c - {1})
    assert got.clauses == frozenset(expected)
    assert got == k4_core(5)


def test_apply_rejects_inconsistent():
    with pytest.raises(CNFError):
        apply_assignment(Formula([[1]]), {1, -1})


def test_pure_literals_examples():
    assert pure_literals(Formula([[1, 2], [1, -2]])) == {1}
    assert pure_literals(Formula()) == set()
    for g in (complete_graph(4), cycle_graph(5), complete_graph(5)):
        assert pure_literals(tseitin(g)) == set()


def test_clause_bucket_examples():
    f = Formula([[1], [1, 2]])
    assert clause_bucket(f, 1) == {frozenset([1])}
    assert f.min_nonempty_bucket() == 1
    with pytest.raises(ValueError):
        Formula().min_nonempty_bucket()


def test_clause_bucket_guc_hard_widths():
    f = guc_hard(FamilyParams(5, k4_core(6)))
    assert len(clause_bucket(f, 3)) == 4
    assert all(-1 in c for c in clause_bucket(f, 3))
    assert len(clause_bucket(f, 4)) == 16
    assert all(1 in c for c in clause_bucket(f, 4))
    after = apply_assignment(f, {2})
    assert clause_bucket(after, 2) == {frozenset({-1, 5})}


def test_is_satisfying_examples():
    assert is_satisfying(Formula([[1]]), {1})
    assert not is_satisfying(Formula([[1]]), {-1})


@given(formulas, assignments(), assignments())
def test_apply_composes(f, i, j):
    j = frozenset(l for l in j if abs(l) not in {abs(x) for x in i})
    assert apply_assignment(f, i | j) == apply_assignment(apply_assignment(f, i), j)


@given(formulas, assignments())
def test_apply_keeps_clause_invariant(f, i):
    for c in apply_assignment(f, i).clauses:
        assert not any(-l in c for l in c)
        assert not any(abs(l) in {abs(x) for x in i} for l in c)


@given(formulas)
def test_pure_literals_consistent(f):
    pl = pure_literals(f)
    assert not any(-l in pl for l in pl)
    lits = f.literals()
    assert all(l in lits and -l not in lits for l in pl)


@settings(max_examples=200)
@given(formulas, assignments())
def test_satisfying_hits_every_clause(f, i):
    if is_satisfying(f, i):
        assert all(c & i for c in f.clauses)
