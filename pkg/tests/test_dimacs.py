import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from guclab.cnf import Formula
from guclab.dimacs import DimacsError, parse_dimacs, write_dimacs
from guclab.generators import FamilyParams, guc_hard, k4_core

from conftest import random_cnf


def test_parse_basic():
    assert parse_dimacs("p cnf 2 1\n1 -2 0") == Formula([[1, -2]])


def test_parse_comments_and_multiline_clause():
    text = "c hello\np cnf 3 2\n1 2\n-3 0 2 0\n"
    assert parse_dimacs(text) == Formula([[1, 2, -3], [2]])


def test_empty_clause_round_trip():
    f = Formula([[], [1]])
    assert parse_dimacs(write_dimacs(f)) == f


def test_write_is_canonical():
    f = Formula([[3, -1], [2, 1], [-2]])
    assert write_dimacs(f, ["note"]) == "c note\np cnf 3 3\n1 2 0\n-1 3 0\n-2 0\n"


@pytest.mark.parametrize(
    "text, line",
    [
        ("p cnf 2\n1 0\n", 1),
        ("p dnf 2 1\n1 0\n", 1),
        ("p cnf 2 1\n1 -1 0\n", 2),
        ("p cnf 2 2\n1 0\n2 -0 0\n", 3),
        ("c x\n1 2 0\n", 2),
        ("p cnf 2 1\n1 2\n", 2),
    ],
)
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(DimacsError) as info:
        parse_dimacs(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_missing_header():
    with pytest.raises(DimacsError):
        parse_dimacs("c only comments\n")


def test_round_trip_100_random():
    rng = random.Random(7)
    for _ in range(100):
        f = random_cnf(rng, rng.randint(1, 12), rng.randint(0, 40), k=rng.randint(1, 4))
        text = write_dimacs(f)
        assert parse_dimacs(text) == f
        assert write_dimacs(parse_dimacs(text)) == text


def test_round_trip_family():
    f = guc_hard(FamilyParams(6, k4_core(7)))
    assert parse_dimacs(write_dimacs(f)) == f


@given(st.lists(st.lists(st.integers(1, 9), unique=True, max_size=5), max_size=12), st.randoms())
def test_round_trip_property(var_lists, rnd):
    f = Formula([[v if rnd.random() < 0.5 else -v for v in vs] for vs in var_lists])
    assert parse_dimacs(write_dimacs(f)) == f
