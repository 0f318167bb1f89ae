#!/usr/bin/env python3
"""
Test Set Expressions

Membership, enumeration and counting of symbolic subsets of ω, checked
against brute-force indicator sums, plus the closed forms used by the
membership fast paths.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

# Add parent directory to path to allow imports
sys.path.insert(0, str(Path(__file__).resolve().parent.parent.parent))

from omega_ideals.sets.setexpr import (
    ArithProg, Complement, Finite, Intersect, Nu2Level, Range, RuleSparse, Union,
    OMEGA, EMPTY, count_prefix, enumerate_prefix, from_json, indicator, nu2, take, within,
)
from omega_ideals.utils.errors import InvalidSpec

CORPUS = (
    Finite(()),
    Finite((1, 4, 9, 200)),
    Range(5, 40),
    ArithProg(0, 2),
    ArithProg(1, 3),
    ArithProg(7, 5),
    RuleSparse("squares"),
    RuleSparse("powersOfTwo"),
    RuleSparse("factorials"),
    Nu2Level(0),
    Nu2Level(2),
    Union((Finite((2,)), ArithProg(0, 4))),
    Union((RuleSparse("squares"), RuleSparse("powersOfTwo"))),
    Intersect((ArithProg(1, 3), RuleSparse("squares"))),
    Intersect((ArithProg(0, 2), Complement(Nu2Level(1)))),
    Complement(RuleSparse("squares")),
    Complement(Finite((0, 1))),
    OMEGA,
)


def test_indicator_examples():
    assert indicator(ArithProg(0, 2), 7) is False
    assert indicator(Nu2Level(0), 5) is True
    assert indicator(Complement(Finite((0, 1))), 1) is False


def test_enumerate_prefix_examples():
    assert enumerate_prefix(RuleSparse("squares"), 10) == [0, 1, 4, 9]
    assert enumerate_prefix(ArithProg(1, 2), 6) == [1, 3, 5]
    assert enumerate_prefix(Union((Finite((2,)), ArithProg(0, 4))), 8) == [0, 2, 4, 8]


def test_count_prefix_examples():
    assert count_prefix(ArithProg(0, 2), 99) == 50
    assert count_prefix(Finite(()), 1000) == 0
    assert count_prefix(RuleSparse("powersOfTwo"), 64) == 7


@pytest.mark.parametrize("s", CORPUS, ids=lambda s: s.describe())
def test_count_prefix_matches_indicator_sum(s):
    N = 10_000
    members = [n for n in range(N + 1) if s.contains(n)]
    assert s.count_prefix(N) == len(members)
    assert list(s.iter_prefix(N)) == members


@seed(1)
@given(
    index=st.integers(min_value=0, max_value=len(CORPUS) - 1),
    m=st.integers(min_value=0, max_value=300),
    limit=st.integers(min_value=0, max_value=600),
)
def test_first_at_least_matches_scan(index, m, limit):
    s = CORPUS[index]
    expected = next((n for n in range(m, limit + 1) if s.contains(n)), None)
    assert s.first_at_least(m, limit) == expected


@seed(1)
@given(
    a=st.integers(min_value=0, max_value=50),
    d=st.integers(min_value=1, max_value=40),
    N=st.integers(min_value=0, max_value=5000),
)
def test_progression_count_tracks_density(a, d, N):
    if N < a:
        return
    assert abs(ArithProg(a, d).count_prefix(N) * d - N) <= d + a


@seed(1)
@given(
    first=st.integers(min_value=0, max_value=len(CORPUS) - 1),
    second=st.integers(min_value=0, max_value=len(CORPUS) - 1),
)
@settings(max_examples=60)
def test_simplify_preserves_membership(first, second):
    for s in (Union((CORPUS[first], CORPUS[second])),
              Intersect((CORPUS[first], CORPUS[second])),
              Complement(Complement(CORPUS[first]))):
        simplified = s.simplify()
        assert all(simplified.contains(n) == s.contains(n) for n in range(300))


def test_progression_intersections_have_closed_forms():
    assert Intersect((ArithProg(1, 2), ArithProg(0, 3))).simplify() == ArithProg(3, 6)
    assert Intersect((ArithProg(0, 2), ArithProg(1, 2))).simplify() == EMPTY
    assert Intersect((Nu2Level(1), Nu2Level(2))).simplify() == EMPTY
    assert Union((OMEGA, RuleSparse("squares"))).simplify() == OMEGA


def test_containment_of_progressions():
    assert within(ArithProg(4, 8), ArithProg(0, 2))
    assert within(ArithProg(3, 6), ArithProg(0, 3))
    assert not within(ArithProg(0, 2), ArithProg(0, 4))
    assert not within(ArithProg(1, 4), ArithProg(0, 2))
    assert not within(RuleSparse("squares"), ArithProg(0, 2))


def test_finiteness_of_sparse_intersections():
    # squares are 0 or 1 mod 4
    assert Intersect((RuleSparse("squares"), ArithProg(2, 4))).finiteness() is True
    # powers of two are never divisible by 3
    assert Intersect((RuleSparse("powersOfTwo"), ArithProg(0, 3))).finiteness() is True
    assert Intersect((RuleSparse("squares"), Nu2Level(1))).finiteness() is True
    assert Intersect((RuleSparse("squares"), Nu2Level(2))).finiteness() is False
    assert Intersect((RuleSparse("factorials"), ArithProg(0, 7))).finiteness() is False


def test_density_bounds_and_counting_exponents():
    assert Nu2Level(1).density_bounds()[:2] == (Fraction(1, 4), Fraction(1, 4))
    assert ArithProg(3, 5).density_bounds()[:2] == (Fraction(1, 5), Fraction(1, 5))
    assert Complement(ArithProg(0, 4)).density_bounds()[:2] == (Fraction(3, 4), Fraction(3, 4))
    assert RuleSparse("squares").counting_exponent()[0] == Fraction(1, 2)
    assert RuleSparse("powersOfTwo").counting_exponent()[0] == 0


def test_nu2_and_levels():
    assert [nu2(n) for n in (0, 1, 2, 12, 40)] == [0, 0, 1, 2, 3]
    assert enumerate_prefix(Nu2Level(0), 7) == [0, 1, 3, 5, 7]
    assert enumerate_prefix(Nu2Level(2), 40) == [4, 12, 20, 28, 36]


def test_take_stops_at_limit():
    assert take(RuleSparse("powersOfTwo"), 5, 100) == [1, 2, 4, 8, 16]
    assert take(RuleSparse("factorials"), 10, 130) == [1, 2, 6, 24, 120]
    assert take(EMPTY, 3, 100) == []


@pytest.mark.parametrize("s", CORPUS, ids=lambda s: s.describe())
def test_json_encoding_is_accepted_back(s):
    assert from_json(s.to_json()) == s


def test_invalid_descriptions_are_rejected():
    with pytest.raises(InvalidSpec):
        from_json({"kind": "bogus"})
    with pytest.raises(InvalidSpec):
        from_json({"kind": "ap", "a": 0, "d": 0})
    with pytest.raises(InvalidSpec):
        from_json({"kind": "sparse", "rule": "primes"})
    with pytest.raises(InvalidSpec):
        Finite((3, 1))
    with pytest.raises(InvalidSpec):
        Finite((-1,))
