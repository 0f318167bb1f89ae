#!/usr/bin/env python3
"""
Test Sequences and Sequence Spaces

Evaluation, supports and exceedance sets of sequences, ideal limits, the
c00/c0/c/ℓ∞ classification and the indicator classification.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, seed
from hypothesis import strategies as st

# Add parent directory to path to allow imports
sys.path.insert(0, str(Path(__file__).resolve().parent.parent.parent))

from omega_ideals.ideals.families import DensityZero, Fin
from omega_ideals.ideals.verdicts import IN, OUT
from omega_ideals.sequences.seq import (
    FiniteSupport, HorizonParams, Named, OnSet, Overlay, Scaled, evaluate,
    exceedance_set, indicator_seq, seq_from_json, support_prefix,
)
from omega_ideals.sequences.spaces import (
    classify_indicator, classify_space, ideal_limit_estimate, indicator_space,
)
from omega_ideals.sets.setexpr import ArithProg, Complement, Finite, RuleSparse
from omega_ideals.utils.errors import InvalidSpec

PARAMS = HorizonParams(N=2000, rows=100)

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=12)


def test_evaluate_examples():
    assert evaluate(Named("powersOfTwo"), 5) == 32
    assert evaluate(FiniteSupport(((3, Fraction(7, 2)),)), 4) == 0
    assert evaluate(Overlay(Named("constant", 1), FiniteSupport(((0, 5),))), 0) == 5
    assert evaluate(Scaled(Fraction(-1, 2), Named("identity")), 6) == -3


def test_support_prefix_examples():
    assert support_prefix(FiniteSupport(((1, 2), (4, -1))), 10) == Finite((1, 4))
    assert support_prefix(Named("constant", 0), 100) == Finite(())
    assert support_prefix(Overlay(Named("constant", 0), FiniteSupport(((2, 1), (9, 1)))), 5) == Finite((2,))


def test_finite_support_table_is_shared_and_read_only():
    x = FiniteSupport(((1, 2), (4, -1)))
    assert x.as_dict() is x.as_dict()
    assert dict(x.as_dict()) == {1: 2, 4: -1}
    with pytest.raises(TypeError):
        x.as_dict()[1] = 5
    assert x.at(1) == 2 and x.at(3) == 0
    assert x == FiniteSupport.of([(4, -1), (1, 2), (7, 0)])


@seed(1)
@given(
    table=st.dictionaries(st.integers(min_value=0, max_value=50), rationals, max_size=12),
    eta=rationals,
    eps=st.fractions(min_value=0, max_value=3, max_denominator=12),
)
def test_finite_support_exceedance_matches_values(table, eta, eps):
    x = FiniteSupport.of(table.items())
    exceedance = exceedance_set(x, eta, eps)
    assert all(exceedance.contains(n) == (abs(x.at(n) - eta) > eps) for n in range(80))


@seed(1)
@given(
    rule=st.sampled_from(["harmonic", "identity", "powersOfTwo"]),
    eta=rationals,
    eps=st.fractions(min_value=0, max_value=3, max_denominator=12),
)
def test_named_exceedance_matches_values(rule, eta, eps):
    x = Named(rule)
    exceedance = exceedance_set(x, eta, eps)
    assert all(exceedance.contains(n) == (abs(x.at(n) - eta) > eps) for n in range(40))


def test_ideal_limit_estimate_examples():
    on_squares = OnSet(RuleSparse("squares"), Named("constant", 1))
    squares = ideal_limit_estimate(DensityZero(), on_squares, 0, Fraction(1, 2), PARAMS)
    assert squares.verdict == IN
    assert squares.eta == 0

    assert ideal_limit_estimate(Fin(), Named("harmonic"), 0, Fraction(1, 10), PARAMS).verdict == IN
    evens = indicator_seq(ArithProg(0, 2))
    assert ideal_limit_estimate(DensityZero(), evens, 0, Fraction(1, 2), PARAMS).verdict == OUT


def test_ideal_limit_estimate_needs_positive_tolerance():
    with pytest.raises(InvalidSpec):
        ideal_limit_estimate(Fin(), Named("harmonic"), 0, 0, PARAMS)


def test_classify_space_examples():
    identity_on_squares = OnSet(RuleSparse("squares"), Named("identity"))
    report = classify_space(DensityZero(), identity_on_squares, PARAMS)
    assert report.c00.verdict == IN
    assert report.linf.verdict == IN

    assert classify_space(Fin(), Named("powersOfTwo"), PARAMS).linf.verdict == OUT

    constant = classify_space(Fin(), Named("constant", 3), PARAMS)
    assert constant.c.verdict == IN
    assert constant.c.eta == 3
    assert constant.c0.verdict == OUT


def test_space_flags_respect_inclusions():
    for x in (Named("harmonic"), Named("unit", k=4), indicator_seq(ArithProg(0, 3)),
              Overlay(Named("constant", 2), FiniteSupport(((1, -7),)))):
        flags = classify_space(DensityZero(), x, PARAMS).flags
        order = ["c00", "c0", "c", "linf"]
        for i, name in enumerate(order):
            if flags[name].verdict == IN:
                assert all(flags[weaker].verdict == IN for weaker in order[i + 1:])
            if flags[name].verdict == OUT:
                assert all(flags[stronger].verdict == OUT for stronger in order[:i])


def test_classify_indicator_examples():
    squares = classify_indicator(DensityZero(), RuleSparse("squares"), PARAMS)
    assert (squares.verdict, squares.eta) == ("Convergent", 0)
    assert classify_indicator(DensityZero(), ArithProg(0, 2), PARAMS).verdict == "NotConvergent"
    cofinite = classify_indicator(Fin(), Complement(Finite((0, 1, 2))), PARAMS)
    assert (cofinite.verdict, cofinite.eta) == ("Convergent", 1)


@pytest.mark.parametrize("s, eta", [
    (RuleSparse("squares"), Fraction(0)),
    (ArithProg(0, 2), None),
    (Complement(Finite((0, 1, 2))), Fraction(1)),
])
def test_indicator_classification_matches_space_classification(s, eta):
    indicator = classify_indicator(DensityZero(), s, PARAMS)
    space = indicator_space(DensityZero(), s, PARAMS)
    assert indicator.eta == eta
    if eta is None:
        assert space.c.verdict == OUT
    else:
        assert space.c.verdict == IN
        assert space.c.eta == eta


def test_horizon_params_from_env(monkeypatch):
    monkeypatch.setenv("OMEGA_IDEALS_N", "5000")
    monkeypatch.setenv("OMEGA_IDEALS_EPSILON", "1/50")
    params = HorizonParams.from_env({"rows": 20})
    assert (params.N, params.rows, params.epsilon) == (5000, 20, Fraction(1, 50))
    assert HorizonParams(N=10, rows=5).sample_points() == [2, 4, 6, 8, 10]


def test_horizon_params_are_validated(monkeypatch):
    with pytest.raises(InvalidSpec):
        HorizonParams(N=10, rows=20)
    with pytest.raises(InvalidSpec):
        HorizonParams(epsilon=0)
    monkeypatch.setenv("OMEGA_IDEALS_EPSILON", "tiny")
    with pytest.raises(InvalidSpec):
        HorizonParams.from_env()


def test_sequence_json_decoding():
    doc = {"kind": "overlay", "base": {"kind": "named", "rule": "constant", "c": "1/3"},
           "patch": [[2, "5"], [7, "-1/2"]]}
    x = seq_from_json(doc)
    assert x.at(2) == 5
    assert x.at(3) == Fraction(1, 3)
    assert seq_from_json(x.to_json()) == x
    with pytest.raises(InvalidSpec):
        seq_from_json({"kind": "finiteSupport", "entries": [[3, "1"], [1, "2"]]})
    with pytest.raises(InvalidSpec):
        seq_from_json({"kind": "named", "rule": "primes"})
