#!/usr/bin/env python3
"""
Test Summability

Regularity and Pringsheim estimates of the matrix variants, transforms and
seminorms against brute-force oracles, and c_A(I) membership at horizon.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

# Add parent directory to path to allow imports
sys.path.insert(0, str(Path(__file__).resolve().parent.parent.parent))

from omega_ideals.ideals.families import DensityZero, Fin, MatrixIdeal
from omega_ideals.ideals.membership import member
from omega_ideals.ideals.verdicts import IN, OUT, UNKNOWN
from omega_ideals.sequences.seq import FiniteSupport, HorizonParams, Named, indicator_seq
from omega_ideals.sets.setexpr import ArithProg, RuleSparse
from omega_ideals.summability.matrices import (
    Cesaro, ExplicitRows, Identity, ShiftedGeometric, check_regularity, matrix_from_json,
    pringsheim_tau, pringsheim_zero_estimate,
)
from omega_ideals.summability.transforms import (
    cA_membership_estimate, check_tall_subspace, eval_seminorms, transform_prefix,
)
from omega_ideals.utils.errors import InvalidSpec, NotTall

PARAMS = HorizonParams(N=2000, rows=400)

STOCHASTIC = ExplicitRows(tuple(tuple(Fraction(1, 20) for _ in range(20)) for _ in range(20)), "repeatLast")

finite_sequences = st.dictionaries(
    st.integers(min_value=0, max_value=60),
    st.fractions(min_value=-10, max_value=10, max_denominator=16),
    max_size=15,
)


def test_regularity_examples():
    assert check_regularity(Cesaro(), PARAMS).verdict == IN
    assert check_regularity(Identity(), PARAMS).verdict == IN
    stochastic = check_regularity(STOCHASTIC, PARAMS)
    assert stochastic.verdict == UNKNOWN
    assert stochastic.trace


def test_transform_prefix_examples():
    assert transform_prefix(Cesaro(), Named("constant", 1), 3, PARAMS) == [1, 1, 1]
    assert transform_prefix(Cesaro(), FiniteSupport(((0, 1),)), 3, PARAMS) == [1, Fraction(1, 2), Fraction(1, 3)]
    assert transform_prefix(Identity(), Named("identity"), 4, PARAMS) == [0, 1, 2, 3]


def test_explicit_rows_are_applied_before_the_cesaro_tail():
    a = ExplicitRows(((Fraction(1, 2),), (0, 3)), "cesaroTail")
    assert check_regularity(a, PARAMS).verdict == IN
    assert transform_prefix(a, Named("constant", 1), 4, PARAMS) == [Fraction(1, 2), 3, 1, 1]
    spike = FiniteSupport(((1, 2),))
    assert transform_prefix(a, spike, 4, PARAMS) == [0, 6, Fraction(2, 3), Fraction(1, 2)]
    assert eval_seminorms(a, Named("constant", 1), 0, PARAMS)[:2] == (1, Fraction(1, 2))
    assert eval_seminorms(a, spike, 1, PARAMS)[:2] == (2, 6)
    # the limit only sees the Cesàro rows
    assert cA_membership_estimate(a, Fin(), Named("constant", 1), PARAMS).eta == 1


@seed(1)
@given(table=finite_sequences)
@settings(max_examples=50)
def test_cesaro_transform_matches_prefix_averages(table):
    x = FiniteSupport.of(table.items())
    values = transform_prefix(Cesaro(), x, 70, PARAMS)
    for n, value in enumerate(values):
        assert value == sum((x.at(k) for k in range(n + 1)), Fraction(0)) / (n + 1)


@pytest.mark.parametrize("a", [Cesaro(), Identity(), ShiftedGeometric()], ids=lambda a: a.kind)
def test_regular_matrices_preserve_constants(a):
    values = transform_prefix(a, Named("constant", Fraction(5, 3)), 50, PARAMS)
    assert all(abs(v - Fraction(5, 3)) <= PARAMS.epsilon for v in values[-10:])


def test_shifted_geometric_rows_are_summed_over_a_window():
    values = transform_prefix(ShiftedGeometric(), FiniteSupport(((3, 8),)), 5, PARAMS)
    assert values == [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4), Fraction(0)]


def test_pringsheim_examples():
    cesaro = pringsheim_zero_estimate(Cesaro(), PARAMS)
    assert cesaro.verdict == IN
    assert all(tau * (n0 + 1) == 1 for n0, tau in cesaro.trace)

    identity = pringsheim_zero_estimate(Identity(), PARAMS)
    assert identity.verdict == OUT
    assert "delta = 1" in identity.certificate

    stochastic = pringsheim_zero_estimate(STOCHASTIC, PARAMS)
    assert stochastic.verdict == UNKNOWN
    assert stochastic.trace


def test_pringsheim_tau_of_a_repeated_row():
    assert pringsheim_tau(STOCHASTIC, 0, 100) == Fraction(1, 20)
    assert pringsheim_tau(STOCHASTIC, 20, 100) == 0


def test_seminorm_examples():
    assert eval_seminorms(Cesaro(), Named("constant", 1), 2, PARAMS)[:2] == (1, 1)
    assert eval_seminorms(Cesaro(), FiniteSupport(((0, 1),)), 1, PARAMS)[:2] == (0, Fraction(1, 2))
    assert eval_seminorms(Identity(), Named("powersOfTwo"), 3, PARAMS)[:2] == (8, 8)


@seed(1)
@given(table=finite_sequences, n=st.integers(min_value=0, max_value=60))
@settings(max_examples=50)
def test_q_seminorm_dominates_the_transform(table, n):
    x = FiniteSupport.of(table.items())
    _, q, _ = eval_seminorms(Cesaro(), x, n, PARAMS)
    assert q >= abs(transform_prefix(Cesaro(), x, n + 1, PARAMS)[n])


def test_cA_membership_examples():
    evens = cA_membership_estimate(Cesaro(), Fin(), indicator_seq(ArithProg(0, 2)), PARAMS)
    assert evens.verdict == IN
    assert evens.eta == Fraction(1, 2)

    squares = cA_membership_estimate(Identity(), DensityZero(), indicator_seq(RuleSparse("squares")), PARAMS)
    assert squares.verdict == IN
    assert squares.eta == 0

    small = HorizonParams(N=2000, rows=64)
    assert cA_membership_estimate(Cesaro(), Fin(), Named("powersOfTwo"), small).verdict != IN


def test_divergent_rows_are_outside_the_domain():
    verdict = cA_membership_estimate(ShiftedGeometric(), Fin(), Named("powersOfTwo"), PARAMS)
    assert verdict.verdict == OUT
    assert verdict.certificate.startswith("x ∉ d_A at horizon")


@pytest.mark.parametrize("s", [RuleSparse("squares"), RuleSparse("powersOfTwo"), ArithProg(0, 2), ArithProg(1, 3)],
                         ids=lambda s: s.describe())
def test_matrix_membership_agrees_with_cA(s):
    verdict = member(MatrixIdeal(Cesaro()), s, PARAMS).verdict
    estimate = cA_membership_estimate(Cesaro(), Fin(), indicator_seq(s), PARAMS)
    if verdict == OUT:
        assert not (estimate.verdict == IN and estimate.eta == 0)
    if verdict == IN:
        assert estimate.verdict != OUT
        assert estimate.verdict != IN or estimate.eta == 0


def test_tall_subspace_sampling():
    params = HorizonParams(N=2000, rows=400, epsilon=Fraction(1, 10))
    report = check_tall_subspace(Cesaro(), DensityZero(), DensityZero(), params)
    indicators = [sample for sample in report.samples if sample.get("sequence") == "indicator"]
    assert len(indicators) == 4
    assert all(sample["result"]["verdict"] == IN for sample in indicators)
    assert report.verdict in (IN, OUT, UNKNOWN)
    with pytest.raises(NotTall):
        check_tall_subspace(Cesaro(), DensityZero(), Fin(), params)


def test_matrix_json_decoding():
    assert matrix_from_json({"kind": "cesaro"}) == Cesaro()
    rows = matrix_from_json({"kind": "rows", "rows": [["1/2", "1/2"], ["1"]], "tail": "cesaroTail"})
    assert rows.entry(0, 1) == Fraction(1, 2)
    assert rows.entry(5, 2) == Fraction(1, 6)
    with pytest.raises(InvalidSpec):
        matrix_from_json({"kind": "rows", "rows": [["0", "0"]], "tail": "repeatLast"})
    with pytest.raises(InvalidSpec):
        matrix_from_json({"kind": "rows", "rows": [["-1"]]})
