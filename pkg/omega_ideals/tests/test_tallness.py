#!/usr/bin/env python3
"""
Test Tallness

Tallness decisions over the family catalog, non-tall witnesses, the greedy
tall-subset selection and the FK classification built on top of them.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

# Add parent directory to path to allow imports
sys.path.insert(0, str(Path(__file__).resolve().parent.parent.parent))

from omega_ideals.ideals.classify import (
    ADMITS, DOES_NOT_ADMIT, fk_classify, noninclusion_report, noninclusion_witness,
)
from omega_ideals.ideals.families import (
    BlockSpec, DensityZero, Fin, FubiniEmptyFin, Lacunary, MatrixIdeal, Restriction,
    Summable, WeightSpec,
)
from omega_ideals.ideals.membership import member
from omega_ideals.ideals.tallness import (
    GreedySubset, greedy_subset, is_tall, nontall_witness, singleton_bound, tall_subset_report,
    tall_subset_witness, threshold,
)
from omega_ideals.ideals.verdicts import IN, OUT, TALL, NOT_TALL, UNKNOWN
from omega_ideals.sequences.seq import HorizonParams, support_set
from omega_ideals.sequences.spaces import classify_space
from omega_ideals.sets.setexpr import ArithProg, Finite, Intersect, Nu2Level, RuleSparse, OMEGA
from omega_ideals.summability.matrices import Cesaro, ExplicitRows, Identity
from omega_ideals.utils.errors import NotApplicable, NotInfinite, NotTall

PARAMS = HorizonParams(N=10_000, rows=100)


def test_catalog_is_decided():
    cesaro = is_tall(MatrixIdeal(Cesaro()), PARAMS)
    assert cesaro.verdict == TALL
    assert all(value == Fraction(1, n + 1) for n, value in cesaro.trace)

    identity = is_tall(MatrixIdeal(Identity()), PARAMS)
    assert identity.verdict == NOT_TALL
    assert identity.witness == OMEGA

    assert is_tall(Summable(WeightSpec("harmonic")), PARAMS).verdict == TALL
    constant = is_tall(Summable(WeightSpec("constant", c=1)), PARAMS)
    assert constant.verdict == NOT_TALL
    assert constant.witness == OMEGA

    assert is_tall(Lacunary(BlockSpec("linear")), PARAMS).verdict == TALL

    fubini = is_tall(FubiniEmptyFin(), PARAMS)
    assert fubini.verdict == NOT_TALL
    assert fubini.witness == Nu2Level(0)

    assert is_tall(DensityZero(), PARAMS).verdict == TALL
    assert is_tall(Fin(), PARAMS).witness == OMEGA


def test_nontall_witness_examples():
    table = WeightSpec("table", table=(1, Fraction(1, 2), 1, Fraction(1, 3), 1, Fraction(1, 4)),
                       tail=WeightSpec("alternating", c=1))
    assert nontall_witness(Summable(table), PARAMS) == ArithProg(0, 2)
    assert nontall_witness(FubiniEmptyFin(), PARAMS) == Nu2Level(0)
    assert nontall_witness(Fin(), PARAMS) == OMEGA
    with pytest.raises(NotApplicable):
        nontall_witness(DensityZero(), PARAMS)


def test_nontall_witness_sets_are_outside():
    for ideal in (Fin(), FubiniEmptyFin(), Summable(WeightSpec("constant", c=1)), MatrixIdeal(Identity())):
        witness = nontall_witness(ideal, PARAMS)
        assert member(ideal, witness, PARAMS).verdict == OUT


def test_constant_block_lacunary_is_not_tall():
    report = is_tall(Lacunary(BlockSpec("constant", L=4)), PARAMS)
    assert report.verdict == NOT_TALL
    assert report.delta == Fraction(1, 4)


def test_restrictions_inherit_tallness_only():
    assert is_tall(Restriction(DensityZero(), ArithProg(0, 2)), PARAMS).verdict == TALL
    assert is_tall(Restriction(Fin(), ArithProg(0, 2)), PARAMS).verdict == UNKNOWN


def test_repeated_row_matrix_is_undecided():
    rows = tuple(tuple(Fraction(1, 20) for _ in range(20)) for _ in range(20))
    report = is_tall(MatrixIdeal(ExplicitRows(rows, "repeatLast")), PARAMS)
    assert report.verdict == UNKNOWN
    assert report.notes


@pytest.mark.parametrize("ideal, s, bound", [
    (DensityZero(), ArithProg(0, 2), Fraction(1, 100)),
    (MatrixIdeal(Cesaro()), ArithProg(1, 2), Fraction(1, 100)),
    (DensityZero(), RuleSparse("squares"), Fraction(2, 100)),
])
def test_tall_subset_examples(ideal, s, bound):
    report = tall_subset_report(ideal, s, PARAMS)
    elems = report.witness.elems
    assert len(elems) >= 2
    assert all(s.contains(n) for n in elems)
    assert list(elems) == sorted(set(elems))
    assert report.trace[-1][1] < bound


def test_geometric_picks_on_evens():
    witness = tall_subset_witness(DensityZero(), ArithProg(0, 2), PARAMS)
    assert witness.elems == (0, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192)


def test_tall_subset_preconditions():
    with pytest.raises(NotTall):
        tall_subset_report(Fin(), OMEGA, PARAMS)
    with pytest.raises(NotInfinite):
        tall_subset_report(DensityZero(), Finite((1, 2, 3)), PARAMS)


def test_greedy_subset_is_prefix_stable():
    subset = GreedySubset(DensityZero(), ArithProg(1, 3))
    picks = list(subset.iter_prefix(5000))
    assert picks == greedy_subset(DensityZero(), ArithProg(1, 3).iter_prefix(5000))
    assert [n for n in range(200) if subset.contains(n)] == [n for n in picks if n < 200]
    assert picks[:5] == [1, 4, 7, 10, 16]
    assert subset.first_at_least(11, 5000) == 16
    assert Intersect((subset, ArithProg(1, 3))).simplify() == subset
    assert subset.finiteness() is False


def test_block_families_pick_distinct_blocks():
    lacunary = Lacunary(BlockSpec("linear"))
    picks = greedy_subset(lacunary, range(2000), "quadratic")
    blocks = [BlockSpec("linear").block_of(k) for k in picks]
    assert blocks == sorted(set(blocks))
    for j, k in enumerate(picks):
        assert singleton_bound(lacunary, k) <= threshold(j, "quadratic")


@seed(1)
@given(candidates=st.sets(st.integers(min_value=0, max_value=5000), min_size=1, max_size=80))
@settings(max_examples=50)
def test_greedy_respects_thresholds(candidates):
    ordered = sorted(candidates)
    for schedule in ("geometric", "quadratic"):
        picks = greedy_subset(DensityZero(), ordered, schedule)
        assert picks == sorted(set(picks))
        assert set(picks) <= candidates
        for j, k in enumerate(picks):
            assert Fraction(1, k + 1) <= threshold(j, schedule)


def test_fk_classification():
    fin = fk_classify(Fin(), PARAMS)
    assert fin.verdict == ADMITS
    assert fin.witness.points[:4] == (0, 1, 2, 3)
    assert all(value >= n + 1 for n, value in fin.growth)

    fubini = fk_classify(FubiniEmptyFin(), PARAMS)
    assert fubini.verdict == ADMITS
    assert all(Nu2Level(0).contains(p) for p in fubini.witness.points)

    density = fk_classify(DensityZero(), PARAMS)
    assert density.verdict == DOES_NOT_ADMIT
    assert list(density.demo.pairings) == list(range(1, PARAMS.steps + 1))


def test_noninclusion_density_zero_against_fin_like():
    nontall = Summable(WeightSpec("constant", c=1))
    report = noninclusion_report(DensityZero(), nontall, PARAMS)
    assert member(DensityZero(), support_set(report.x), PARAMS).verdict == IN
    assert member(nontall, report.nontall_set, PARAMS).verdict == OUT
    assert classify_space(DensityZero(), report.x, PARAMS).c00.verdict == IN
    assert classify_space(nontall, report.x, PARAMS).linf.verdict == OUT
    for M, small in report.exceptions:
        for n in report.subset.iter_prefix(2 * M):
            if n not in small:
                assert abs(report.x.at(n)) > M


def test_noninclusion_subset_continues_past_the_horizon():
    report = noninclusion_report(DensityZero(), Fin(), PARAMS)
    assert report.prefix.elems == tuple(report.subset.iter_prefix(PARAMS.N))
    beyond = report.subset.first_at_least(PARAMS.N + 1, 4 * PARAMS.N)
    assert beyond == 16383
    assert report.x.at(beyond) == beyond
    assert member(DensityZero(), report.subset, PARAMS).verdict == IN
    assert member(Fin(), report.subset, PARAMS).verdict == OUT


def test_noninclusion_shapes():
    x = noninclusion_witness(DensityZero(), Fin(), PARAMS)
    assert x.at(7) == 7
    assert x.at(5) == 0

    report = noninclusion_report(MatrixIdeal(Cesaro()), FubiniEmptyFin(), PARAMS)
    assert report.nontall_set == Nu2Level(0)
    assert all(Nu2Level(0).contains(n) for n in report.prefix.elems)
    assert member(MatrixIdeal(Cesaro()), report.subset, PARAMS).verdict == IN
    assert classify_space(FubiniEmptyFin(), report.x, PARAMS).linf.verdict == OUT
    with pytest.raises(NotApplicable):
        noninclusion_report(Fin(), Fin(), PARAMS)


def test_noninclusion_against_alternating_weights():
    alternating = Summable(WeightSpec("alternating", c=1))
    x = noninclusion_witness(DensityZero(), alternating, PARAMS)
    assert all(n % 2 == 0 for n in support_set(x).iter_prefix(1000))
    assert classify_space(alternating, x, PARAMS).linf.verdict == OUT
