#!/usr/bin/env python3
"""
Matrix Transforms

Evaluation of Ax, the seminorms p_n(x) = |x(n)| and
q_n(x) = sup_m |Σ_{k<=m} a_{n,k} x(k)|, and horizon membership in the
summability domain d_A and in c_A(I) = {x ∈ d_A : Ax ∈ c(I)}.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .matrices import Cesaro, Identity, ExplicitRows, check_regularity
from ..ideals.membership import density_trace
from ..ideals.tallness import is_tall, tall_subset_witness
from ..ideals.verdicts import TriState, TALL, IN, OUT
from ..sequences.seq import (
    HorizonParams, Named, OnSet, as_finite_support, indicator_seq,
)
from ..sequences.spaces import classify_space
from ..sets.setexpr import ArithProg, Finite, Nu2Level, OMEGA
from ..utils.errors import (
    DomainError, NotTall, InsufficientHorizon, UnsupportedFamily,
)

# Configure module logger
logger = logging.getLogger(__name__)

# Terms summed for a row with infinite support before the series is judged
TRANSFORM_WINDOW = 256


def _is_constant(x):
    return isinstance(x, Named) and x.rule == "constant"


def _cesaro_row(a, n):
    if isinstance(a, Cesaro):
        return True
    return isinstance(a, ExplicitRows) and a.tail == "cesaroTail" and n >= a.table_rows


def _window_partials(a, x, n, params):
    """Partial sums of row n over TRANSFORM_WINDOW terms, certified to settle within epsilon."""
    partials, total = [], Fraction(0)
    for k, entry in a.row_entries(n, n + TRANSFORM_WINDOW):
        total += entry * x.at(k)
        partials.append(total)
    tail = partials[-(len(partials) // 4 or 1):]
    if max(tail) - min(tail) > params.epsilon:
        raise DomainError(
            f"Row {n} of {a.describe()} applied to {x.describe()} does not settle "
            f"within {params.epsilon} over {TRANSFORM_WINDOW} terms")
    return partials


def _row_value(a, x, n, params, finite=None):
    bound = a.row_support_bound(n)
    if bound is not None:
        return sum((entry * x.at(k) for k, entry in a.row_entries(n)), Fraction(0))
    if finite is not None:
        return sum((a.entry(n, k) * v for k, v in finite.entries), Fraction(0))
    return _window_partials(a, x, n, params)[-1]


def transform_prefix(a, x, rows, params=None):
    """
    First ``rows`` terms of Ax.

    Args:
        a (MatrixSpec): The matrix
        x (Seq): The sequence
        rows (int): Number of terms
        params (HorizonParams, optional): Horizon parameters

    Returns:
        list: (Ax)(n) for n < rows, exact when every row is finitely supported

    Raises:
        DomainError: If an infinite row series cannot be certified convergent
    """
    params = params or HorizonParams()
    if isinstance(a, Identity):
        return [x.at(n) for n in range(rows)]

    finite = as_finite_support(x)
    values = []
    running, summed_to = Fraction(0), -1
    for n in range(rows):
        if _cesaro_row(a, n):
            while summed_to < n:
                summed_to += 1
                running += x.at(summed_to)
            values.append(running / (n + 1))
        else:
            values.append(_row_value(a, x, n, params, finite))
    return values


def eval_seminorms(a, x, n, params=None):
    """
    The seminorms p_n(x) and q_n(x) of the summability domain.

    Returns:
        tuple: (p, q, stabilized) where stabilized says the running maximum of
        the partial sums stayed constant over the last quarter

    Raises:
        DomainError: As in transform_prefix
    """
    params = params or HorizonParams()
    p = abs(x.at(n))
    bound = a.row_support_bound(n)
    if bound is not None:
        partials, total = [], Fraction(0)
        for k in range(min(bound, params.N) + 1):
            entry = a.entry(n, k)
            if entry:
                total += entry * x.at(k)
            partials.append(total)
    else:
        partials = _window_partials(a, x, n, params)
    running, best = [], Fraction(0)
    for value in partials:
        best = max(best, abs(value))
        running.append(best)
    tail = running[-(len(running) // 4 or 1):]
    return p, best, tail[0] == tail[-1]


def _candidates(values):
    last = values[-1]
    return sorted({Fraction(0), Fraction(1), last.limit_denominator(1000)})


def cA_membership_estimate(a, ideal, x, params=None):
    """
    Decide x ∈ c_A(I) at horizon.

    The identity matrix is handled exactly through classify_space. Otherwise y
    = Ax is computed on params.rows rows and accepted with limit eta when
    |y(n) - eta| <= epsilon on a last quarter whose spread is at most
    epsilon / 2, or when the rows that miss eta have density trace below
    epsilon.

    Returns:
        TriState: In (with eta), Out when x is outside d_A at horizon, or Unknown with the y trace
    """
    params = params or HorizonParams()
    if isinstance(a, Identity):
        return classify_space(ideal, x, params).c.annotate("Ax = x")
    if _is_constant(x) and check_regularity(a, params).verdict == IN:
        return TriState.inside(f"regular matrix maps constant {x.c} to itself", eta=x.c)

    try:
        values = transform_prefix(a, x, params.rows, params)
    except DomainError as e:
        logger.info(f"{x.describe()} outside d_A: {e}")
        return TriState.outside(f"x ∉ d_A at horizon: {e}")

    trace = tuple(enumerate(values))
    quarter = len(values) - max(1, len(values) // 4)
    settled = max(values[quarter:]) - min(values[quarter:]) <= params.epsilon / 2
    for eta in _candidates(values) if settled else ():
        if all(abs(v - eta) <= params.epsilon for v in values[quarter:]):
            return TriState.inside(
                f"|Ax(n) - {eta}| <= {params.epsilon} on rows {quarter}..{len(values) - 1}", eta=eta)
    for eta in _candidates(values):
        misses = Finite(tuple(n for n, v in enumerate(values) if abs(v - eta) > params.epsilon))
        try:
            densities = density_trace(ideal, misses, params.rows)
        except UnsupportedFamily:
            break
        if all(d <= params.epsilon for _, d in densities[quarter:]):
            return TriState.inside(
                f"rows with |Ax(n) - {eta}| > {params.epsilon} have density trace <= {params.epsilon}",
                eta=eta)
    return TriState.unknown(trace)


@dataclass(frozen=True)
class TallSubspaceReport:
    verdict: str
    samples: Tuple[dict, ...] = ()

    def to_json(self):
        return {"verdict": self.verdict, "samples": list(self.samples)}


SAMPLE_BASES = (OMEGA, ArithProg(0, 2), ArithProg(1, 2), Nu2Level(1))


def check_tall_subspace(a, ideal, j_ideal, params=None):
    """
    Sample c00(J) ⊆ c_A(I) for a proposed tall ideal J.

    Elements of c00(J) are built on tall-subset witnesses of J inside a few
    base sets (indicator and identity on the witness) and each one is run
    through cA_membership_estimate.

    Returns:
        TallSubspaceReport: Out if a sample fails, In if every sample passes, Unknown otherwise

    Raises:
        NotTall: If J is not Tall
    """
    params = params or HorizonParams()
    report = is_tall(j_ideal, params)
    if report.verdict != TALL:
        raise NotTall(f"{j_ideal.describe()} is {report.verdict}")

    samples, verdicts = [], []
    for base in SAMPLE_BASES:
        try:
            witness = tall_subset_witness(j_ideal, base, params)
        except InsufficientHorizon as e:
            logger.warning(f"No tall subset of {base.describe()} at horizon: {e}")
            samples.append({"base": base.describe(), "skipped": str(e)})
            continue
        for label, x in (("indicator", indicator_seq(witness)),
                         ("identity", OnSet(witness, Named("identity")))):
            verdict = cA_membership_estimate(a, ideal, x, params)
            verdicts.append(verdict.verdict)
            samples.append({"base": base.describe(), "sequence": label,
                            "support": len(witness.elems), "result": verdict.to_json()})
    if OUT in verdicts:
        overall = OUT
    elif verdicts and all(v == IN for v in verdicts):
        overall = IN
    else:
        overall = "Unknown"
    logger.info(f"Tall subspace check of {j_ideal.describe()} in c_A({ideal.describe()}): {overall}")
    return TallSubspaceReport(overall, tuple(samples))
