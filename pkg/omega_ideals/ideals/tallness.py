#!/usr/bin/env python3
"""
Tallness

An ideal is tall when every infinite set has an infinite subset in the ideal.
For the families handled here this reduces to whether the largest singleton
mass (matrix row maxima, summable weights, block weights) tends to 0.
"""

import logging
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .families import (
    Fin, DensityZero, MatrixIdeal, Summable, GenDensity, Lacunary,
    FubiniEmptyFin, Restriction,
)
from .membership import unwrap, sampled_trace
from .verdicts import TallnessReport, TALL, NOT_TALL, UNKNOWN
from ..sets.setexpr import ArithProg, Finite, Nu2Level, SetExpr, OMEGA
from ..sequences.seq import HorizonParams
from ..summability.matrices import (
    Cesaro, Identity, ShiftedGeometric, pringsheim_zero_estimate,
)
from ..utils.errors import (
    NotApplicable, NotTall, NotInfinite, InsufficientHorizon, InvalidSpec,
)

# Configure module logger
logger = logging.getLogger(__name__)

SCHEDULES = ("geometric", "quadratic")


def threshold(j, schedule):
    """Singleton bound allowed for the j-th pick."""
    if schedule == "geometric":
        return Fraction(1, 1 << j)
    return Fraction(1, (j + 1) ** 2)


def _closed_trace(params, value):
    return tuple((n, value(n)) for n in params.sample_points(params.rows))


def _summable_witness(f):
    """{n : f(n) >= delta/2} for a weight with limsup delta > 0."""
    rule = f.governing
    half = rule.c / 2
    if rule.rule == "constant":
        if all(v >= half for v in f.table):
            return OMEGA
        return ArithProg(f.offset, 1)
    evens = [v for n, v in enumerate(f.table) if n % 2 == 0]
    if all(v >= half for v in evens):
        return ArithProg(0, 2)
    first = f.offset + (f.offset % 2)
    return ArithProg(first, 2)


def _matrix_tallness(a, params):
    if isinstance(a, Cesaro) or getattr(a, "tail", None) == "cesaroTail":
        return TallnessReport(
            TALL, "max entry of row n is 1/(n+1) -> 0",
            trace=_closed_trace(params, a.max_entry))
    if isinstance(a, (Identity, ShiftedGeometric)):
        delta = a.max_entry(0)
        return TallnessReport(
            NOT_TALL, f"max entry of row n is {delta} along the diagonal column n",
            witness=OMEGA, delta=delta)
    estimate = pringsheim_zero_estimate(a, params)
    notes = ("repeated row: argmax columns do not refresh, no distinct-column witness",)
    if estimate.verdict == "Out":
        notes += (estimate.certificate,)
    return TallnessReport(UNKNOWN, "row maxima trace", trace=estimate.trace, notes=notes)


def _gen_density_tallness(ideal, params):
    phi = ideal.phi
    if phi.weight_vanishes:
        last = phi.blocks.block_of(params.N)
        return TallnessReport(
            TALL, f"max singleton mass of block n is its weight -> 0 ({phi.describe()})",
            trace=tuple((n, phi.weight(n)) for n in params.sample_points(last)))
    delta = phi.weight(phi.blocks.first_tail_block())
    return TallnessReport(
        NOT_TALL, f"every singleton in a tail block has mass {delta}",
        witness=OMEGA, delta=delta)


def is_tall(ideal, params=None):
    """
    Decide tallness of an ideal.

    Args:
        ideal (IdealSpec): The ideal
        params (HorizonParams, optional): Horizon parameters

    Returns:
        TallnessReport: Tall with a decay trace, NotTall with a witness, or Unknown
    """
    params = params or HorizonParams()
    if isinstance(ideal, Restriction):
        base = is_tall(ideal.base, params)
        if base.verdict == TALL:
            report = TallnessReport(TALL, f"inherited from base: {base.criterion}", trace=base.trace)
        else:
            report = TallnessReport(
                UNKNOWN, "restriction of a non-tall base",
                notes=("non-tallness of restrictions is not decided",))
    elif isinstance(ideal, Fin):
        report = TallnessReport(NOT_TALL, "every infinite set is outside Fin", witness=OMEGA)
    elif isinstance(ideal, DensityZero):
        report = TallnessReport(
            TALL, "max entry of Cesàro row n is 1/(n+1) -> 0",
            trace=_closed_trace(params, lambda n: Fraction(1, n + 1)))
    elif isinstance(ideal, FubiniEmptyFin):
        report = TallnessReport(
            NOT_TALL, "infinite subsets of level 0 have an infinite level slice",
            witness=Nu2Level(0))
    elif isinstance(ideal, Summable):
        delta = ideal.f.limsup()
        if delta == 0:
            report = TallnessReport(
                TALL, f"weight tends to 0 ({ideal.f.describe()})",
                trace=_closed_trace(params, ideal.f.value))
        else:
            report = TallnessReport(
                NOT_TALL, f"limsup of the weight is {delta} > 0",
                witness=_summable_witness(ideal.f), delta=delta)
    elif isinstance(ideal, MatrixIdeal):
        report = _matrix_tallness(ideal.matrix, params)
    elif isinstance(ideal, (GenDensity, Lacunary)):
        report = _gen_density_tallness(unwrap(ideal), params)
    else:
        raise InvalidSpec(f"Not an ideal: {ideal!r}")
    logger.info(f"Tallness of {ideal.describe()}: {report.verdict} ({report.criterion})")
    return report


def nontall_witness(ideal, params=None):
    """
    An infinite set all of whose infinite subsets are outside the ideal.

    Raises:
        NotApplicable: If the ideal is Tall or undecided
    """
    report = is_tall(ideal, params)
    if report.verdict != NOT_TALL:
        raise NotApplicable(f"{ideal.describe()} is {report.verdict}, no non-tall witness")
    return report.witness


def singleton_bound(ideal, k):
    """Upper bound on the contribution of {k} to every row of the family functional."""
    ideal = unwrap(ideal)
    if isinstance(ideal, DensityZero):
        return Fraction(1, k + 1)
    if isinstance(ideal, MatrixIdeal):
        return ideal.matrix.column_sup(k)
    if isinstance(ideal, Summable):
        return ideal.f.value(k)
    if isinstance(ideal, GenDensity):
        return ideal.phi.weight(ideal.phi.blocks.block_of(k))
    raise NotApplicable(f"No singleton bound for {ideal.describe()}")


def greedy_subset(ideal, candidates, schedule="geometric"):
    """
    Pick an increasing subsequence of ``candidates`` with shrinking singleton mass.

    The j-th pick k must satisfy singleton_bound(k) <= threshold(j). For block
    families each pick must also lie in a later block than the previous one.

    Args:
        ideal (IdealSpec): A tall ideal (restrictions are resolved to their base)
        candidates (iterable): Increasing naturals
        schedule (str): "geometric" or "quadratic"

    Returns:
        list: The picks
    """
    if schedule not in SCHEDULES:
        raise InvalidSpec(f"Unknown schedule {schedule!r}, expected one of {SCHEDULES}")
    while isinstance(ideal, Restriction):
        ideal = ideal.base
    target = unwrap(ideal)
    blocks = target.phi.blocks if isinstance(target, GenDensity) else None
    picks, last_block = [], -1
    for k in candidates:
        if picks and k <= picks[-1]:
            continue
        if blocks is not None:
            block = blocks.block_of(k)
            if block <= last_block:
                continue
        if singleton_bound(target, k) <= threshold(len(picks), schedule):
            picks.append(k)
            if blocks is not None:
                last_block = block
    return picks


@dataclass(frozen=True)
class GreedySubset(SetExpr):
    """
    The greedy picks of ``greedy_subset`` from ``base``, continued past every horizon.

    The picks below N do not depend on candidates above N, so the set is
    enumerated by rerunning the greedy on a growing prefix of ``base``. It is
    infinite whenever ``base`` is, and belongs to ``ideal`` by construction:
    the j-th pick has singleton mass at most threshold(j), and block families
    get at most one pick per block.
    """

    ideal: object
    base: SetExpr
    schedule: str = "geometric"

    def __post_init__(self):
        if self.schedule not in SCHEDULES:
            raise InvalidSpec(f"Unknown schedule {self.schedule!r}, expected one of {SCHEDULES}")
        object.__setattr__(self, "_known", ([], -1))

    def _picks(self, N):
        picks, upto = self._known
        if N > upto:
            upto = max(N, 2 * upto + 1)
            picks = greedy_subset(self.ideal, self.base.iter_prefix(upto), self.schedule)
            object.__setattr__(self, "_known", (picks, upto))
        return picks[:bisect_right(picks, N)]

    def contains(self, n):
        if n < 0 or not self.base.contains(n):
            return False
        picks = self._picks(n)
        return bool(picks) and picks[-1] == n

    def iter_prefix(self, N):
        return iter(self._picks(N)) if N >= 0 else iter(())

    def first_at_least(self, m, limit):
        # widen the scanned prefix until a pick at least m shows up
        upto = max(m, 1)
        while True:
            bound = min(upto, limit)
            found = next((k for k in self._picks(bound) if k >= m), None)
            if found is not None or bound >= limit:
                return found
            upto *= 2

    def finiteness(self):
        return self.base.finiteness()

    def cofiniteness(self):
        return False

    def enclosing(self):
        return self.base

    def member_certificate(self, ideal):
        if ideal != self.ideal:
            return None
        return f"greedy subset with singleton masses under the {self.schedule} thresholds"

    def describe(self):
        return f"greedy {self.schedule} subset of {self.base.describe()} for {self.ideal.describe()}"

    def to_json(self):
        return {"kind": "greedySubset", "ideal": self.ideal.to_json(),
                "set": self.base.to_json(), "schedule": self.schedule}


@dataclass(frozen=True)
class SubsetWitness:
    witness: Finite
    schedule: str
    trace: Tuple[Tuple[int, Fraction], ...] = ()
    continuation: Optional[GreedySubset] = None

    def to_json(self):
        doc = {
            "witness": self.witness.to_json(),
            "schedule": self.schedule,
            "size": len(self.witness.elems),
            "trace": [[n, value] for n, value in self.trace],
        }
        if self.continuation is not None:
            doc["continuation"] = self.continuation.to_json()
        return doc


def tall_subset_report(ideal, s, params=None, schedule="geometric"):
    """
    Infinite subset of s whose family functional decays, with its trace.

    Args:
        ideal (IdealSpec): A tall ideal
        s (SetExpr): An infinite set
        params (HorizonParams, optional): Horizon parameters
        schedule (str): Greedy threshold schedule

    Returns:
        SubsetWitness: The selected prefix (elements <= N), its sampled trace and
        the GreedySubset continuing it

    Raises:
        NotTall: If the ideal is not Tall
        NotInfinite: If s is finite
        InsufficientHorizon: If fewer than two picks fit below N or the trace does not decay below epsilon
    """
    params = params or HorizonParams()
    report = is_tall(ideal, params)
    if report.verdict != TALL:
        raise NotTall(f"{ideal.describe()} is {report.verdict}")
    s = s.simplify()
    if isinstance(s, Finite) or s.finiteness() is True:
        raise NotInfinite(f"{s.describe()} is finite")

    picks = greedy_subset(ideal, s.iter_prefix(params.N), schedule)
    if len(picks) < 2:
        raise InsufficientHorizon(f"Only {len(picks)} picks from {s.describe()} below N={params.N}")
    witness = Finite(tuple(picks))
    trace = sampled_trace(ideal, witness, params)
    tail = trace[len(trace) - max(1, len(trace) // 4):]
    worst = max(value for _, value in tail)
    if worst > params.epsilon:
        raise InsufficientHorizon(
            f"Trace of the selected subset stays at {worst} > {params.epsilon} on the last quarter")
    logger.info(f"Selected {len(picks)} elements of {s.describe()} for {ideal.describe()} ({schedule})")
    return SubsetWitness(witness, schedule, tuple(trace), GreedySubset(ideal, s, schedule))


def tall_subset_witness(ideal, s, params=None, schedule="geometric"):
    """The selected subset of ``tall_subset_report`` as a Finite prefix."""
    return tall_subset_report(ideal, s, params, schedule).witness
