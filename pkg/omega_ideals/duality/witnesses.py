#!/usr/bin/env python3
"""
Duality Witnesses

Constructive witnesses on the positive side: the dual pair (B, y) that makes
the pairing unbounded for a non-tall ideal, the boundedness check of that pair
against members of ℓ∞(I), and the counterexample to BK-domination.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .pairing import DualPair, pair
from ..ideals.families import Fin
from ..ideals.membership import member
from ..ideals.tallness import is_tall, tall_subset_report
from ..ideals.verdicts import IN, OUT, TALL
from ..sequences.seq import HorizonParams, Named, RampOn
from ..sets.setexpr import Finite, Nu2Level, RuleSparse, OMEGA, take
from ..utils.errors import (
    InconsistentDeclaration, InsufficientHorizon, InvalidSpec, NotApplicable,
    NotInfinite,
)

# Configure module logger
logger = logging.getLogger(__name__)

# Sets tried, in order, as an infinite member of the ideal
BK_CANDIDATES = (
    RuleSparse("squares"), RuleSparse("powersOfTwo"), RuleSparse("factorials"), Nu2Level(0),
)

DOMINATION_LADDER = tuple(1 << j for j in range(21))

# Search limit for elements of a symbolic S beyond the horizon
BEYOND_HORIZON = 1 << 64


def positive_witness(s, depth, params=None):
    """
    The pair B = {Σ_{i<=n} 2^-i e_{s_i}}, y = 2^n over an infinite set s.

    Args:
        s (SetExpr): Infinite set, typically a non-tall witness
        depth (int): Index of the last generated element
        params (HorizonParams, optional): Horizon parameters (N bounds the enumeration)

    Returns:
        DualPair: The family and y, with pair(B_n, y) >= n + 1

    Raises:
        NotInfinite: If s is finite
        InsufficientHorizon: If fewer than depth + 1 elements lie below N
    """
    params = params or HorizonParams()
    s = s.simplify()
    if isinstance(s, Finite) or s.finiteness() is True:
        raise NotInfinite(f"{s.describe()} is finite")
    points = take(s, depth + 1, params.N)
    if len(points) < depth + 1:
        raise InsufficientHorizon(f"Only {len(points)} elements of {s.describe()} below N={params.N}")
    dual = DualPair("positiveWitness", Named("powersOfTwo"), points=tuple(points), source=s)
    logger.info(f"Positive witness over {s.describe()} with {len(points)} points")
    return dual


def witness_growth(dual):
    """
    Pairings pair(B_n, y) for every generated n, checked against n + 1.

    Returns:
        list: Pairs (n, pairing)
    """
    growth = [(n, dual.pairing(n)) for n in range(dual.size)]
    for n, value in growth:
        assert value >= n + 1, f"pairing {value} of B_{n} below {n + 1}"
    return growth


@dataclass(frozen=True)
class BoundednessReport:
    passes: bool
    bound: Fraction
    max_pairing: Fraction
    exceptional: Tuple[int, ...]
    pairings: Tuple[Tuple[int, Fraction], ...]

    def to_json(self):
        return {
            "passes": self.passes,
            "bound": self.bound,
            "maxPairing": self.max_pairing,
            "F": list(self.exceptional),
            "pairings": [[n, v] for n, v in self.pairings],
        }


def verify_boundedness(dual, v, ideal, M, a, depth, params=None):
    """
    Check sup_n |B_n·v| <= Σ_{i∈F} |v(i)| + 2M for F = a ∩ S.

    Args:
        dual (DualPair): A positive witness pair over S
        v (Seq): A sequence bounded by M off a
        ideal (IdealSpec): The ideal a is declared to belong to
        M (Fraction): The bound
        a (SetExpr): Declared exceedance set {|v| > M}
        depth (int): Last pairing index checked
        params (HorizonParams, optional): Horizon parameters

    Returns:
        BoundednessReport: Whether the computed maximum respects the bound

    Raises:
        InconsistentDeclaration: If a is outside the ideal or |v| > M at a sampled point outside a
    """
    params = params or HorizonParams()
    M = Fraction(M)
    if dual.kind != "positiveWitness":
        raise InvalidSpec("Boundedness is checked for positive witness pairs")
    if member(ideal, a, params).verdict == OUT:
        raise InconsistentDeclaration(f"Declared set {a.describe()} is outside {ideal.describe()}")
    depth = min(depth, dual.size - 1)
    points = dual.points[:depth + 1]
    sampled = sorted(set(points) | set(range(params.rows)))
    for n in sampled:
        if abs(v.at(n)) > M and not a.contains(n):
            raise InconsistentDeclaration(f"|v({n})| = {abs(v.at(n))} > {M} but {n} is not in the declared set")

    exceptional = tuple(s for s in points if a.contains(s))
    bound = sum((abs(v.at(s)) for s in exceptional), Fraction(0)) + 2 * M
    pairings = tuple((n, abs(pair(dual.element(n), v))) for n in range(depth + 1))
    top = max(value for _, value in pairings)
    report = BoundednessReport(top <= bound, bound, top, exceptional, pairings)
    logger.info(f"Boundedness of {v.describe()}: max {top} against bound {bound}")
    return report


def _infinite_member(ideal, params):
    for candidate in BK_CANDIDATES:
        verdict = member(ideal, candidate, params)
        if verdict.verdict == IN:
            return candidate, verdict.certificate
    if is_tall(ideal, params).verdict == TALL:
        continuation = tall_subset_report(ideal, OMEGA, params).continuation
        return continuation, f"greedy tall subset of ω ({continuation.schedule} thresholds)"
    raise NotApplicable(f"No infinite member of {ideal.describe()} found: domination by a single y may hold")


@dataclass(frozen=True)
class BkReport:
    x: RampOn
    support: object
    certificate: str
    ratios: Tuple[Tuple[int, Fraction], ...]
    refutations: Tuple[Tuple[int, int], ...]

    def to_json(self):
        return {
            "x": self.x.to_json(),
            "S": self.support.to_json(),
            "certificate": self.certificate,
            "ratios": [[n, r] for n, r in self.ratios],
            "refutations": [{"C": c, "n": n} for c, n in self.refutations],
        }


def bk_report(ideal, y, params=None):
    """
    Counterexample to domination: x ∈ c0(I) with x(n)/(|y(n)|+1) = n on S.

    Args:
        ideal (IdealSpec): Any ideal other than Fin
        y (Seq): The proposed dominating sequence
        params (HorizonParams, optional): Horizon parameters

    Returns:
        BkReport: x on the whole of S, the ratios on S ∩ [1, N] and, for each
        dyadic C up to 2^20, an n ∈ S (past the horizon if needed) with ratio n > C

    Raises:
        NotApplicable: For Fin, or when no infinite member is available
        InsufficientHorizon: If S has no positive element below N or no element above some C
    """
    params = params or HorizonParams()
    if isinstance(ideal, Fin):
        raise NotApplicable("For Fin the constant sequence 1 dominates every x in c0(Fin)")
    support, certificate = _infinite_member(ideal, params)
    x = RampOn(support, y)
    ratios = tuple((n, x.at(n) / (abs(y.at(n)) + 1)) for n in support.iter_prefix(params.N) if n >= 1)
    if not ratios:
        raise InsufficientHorizon(f"No positive element of {support.describe()} below N={params.N}")
    for n, ratio in ratios:
        assert ratio == n

    refutations = []
    for c in DOMINATION_LADDER:
        n = support.first_at_least(c + 1, BEYOND_HORIZON)
        if n is None:
            raise InsufficientHorizon(f"No element of {support.describe()} above {c}")
        assert x.at(n) > c * (abs(y.at(n)) + 1)
        refutations.append((c, n))
    logger.info(f"Domination counterexample on {support.describe()} ({certificate})")
    return BkReport(x, support, certificate, ratios, tuple(refutations))


def bk_counterexample(ideal, y, params=None):
    """The sequence x of ``bk_report``."""
    return bk_report(ideal, y, params).x
