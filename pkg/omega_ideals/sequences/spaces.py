#!/usr/bin/env python3
"""
Sequence Spaces

Ideal convergence and the four spaces c00(I) ⊆ c0(I) ⊆ c(I) ⊆ ℓ∞(I). Every
question is reduced to ideal membership of an exceedance set; the space flags
are then made consistent along the inclusions.
"""

import logging
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .seq import HorizonParams, exceedance_set, escape_set, support_set, indicator_seq
from ..ideals.membership import member, dual_member
from ..ideals.verdicts import TriState, IN, OUT, UNKNOWN
from ..utils.errors import InvalidSpec

# Configure module logger
logger = logging.getLogger(__name__)

EPSILON_LADDER = tuple(Fraction(1, 1 << j) for j in range(17))
BOUND_LADDER = tuple(Fraction(1 << j) for j in range(17))

SPACES = ("c00", "c0", "c", "linf")


def ideal_limit_estimate(ideal, x, eta, eps, params=None):
    """
    Decide whether {n : |x(n) - eta| > eps} belongs to the ideal.

    Args:
        ideal (IdealSpec): The ideal
        x (Seq): The sequence
        eta (Fraction): Candidate limit
        eps (Fraction): Tolerance, eps > 0
        params (HorizonParams, optional): Horizon parameters

    Returns:
        TriState: In (eta attached) when x is I-close to eta at tolerance eps

    Raises:
        InvalidSpec: If eps <= 0
    """
    eta, eps = Fraction(eta), Fraction(eps)
    if eps <= 0:
        raise InvalidSpec(f"Tolerance must be positive, got {eps}")
    exceedance = exceedance_set(x, eta, eps)
    verdict = member(ideal, exceedance, params).annotate(f"exceedance set {exceedance.describe()}")
    if verdict.verdict == IN:
        verdict = replace(verdict, eta=eta)
    return verdict


def _min_gap(values, eta):
    gaps = [abs(v - eta) for v in values if v != eta]
    return min(gaps) if gaps else Fraction(1)


def _persistent_values(x, params):
    """Values attained on at least a ``recurrence`` fraction of the sampled indices."""
    points = params.sample_points()
    counts = Counter(x.at(n) for n in points)
    needed = params.recurrence * len(points)
    return {v for v, count in counts.items() if count >= needed}


def _c00(ideal, x, params):
    return member(ideal, support_set(x), params).annotate("support")


def _c0(ideal, x, params, c00):
    if c00.verdict == IN:
        return TriState.inside("support belongs to the ideal", eta=Fraction(0))
    if x.limit() == 0:
        return TriState.inside("ordinary limit 0", eta=Fraction(0))
    values = x.values()
    if values is not None:
        eps = _min_gap(values, Fraction(0)) / 2
        return ideal_limit_estimate(ideal, x, 0, eps, params)
    passed = []
    for eps in EPSILON_LADDER:
        verdict = ideal_limit_estimate(ideal, x, 0, eps, params)
        if verdict.verdict == OUT:
            return verdict
        if verdict.verdict == UNKNOWN:
            return verdict
        passed.append(eps)
    return TriState.unknown(certificate=f"In for every tolerance down to {passed[-1]}")


def _c_candidates(x, params):
    candidates = {Fraction(0), Fraction(1)}
    values = x.values()
    if values is not None:
        candidates |= values
    if x.limit() is not None:
        candidates.add(x.limit())
    candidates |= _persistent_values(x, params)
    return sorted(candidates)


def _c(ideal, x, params, c0):
    if c0.verdict == IN:
        return TriState.inside(f"c0: {c0.certificate}", eta=Fraction(0))
    limit = x.limit()
    if limit is not None:
        return TriState.inside(f"ordinary limit {limit}", eta=limit)
    values = x.values()
    outs = []
    trace = ()
    for eta in _c_candidates(x, params):
        if values is not None:
            eps = _min_gap(values, eta) / 2
        else:
            eps = params.epsilon
        verdict = ideal_limit_estimate(ideal, x, eta, eps, params)
        if verdict.verdict == IN and values is not None:
            return verdict
        if verdict.verdict == OUT:
            outs.append(eta)
        elif verdict.trace and not trace:
            trace = verdict.trace
    if values is not None and all(v in outs for v in values):
        return TriState.outside(
            f"finitely many values {sorted(values)} and none is an ideal limit")
    return TriState.unknown(trace)


def _linf(ideal, x, params):
    values = x.values()
    if values is not None:
        bound = max(abs(v) for v in values)
        return TriState.inside(f"finitely many values, |x| <= {bound}")
    escape = escape_set(x)
    if escape is not None:
        verdict = member(ideal, escape, params)
        if verdict.verdict == OUT:
            return TriState.outside(f"|x| -> ∞ on {escape.describe()}: {verdict.certificate}")
    trace = ()
    for bound in BOUND_LADDER:
        verdict = member(ideal, exceedance_set(x, 0, bound), params)
        if verdict.verdict == IN:
            return verdict.annotate(f"{{|x| > {bound}}}")
        if verdict.trace and not trace:
            trace = verdict.trace
    return TriState.unknown(trace)


def _propagate(flags):
    """Fill Unknown flags from decided ones along c00 ⊆ c0 ⊆ c ⊆ ℓ∞."""
    order = list(SPACES)
    for i, name in enumerate(order):
        if flags[name].verdict == IN:
            for weaker in order[i + 1:]:
                if flags[weaker].verdict == UNKNOWN:
                    flags[weaker] = TriState.inside(f"contains {name}: {flags[name].certificate}",
                                                    eta=flags[name].eta)
        if flags[name].verdict == OUT:
            for stronger in order[:i]:
                if flags[stronger].verdict == UNKNOWN:
                    flags[stronger] = TriState.outside(f"contained in {name}: {flags[name].certificate}")
    return flags


@dataclass(frozen=True)
class SpaceReport:
    c00: TriState
    c0: TriState
    c: TriState
    linf: TriState

    @property
    def flags(self):
        return {"c00": self.c00, "c0": self.c0, "c": self.c, "linf": self.linf}

    def to_json(self):
        return {name: flag.to_json() for name, flag in self.flags.items()}


def classify_space(ideal, x, params=None):
    """
    Classify x into c00(I), c0(I), c(I) and ℓ∞(I).

    Args:
        ideal (IdealSpec): The ideal
        x (Seq): The sequence
        params (HorizonParams, optional): Horizon parameters

    Returns:
        SpaceReport: One tri-state flag per space
    """
    params = params or HorizonParams()
    c00 = _c00(ideal, x, params)
    c0 = _c0(ideal, x, params, c00)
    flags = {
        "c00": c00,
        "c0": c0,
        "c": _c(ideal, x, params, c0),
        "linf": _linf(ideal, x, params),
    }
    flags = _propagate(flags)
    logger.info(f"Spaces of {x.describe()} over {ideal.describe()}: "
                + ", ".join(f"{k}={v.verdict}" for k, v in flags.items()))
    return SpaceReport(**flags)


@dataclass(frozen=True)
class IndicatorReport:
    verdict: str
    eta: Optional[Fraction] = None
    member: Optional[TriState] = None
    dual: Optional[TriState] = None

    def to_json(self):
        doc = {"verdict": self.verdict, "member": self.member.to_json(), "dual": self.dual.to_json()}
        if self.eta is not None:
            doc["eta"] = self.eta
        return doc


def classify_indicator(ideal, a, params=None):
    """
    I-convergence of the indicator of a: to 0 when a ∈ I, to 1 when a ∈ I*.

    Returns:
        IndicatorReport: Convergent (with eta), NotConvergent or Unknown
    """
    inside = member(ideal, a, params)
    dual = dual_member(ideal, a, params)
    if inside.verdict == IN:
        report = IndicatorReport("Convergent", Fraction(0), inside, dual)
    elif dual.verdict == IN:
        report = IndicatorReport("Convergent", Fraction(1), inside, dual)
    elif inside.verdict == OUT and dual.verdict == OUT:
        report = IndicatorReport("NotConvergent", None, inside, dual)
    else:
        report = IndicatorReport(UNKNOWN, None, inside, dual)
    logger.info(f"Indicator of {a.describe()} over {ideal.describe()}: {report.verdict}")
    return report


def indicator_space(ideal, a, params=None):
    """classify_space applied to the indicator sequence of a."""
    return classify_space(ideal, indicator_seq(a), params)
