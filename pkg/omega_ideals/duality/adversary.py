#!/usr/bin/env python3
"""
Adversary Construction

For a tall ideal I, a family B ⊆ c00 and y with sup_{x∈B} |x·y| = ∞, build v
supported on a set S ∈ I with sup_{x∈B} |x·v| = ∞. Either some coordinate
carries an unbounded product (then a unit vector works) or the index
sequences m_n, s_n, k_n are built and v is solved on S so that the selected
pairings equal 1, 2, 3, ...
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .pairing import pair, restricted_pair, scan_unbounded_indices
from ..ideals.membership import sampled_trace
from ..ideals.tallness import is_tall, greedy_subset
from ..ideals.verdicts import TALL
from ..sequences.seq import FiniteSupport, HorizonParams
from ..sets.setexpr import Finite
from ..utils.errors import NotTall, KappaScanInconclusive, SelectionFailed, InvalidSpec

# Configure module logger
logger = logging.getLogger(__name__)

# A coordinate is divergent once its scanned sup passes this level
DIVERGENCE_LEVEL = Fraction(1 << 64)

RECURSIONS = ("corrected", "paperLiteral")

# Unbounded families are rescanned up to this many elements so that m_n = ⌊Σκ⌋ + n can be used
SCAN_GROWTH_LIMIT = 1 << 12


@dataclass
class KappaScan:
    """Per-coordinate sup of |x(n)y(n)| over the scanned prefix of B."""

    kappa: Dict[int, Fraction] = field(default_factory=dict)
    raisers: Dict[int, list] = field(default_factory=dict)
    late: set = field(default_factory=set)

    def divergent(self):
        """First coordinate past the divergence level after at least two raises."""
        for coordinate in sorted(self.kappa):
            if self.kappa[coordinate] > DIVERGENCE_LEVEL and len(self.raisers[coordinate]) >= 2:
                return coordinate
        return None

    def mass(self, upto):
        """Σ_{i<=upto} κ(i), refusing coordinates still rising at the end of the scan."""
        unsettled = sorted(i for i in self.late if i <= upto)
        if unsettled:
            raise KappaScanInconclusive(
                f"κ still rising at coordinates {unsettled[:8]} at the end of the scan")
        return sum((v for i, v in self.kappa.items() if i <= upto), Fraction(0))


def scan_kappa(dual, scan_limit):
    limit = scan_limit if dual.size is None else min(scan_limit, dual.size)
    scan = KappaScan()
    late_from = limit - limit // 4
    for i in range(limit):
        for n, value in dual.element(i).entries:
            product = abs(value * dual.y.at(n))
            if product > scan.kappa.get(n, Fraction(0)):
                scan.kappa[n] = product
                scan.raisers.setdefault(n, []).append(i)
                if i >= late_from and len(scan.raisers[n]) >= 2:
                    scan.late.add(n)
    return scan


@dataclass(frozen=True)
class AdversaryTrace:
    case: str
    recursion: str
    m: Tuple[int, ...] = ()
    s: Tuple[int, ...] = ()
    k: Tuple[int, ...] = ()
    s_tilde: Tuple[int, ...] = ()
    t: Tuple[int, ...] = ()
    support: Tuple[int, ...] = ()
    v: Optional[FiniteSupport] = None
    pairings: Tuple[Fraction, ...] = ()
    repaired: Tuple[int, ...] = ()
    kappa: Tuple[Tuple[int, Fraction], ...] = ()
    coordinate: Optional[int] = None
    trace: Tuple[Tuple[int, Fraction], ...] = ()

    def to_json(self):
        doc = {
            "case": self.case,
            "recursion": self.recursion,
            "m": list(self.m), "s": list(self.s), "k": list(self.k),
            "sTilde": list(self.s_tilde), "t": list(self.t), "S": list(self.support),
            "v": [[n, value] for n, value in self.v.entries] if self.v is not None else [],
            "pairings": list(self.pairings),
            "repaired": list(self.repaired),
            "kappa": [[n, value] for n, value in self.kappa],
        }
        if self.coordinate is not None:
            doc["coordinate"] = self.coordinate
        if self.trace:
            doc["densityTrace"] = [[n, value] for n, value in self.trace]
        return doc


def _unit_vector_case(dual, scan, coordinate, recursion):
    v = FiniteSupport(((coordinate, Fraction(1)),))
    pairings = tuple(pair(dual.element(i), v) for i in scan.raisers[coordinate])
    logger.info(f"κ diverges at coordinate {coordinate}: unit vector witness")
    return AdversaryTrace(
        "unitVector", recursion, support=(coordinate,), v=v, pairings=pairings,
        kappa=((coordinate, scan.kappa[coordinate]),), coordinate=coordinate)


def _top_joint_support(x, y):
    """max(supp x ∩ supp y), or None."""
    joint = [n for n, _ in x.entries if y.at(n) != 0]
    return max(joint) if joint else None


def _choose_index(formula, previous, s_tilde, subfamily, y):
    """
    Index m_n into the selected subfamily with k_n > s̃_{n-1}.

    Returns:
        tuple: (m, k, repaired) or None when the subfamily is exhausted
    """
    if formula < len(subfamily):
        for m in range(max(formula, previous + 1), len(subfamily)):
            k = _top_joint_support(subfamily[m], y)
            if k is not None and k > s_tilde:
                return m, k, False
        return None
    for m in range(previous + 1, len(subfamily)):
        k = _top_joint_support(subfamily[m], y)
        if k is not None and k > s_tilde:
            return m, k, True
    return None


def _solve(xs, ks, recursion):
    """Values of v on k_{t_0} < k_{t_1} < ... for the selected elements xs."""
    values = [Fraction(0)]
    for n in range(1, len(ks)):
        x = xs[n].as_dict()
        lead = x[ks[n]]
        if recursion == "corrected":
            earlier = sum((x.get(ks[i], Fraction(0)) * values[i] for i in range(n)), Fraction(0))
            values.append((n - earlier) / lead)
        else:
            earlier = sum((xs[i].as_dict()[ks[i]] * values[i] for i in range(n)), Fraction(0))
            values.append((n + earlier) / lead)
    return values


def adversary_construct(ideal, dual, steps, params=None, recursion="corrected"):
    """
    Build v ∈ c00(I) with unbounded pairings against B.

    Args:
        ideal (IdealSpec): A tall ideal
        dual (DualPair): The family B and y
        steps (int): Number of pairings x_{m_{t_n}}·v, n = 1..steps, to realize
        params (HorizonParams, optional): Horizon parameters. scan_limit bounds the first
            scan of B; unbounded families are rescanned up to SCAN_GROWTH_LIMIT elements
            before m_n falls back to the least valid index
        recursion (str): "corrected" or "paperLiteral"

    Returns:
        AdversaryTrace: The index tables, S, v and the pairings

    Raises:
        NotTall: If the ideal is not Tall
        KappaScanInconclusive: If a consulted κ value is still rising at the end of the scan
        SelectionFailed: If fewer than steps + 1 indices can be selected
    """
    params = params or HorizonParams()
    if recursion not in RECURSIONS:
        raise InvalidSpec(f"Unknown recursion {recursion!r}, expected one of {RECURSIONS}")
    report = is_tall(ideal, params)
    if report.verdict != TALL:
        raise NotTall(f"{ideal.describe()} is {report.verdict}")

    limit = params.scan_limit
    scan = scan_kappa(dual, limit)
    coordinate = scan.divergent()
    if coordinate is not None:
        return _unit_vector_case(dual, scan, coordinate, recursion)

    subfamily = [dual.element(i) for i in scan_unbounded_indices(dual, limit)]
    if not subfamily:
        raise SelectionFailed(f"No element of {dual.describe()} pairs to at least 1 with y")
    k0 = _top_joint_support(subfamily[0], dual.y)
    if k0 is None:
        raise SelectionFailed("The first selected element does not meet supp y")
    ms, ks = [0], [k0]
    ss = [subfamily[0].entries[-1][0]]
    s_tildes = [max(ss[0], k0)]
    repaired = []
    picks = greedy_subset(ideal, ks, "quadratic")
    while len(picks) < steps + 1:
        n = len(ms)
        formula = int(scan.mass(s_tildes[-1])) + n
        if dual.size is None and formula >= len(subfamily) and limit < SCAN_GROWTH_LIMIT:
            limit = min(max(formula + 1, 2 * limit), SCAN_GROWTH_LIMIT)
            logger.debug(f"Step {n}: rescanning {limit} elements of {dual.describe()} to reach m_n = {formula}")
            scan = scan_kappa(dual, limit)
            subfamily = [dual.element(i) for i in scan_unbounded_indices(dual, limit)]
            formula = int(scan.mass(s_tildes[-1])) + n
        choice = _choose_index(formula, ms[-1], s_tildes[-1], subfamily, dual.y)
        if choice is None:
            break
        m, k, bumped = choice
        if bumped:
            logger.warning(f"Step {n}: m_n = {formula} outside the {len(subfamily)} selected elements, "
                           f"using least valid index {m}")
            repaired.append(n)
        ms.append(m)
        ks.append(k)
        ss.append(max(ss[-1], subfamily[m].entries[-1][0]))
        s_tildes.append(max(ss[-1], k))
        picks = greedy_subset(ideal, ks, "quadratic")
        logger.debug(f"Step {n}: m={m} k={k} s={ss[-1]}")

    if len(picks) < steps + 1:
        raise SelectionFailed(
            f"Only {len(picks)} of {steps + 1} indices in the ideal from {len(ks)} constructed steps")
    picks = picks[:steps + 1]
    position = {k: i for i, k in enumerate(ks)}
    t = [position[k] for k in picks]
    xs = [subfamily[ms[i]] for i in t]
    values = _solve(xs, picks, recursion)
    v = FiniteSupport.of(zip(picks, values))

    pairings = []
    support = set(picks)
    for n in range(1, steps + 1):
        direct = pair(xs[n], v)
        assert direct == restricted_pair(xs[n], v, support), "pairing disagrees with its restricted sum"
        pairings.append(direct)
    for n in range(len(t)):
        for i in range(n + 1, len(t)):
            assert picks[i] > ss[t[n]], "a later support point falls inside an earlier element"
    assert {n for n, _ in v.entries} <= support
    if recursion == "corrected":
        assert pairings == list(range(1, steps + 1)), f"pairings {pairings}"

    trace = sampled_trace(ideal, Finite(tuple(picks)), params)
    assert trace[-1][1] <= params.epsilon, f"S does not decay: {trace[-1][1]}"
    consulted = tuple((i, scan.kappa[i]) for i in sorted(scan.kappa) if i <= s_tildes[-1])
    logger.info(f"Adversary over {dual.describe()} ({recursion}): pairings {pairings}")
    return AdversaryTrace(
        "construction", recursion, tuple(ms), tuple(ss), tuple(ks), tuple(s_tildes), tuple(t),
        tuple(picks), v, tuple(pairings), tuple(repaired), consulted, trace=tuple(trace))
