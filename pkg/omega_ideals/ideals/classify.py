#!/usr/bin/env python3
"""
FK Classification

c(I) carries a locally convex FK topology exactly when I is not tall. This
module bundles the tallness decision with the constructive evidence for each
side, and builds the sequences separating c00(I) from ℓ∞(J) for a tall I and
a non-tall J.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .tallness import GreedySubset, is_tall, tall_subset_report
from .verdicts import TALL, NOT_TALL
from ..duality.adversary import adversary_construct
from ..duality.pairing import DualPair
from ..duality.witnesses import positive_witness, witness_growth
from ..sequences.seq import HorizonParams, Named, OnSet
from ..sets.setexpr import Finite
from ..utils.errors import NotApplicable, OmegaIdealsError

# Configure module logger
logger = logging.getLogger(__name__)

ADMITS = "admits"
DOES_NOT_ADMIT = "does not admit"
UNDECIDED = "undecided"

BOUND_LADDER = tuple(1 << j for j in range(17))


@dataclass(frozen=True)
class FkReport:
    verdict: str
    tallness: object
    witness: Optional[DualPair] = None
    growth: Tuple[Tuple[int, Fraction], ...] = ()
    demo: Optional[object] = None
    notes: Tuple[str, ...] = ()

    def to_json(self):
        doc = {"verdict": self.verdict, "tallness": self.tallness.to_json()}
        if self.witness is not None:
            doc["witness"] = self.witness.to_json()
            doc["growth"] = [[n, v] for n, v in self.growth]
        if self.demo is not None:
            doc["adversary"] = self.demo.to_json()
        if self.notes:
            doc["notes"] = list(self.notes)
        return doc


def fk_classify(ideal, params=None):
    """
    Decide whether c(I) admits a locally convex FK topology.

    Args:
        ideal (IdealSpec): The ideal
        params (HorizonParams, optional): Horizon parameters

    Returns:
        FkReport: "admits" with a positive witness pair, "does not admit" with an
        adversary run on B = {2^n e_n}, y ≡ 1, or "undecided" with the tallness trace
    """
    params = params or HorizonParams()
    tallness = is_tall(ideal, params)
    if tallness.verdict == NOT_TALL:
        dual = positive_witness(tallness.witness, params.depth, params)
        report = FkReport(ADMITS, tallness, witness=dual, growth=tuple(witness_growth(dual)))
    elif tallness.verdict == TALL:
        dual = DualPair("diagonal", Named("constant", Fraction(1)))
        try:
            demo = adversary_construct(ideal, dual, params.steps, params)
            report = FkReport(DOES_NOT_ADMIT, tallness, demo=demo)
        except OmegaIdealsError as e:
            logger.warning(f"Adversary demo for {ideal.describe()} did not complete: {e}")
            report = FkReport(DOES_NOT_ADMIT, tallness, notes=(f"adversary demo: {e.name}: {e}",))
    else:
        report = FkReport(UNDECIDED, tallness)
    logger.info(f"FK classification of {ideal.describe()}: {report.verdict}")
    return report


@dataclass(frozen=True)
class NoninclusionReport:
    x: OnSet
    nontall_set: object
    subset: GreedySubset
    prefix: Finite
    certificate: str
    trace: Tuple[Tuple[int, Fraction], ...]
    exceptions: Tuple[Tuple[int, Tuple[int, ...]], ...]

    def to_json(self):
        return {
            "x": self.x.to_json(),
            "S": self.nontall_set.to_json(),
            "subset": self.subset.to_json(),
            "prefix": self.prefix.to_json(),
            "nontallCertificate": self.certificate,
            "trace": [[n, v] for n, v in self.trace],
            "exceptions": [{"M": m, "atMostM": list(points)} for m, points in self.exceptions],
        }


def noninclusion_report(tall, nontall, params=None):
    """
    A sequence in c00(tall) outside ℓ∞(nontall), with its evidence.

    x(n) = n on S' and 0 elsewhere, where S is the non-tall witness of
    ``nontall`` and S' ⊆ S is the greedy subset of S for ``tall``, kept
    symbolic so that S' stays infinite. S' belongs to ``tall``, every infinite
    subset of S is outside ``nontall``, and {|x| > M} contains all of S' but
    the finitely many points listed for M.

    Raises:
        NotApplicable: If ``tall`` is not Tall or ``nontall`` is not NotTall
    """
    params = params or HorizonParams()
    if is_tall(tall, params).verdict != TALL:
        raise NotApplicable(f"{tall.describe()} is not Tall")
    other = is_tall(nontall, params)
    if other.verdict != NOT_TALL:
        raise NotApplicable(f"{nontall.describe()} is {other.verdict}, expected NotTall")

    chosen = tall_subset_report(tall, other.witness, params)
    subset = chosen.continuation
    x = OnSet(subset, Named("identity"))
    small = tuple(subset.iter_prefix(BOUND_LADDER[-1]))
    exceptions = tuple((m, tuple(n for n in small if n <= m)) for m in BOUND_LADDER)
    logger.info(f"Noninclusion witness on {subset.describe()} "
                f"({len(chosen.witness.elems)} points below N={params.N})")
    return NoninclusionReport(x, other.witness, subset, chosen.witness, other.criterion,
                              chosen.trace, exceptions)


def noninclusion_witness(tall, nontall, params=None):
    """The sequence x of ``noninclusion_report``."""
    return noninclusion_report(tall, nontall, params).x
