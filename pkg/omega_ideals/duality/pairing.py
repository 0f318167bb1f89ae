#!/usr/bin/env python3
"""
Dual Pairs

The pairing x·y = Σ x(n)y(n) between finitely supported x and an arbitrary
sequence y, and families B ⊆ c00 given by generators.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from ..sequences.seq import FiniteSupport, Seq, seq_from_json
from ..sets.setexpr import SetExpr, from_json as set_from_json, take
from ..utils.converters import parse_rational
from ..utils.errors import InvalidSpec, NotFound, NotInfinite

# Configure module logger
logger = logging.getLogger(__name__)

FAMILY_KINDS = ("diagonal", "positiveWitness", "explicit", "scaledUnit")

# Enumeration limit for witness sets read from JSON
ENUMERATION_LIMIT = 1 << 20


def pair(x, y):
    """
    Exact pairing of a finitely supported x with y.

    Args:
        x (FiniteSupport): Left factor
        y (Seq): Right factor

    Returns:
        Fraction: Σ over supp x of x(n)·y(n)
    """
    return sum((v * y.at(n) for n, v in x.entries), Fraction(0))


def restricted_pair(x, y, support):
    """Pairing summed over supp x ∩ support only."""
    return sum((v * y.at(n) for n, v in x.entries if n in support), Fraction(0))


@dataclass(frozen=True)
class DualPair:
    """
    A generator of B ⊆ c00 and a sequence y.

    ``diagonal`` yields 2^i e_i, ``positiveWitness`` yields Σ_{j<=i} 2^-j e_{s_j}
    over the enumerated points s_0 < s_1 < ..., ``explicit`` cycles through the
    listed elements and ``scaledUnit`` yields 2^i e_c for a fixed coordinate c.
    """

    kind: str
    y: Seq
    points: Tuple[int, ...] = ()
    elements: Tuple[FiniteSupport, ...] = ()
    coordinate: int = 0
    source: Optional[SetExpr] = None

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise InvalidSpec(f"Unknown family kind {self.kind!r}, expected one of {FAMILY_KINDS}")
        if self.kind == "positiveWitness" and not self.points:
            raise InvalidSpec("A positive witness family needs at least one point")
        if self.kind == "explicit" and not self.elements:
            raise InvalidSpec("An explicit family needs at least one element")

    @property
    def size(self):
        """Number of distinct generated elements, None when unbounded."""
        if self.kind == "positiveWitness":
            return len(self.points)
        return None

    def element(self, i):
        """The i-th element x_i of B."""
        if self.kind == "diagonal":
            return FiniteSupport(((i, Fraction(1 << i)),))
        if self.kind == "scaledUnit":
            return FiniteSupport(((self.coordinate, Fraction(1 << i)),))
        if self.kind == "explicit":
            return self.elements[i % len(self.elements)]
        if i >= len(self.points):
            raise NotFound(f"Positive witness family has only {len(self.points)} elements")
        return FiniteSupport(tuple((s, Fraction(1, 1 << j)) for j, s in enumerate(self.points[:i + 1])))

    def pairing(self, i):
        return pair(self.element(i), self.y)

    def describe(self):
        if self.kind == "positiveWitness":
            return f"positive witness over {len(self.points)} points"
        if self.kind == "scaledUnit":
            return f"2^n e_{self.coordinate}"
        if self.kind == "explicit":
            return f"{len(self.elements)} explicit elements, cycled"
        return "2^n e_n"

    def to_json(self):
        if self.kind == "diagonal":
            family = {"kind": "diagonal", "scale": "2^n"}
        elif self.kind == "scaledUnit":
            family = {"kind": "scaledUnit", "coordinate": self.coordinate}
        elif self.kind == "explicit":
            family = {"kind": "explicit",
                      "elements": [[[n, v] for n, v in x.entries] for x in self.elements]}
        else:
            family = {"kind": "positiveWitness", "points": list(self.points)}
            if self.source is not None:
                family["set"] = self.source.to_json()
        return {"B": family, "y": self.y.to_json()}

    @classmethod
    def from_json(cls, doc, depth=16):
        """
        Decode a dual pair.

        A positiveWitness family may give ``points`` directly or a ``set`` that
        is enumerated to ``depth`` + 1 points.

        Raises:
            InvalidSpec: If the document is malformed
        """
        if not isinstance(doc, dict) or "B" not in doc or "y" not in doc:
            raise InvalidSpec(f"Dual pair must be an object with 'B' and 'y', got {doc!r}")
        family, y = doc["B"], seq_from_json(doc["y"])
        kind = family.get("kind") if isinstance(family, dict) else None
        try:
            if kind == "diagonal":
                return cls("diagonal", y)
            if kind == "scaledUnit":
                return cls("scaledUnit", y, coordinate=int(family["coordinate"]))
            if kind == "explicit":
                elements = tuple(
                    FiniteSupport.of((int(n), parse_rational(v)) for n, v in element)
                    for element in family["elements"])
                return cls("explicit", y, elements=elements)
            if kind == "positiveWitness":
                if "points" in family:
                    return cls("positiveWitness", y, points=tuple(int(p) for p in family["points"]))
                source = set_from_json(family["set"])
                points = tuple(take(source.simplify(), depth + 1, ENUMERATION_LIMIT))
                if source.simplify().finiteness() is True:
                    raise NotInfinite(f"{source.describe()} is finite")
                return cls("positiveWitness", y, points=points, source=source)
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidSpec(f"Malformed {kind!r} family: {e}") from e
        raise InvalidSpec(f"Unknown family kind: {kind!r}")


def scan_unbounded_indices(dual, scan_limit, scale=1, count=None):
    """Greedy scan of B for indices i_0 < i_1 < ... with |x_{i_n}·y| >= |scale|·2^n."""
    scale = abs(Fraction(scale))
    limit = scan_limit if dual.size is None else min(scan_limit, dual.size)
    chosen = []
    for i in range(limit):
        if count is not None and len(chosen) == count:
            break
        if abs(dual.pairing(i)) >= scale * (1 << len(chosen)):
            chosen.append(i)
    return chosen


def select_unbounded_indices(dual, count, scan_limit, scale=1):
    """
    Indices i_0 < i_1 < ... with |x_{i_n}·y| >= |scale|·2^n.

    Args:
        dual (DualPair): The family and y
        count (int): Number of indices wanted
        scan_limit (int): Number of elements of B scanned
        scale (Fraction): Threshold multiplier

    Returns:
        list: The selected indices

    Raises:
        NotFound: If fewer than ``count`` indices appear within the scan
    """
    chosen = scan_unbounded_indices(dual, scan_limit, scale, count)
    if len(chosen) < count:
        raise NotFound(
            f"Only {len(chosen)} of {count} unbounded pairings within {scan_limit} elements of {dual.describe()}")
    logger.debug(f"Selected indices {chosen} from {dual.describe()}")
    return chosen


def select_unbounded_subfamily(dual, count, scan_limit):
    """The elements x_0..x_{count-1} of B with |x_n·y| >= 2^n."""
    return [dual.element(i) for i in select_unbounded_indices(dual, count, scan_limit)]
