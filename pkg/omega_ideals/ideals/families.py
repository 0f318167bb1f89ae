#!/usr/bin/env python3
"""
Ideal Families

Parametric descriptions of ideals on ω: Fin, the density zero ideal, matrix
(summability) ideals, summable ideals, generalized density ideals built from
block submeasures, lacunary ideals, the Fubini product ∅×Fin and restrictions
to a set outside the ideal.

Every family contains the finite sets and never contains ω; descriptions that
would break properness are rejected with InvalidSpec at construction.
"""

import math
import logging
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from ..sets.setexpr import SetExpr, from_json as set_from_json
from ..summability.matrices import MatrixSpec, matrix_from_json
from ..utils.converters import parse_rational
from ..utils.errors import InvalidSpec

# Configure module logger
logger = logging.getLogger(__name__)

WEIGHT_RULES = ("harmonic", "constant", "alternating", "table")
WEIGHT_TAILS = ("harmonic", "constant", "alternating", "zeroAfter")
LENGTH_RULES = ("constant", "linear", "table")
SUBMEASURE_KINDS = ("normalizedCounting", "weightedSum", "weightedMax")
BLOCK_WEIGHTS = ("uniform", "constant", "blockHarmonic")


def _rational(value, what):
    try:
        return parse_rational(value)
    except ValueError as e:
        raise InvalidSpec(f"Bad rational for {what}: {e}") from e


@dataclass(frozen=True)
class WeightSpec:
    """
    A weight f: ω -> [0, ∞) for summable ideals.

    ``alternating`` is c on even n and 2/(n+3) on odd n. A ``table`` lists the
    first values explicitly and hands over to ``tail`` at absolute indices.
    """

    rule: str
    c: Fraction = Fraction(0)
    table: Tuple[Fraction, ...] = ()
    tail: Optional["WeightSpec"] = None

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "table", tuple(Fraction(v) for v in self.table))
        if self.rule not in WEIGHT_RULES + ("zeroAfter",):
            raise InvalidSpec(f"Unknown weight rule {self.rule!r}, expected one of {WEIGHT_RULES}")
        if self.c < 0 or any(v < 0 for v in self.table):
            raise InvalidSpec("Weights must be nonnegative")
        if self.rule == "table":
            if self.tail is None or self.tail.rule not in WEIGHT_TAILS:
                raise InvalidSpec(f"Weight table needs a tail rule in {WEIGHT_TAILS}")

    @property
    def governing(self):
        """The rule in force for all large n."""
        return self.tail if self.rule == "table" else self

    @property
    def offset(self):
        return len(self.table) if self.rule == "table" else 0

    def value(self, n):
        if self.rule == "table":
            return self.table[n] if n < len(self.table) else self.tail.value(n)
        if self.rule == "harmonic":
            return Fraction(1, n + 1)
        if self.rule == "constant":
            return self.c
        if self.rule == "alternating":
            return self.c if n % 2 == 0 else Fraction(2, n + 3)
        return Fraction(0)

    @property
    def divergent_sum(self):
        rule = self.governing
        if rule.rule in ("harmonic", "alternating"):
            return True
        if rule.rule == "constant":
            return rule.c > 0
        return False

    def limsup(self):
        rule = self.governing
        if rule.rule in ("constant", "alternating"):
            return rule.c
        return Fraction(0)

    def describe(self):
        if self.rule == "table":
            return f"table of {len(self.table)} then {self.tail.describe()}"
        if self.rule in ("constant", "alternating"):
            return f"{self.rule} {self.c}"
        return self.rule

    def to_json(self):
        doc = {"rule": self.rule}
        if self.rule in ("constant", "alternating"):
            doc["c"] = self.c
        if self.rule == "table":
            doc["values"] = list(self.table)
            doc["tail"] = self.tail.to_json()
        return doc

    @classmethod
    def from_json(cls, doc):
        if not isinstance(doc, dict) or "rule" not in doc:
            raise InvalidSpec(f"Weight must be an object with 'rule', got {doc!r}")
        rule = doc["rule"]
        if rule == "table":
            values = tuple(_rational(v, "weight table") for v in doc.get("values", []))
            return cls("table", table=values, tail=cls.from_json(doc.get("tail", {})))
        return cls(rule, c=_rational(doc.get("c", 0), "weight constant"))


@dataclass(frozen=True)
class BlockSpec:
    """
    Consecutive nonempty intervals I_0, I_1, ... partitioning ω.

    Lengths are a constant L, linear (|I_n| = n + 1) or a table followed by a
    constant or linear tail at absolute block indices.
    """

    rule: str
    L: int = 1
    table: Tuple[int, ...] = ()
    tail: Optional["BlockSpec"] = None
    _starts: Tuple[int, ...] = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.rule not in LENGTH_RULES:
            raise InvalidSpec(f"Unknown length rule {self.rule!r}, expected one of {LENGTH_RULES}")
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if self.rule == "constant" and self.L < 1:
            raise InvalidSpec(f"Block length must be >= 1, got {self.L}")
        if self.rule == "table":
            if any(v < 1 for v in self.table):
                raise InvalidSpec("Block lengths must be >= 1")
            if self.tail is None or self.tail.rule not in ("constant", "linear"):
                raise InvalidSpec("Block length table needs a constant or linear tail")
        # prefix sums built eagerly so evaluation stays read-only
        starts = [0]
        for length in self.table:
            starts.append(starts[-1] + length)
        object.__setattr__(self, "_starts", tuple(starts))

    @property
    def _tail(self):
        return self.tail if self.rule == "table" else self

    @property
    def grows(self):
        """True when |I_n| -> ∞."""
        return self._tail.rule == "linear"

    def length(self, n):
        if n < len(self.table):
            return self.table[n]
        tail = self._tail
        return tail.L if tail.rule == "constant" else n + 1

    def start(self, n):
        T = len(self.table)
        if n <= T:
            return self._starts[n]
        P = self._starts[-1]
        tail = self._tail
        if tail.rule == "constant":
            return P + (n - T) * tail.L
        return P + (n * (n + 1) - T * (T + 1)) // 2

    def block_range(self, n):
        start = self.start(n)
        return start, start + self.length(n) - 1

    def block_of(self, k):
        """Index n with k in I_n."""
        P = self._starts[-1]
        if k < P:
            return bisect_right(self._starts, k) - 1
        T = len(self.table)
        tail = self._tail
        if tail.rule == "constant":
            return T + (k - P) // tail.L
        target = k - P + T * (T + 1) // 2
        return (math.isqrt(8 * target + 1) - 1) // 2

    def first_tail_block(self):
        return len(self.table)

    def describe(self):
        if self.rule == "constant":
            return f"constant length {self.L}"
        if self.rule == "linear":
            return "lengths n+1"
        return f"{len(self.table)} tabled lengths then {self.tail.describe()}"

    def to_json(self):
        if self.rule == "constant":
            return {"rule": "constant", "L": self.L}
        if self.rule == "linear":
            return {"rule": "linear"}
        return {"rule": "table", "values": list(self.table), "tail": self.tail.to_json()}

    @classmethod
    def from_json(cls, doc):
        if not isinstance(doc, dict) or "rule" not in doc:
            raise InvalidSpec(f"Block lengths must be an object with 'rule', got {doc!r}")
        try:
            rule = doc["rule"]
            if rule == "table":
                return cls("table", table=tuple(doc.get("values", [])),
                           tail=cls.from_json(doc.get("tail", {})))
            return cls(rule, L=int(doc.get("L", 1)))
        except (TypeError, ValueError) as e:
            raise InvalidSpec(f"Malformed block lengths: {e}") from e


@dataclass(frozen=True)
class BlockSubmeasureSpec:
    """
    Submeasures phi_n supported on the blocks I_n with block-constant weights.

    weightedSum: phi_n(S) = w_n |S ∩ I_n|; weightedMax: phi_n(S) = w_n when S
    meets I_n. normalizedCounting is weightedSum with w_n = 1/|I_n|.
    """

    blocks: BlockSpec
    kind: str = "normalizedCounting"
    weights: str = "uniform"
    c: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if self.kind not in SUBMEASURE_KINDS:
            raise InvalidSpec(f"Unknown submeasure kind {self.kind!r}, expected one of {SUBMEASURE_KINDS}")
        if self.kind == "normalizedCounting":
            object.__setattr__(self, "weights", "uniform")
        if self.weights not in BLOCK_WEIGHTS:
            raise InvalidSpec(f"Unknown block weights {self.weights!r}, expected one of {BLOCK_WEIGHTS}")
        if self.weights == "constant" and self.c <= 0:
            raise InvalidSpec("Constant block weight must be positive")
        if not self._proper():
            raise InvalidSpec(f"phi_n(I_n) -> 0 for {self.describe()}: ω would belong to the ideal")

    @property
    def aggregate(self):
        return "max" if self.kind == "weightedMax" else "sum"

    def _proper(self):
        grows = self.blocks.grows
        if self.aggregate == "sum":
            return not (self.weights == "blockHarmonic" and not grows)
        return self.weights == "constant" or (self.weights == "uniform" and not grows)

    @property
    def weight_vanishes(self):
        """True when the singleton maxima max_k phi_n({k}) = w_n tend to 0."""
        if self.weights == "uniform":
            return self.blocks.grows
        return self.weights == "blockHarmonic"

    def weight(self, n):
        if self.weights == "uniform":
            return Fraction(1, self.blocks.length(n))
        if self.weights == "constant":
            return self.c
        return Fraction(1, n + 1)

    def phi(self, n, s):
        """phi_n(s), depending only on s ∩ I_n."""
        lo, hi = self.blocks.block_range(n)
        if self.aggregate == "max":
            return self.weight(n) if s.first_at_least(lo, hi) is not None else Fraction(0)
        return self.weight(n) * (s.count_prefix(hi) - s.count_prefix(lo - 1))

    def phi_of(self, n, elements):
        """phi_n of an explicit finite collection of naturals."""
        lo, hi = self.blocks.block_range(n)
        hits = sum(1 for k in set(elements) if lo <= k <= hi)
        if self.aggregate == "max":
            return self.weight(n) if hits else Fraction(0)
        return self.weight(n) * hits

    def describe(self):
        if self.kind == "normalizedCounting":
            return f"normalized counting on {self.blocks.describe()}"
        weights = f"constant {self.c}" if self.weights == "constant" else self.weights
        return f"{self.kind} ({weights}) on {self.blocks.describe()}"

    def to_json(self):
        doc = {"kind": self.kind}
        if self.kind != "normalizedCounting":
            doc["weights"] = {"rule": self.weights}
            if self.weights == "constant":
                doc["weights"]["c"] = self.c
        return doc

    @classmethod
    def from_json(cls, blocks, doc):
        doc = doc or {"kind": "normalizedCounting"}
        if not isinstance(doc, dict):
            raise InvalidSpec(f"Submeasure must be an object, got {doc!r}")
        weights = doc.get("weights", {"rule": "uniform"})
        return cls(blocks, doc.get("kind", "normalizedCounting"), weights.get("rule", "uniform"),
                   _rational(weights.get("c", 1), "block weight"))


class IdealSpec:
    kind = ""

    def describe(self):
        return self.kind

    def to_json(self):
        return {"kind": self.kind}

    def __str__(self):
        return self.describe()


@dataclass(frozen=True)
class Fin(IdealSpec):
    kind = "fin"

    def describe(self):
        return "Fin"


@dataclass(frozen=True)
class DensityZero(IdealSpec):
    kind = "densityZero"

    def describe(self):
        return "density zero"


@dataclass(frozen=True)
class MatrixIdeal(IdealSpec):
    matrix: MatrixSpec
    kind = "matrix"

    def describe(self):
        return f"matrix ideal of {self.matrix.describe()}"

    def to_json(self):
        return {"kind": self.kind, "matrix": self.matrix.to_json()}


@dataclass(frozen=True)
class Summable(IdealSpec):
    f: WeightSpec
    kind = "summable"

    def __post_init__(self):
        if not self.f.divergent_sum:
            raise InvalidSpec(f"Summable ideal needs a divergent weight sum, {self.f.describe()} converges")

    def describe(self):
        return f"summable ideal of {self.f.describe()}"

    def to_json(self):
        return {"kind": self.kind, "f": self.f.to_json()}


@dataclass(frozen=True)
class GenDensity(IdealSpec):
    phi: BlockSubmeasureSpec
    kind = "genDensity"

    def describe(self):
        return f"generalized density of {self.phi.describe()}"

    def to_json(self):
        return {"kind": self.kind, "blocks": self.phi.blocks.to_json(), "submeasure": self.phi.to_json()}


@dataclass(frozen=True)
class Lacunary(IdealSpec):
    blocks: BlockSpec
    kind = "lacunary"

    def as_gen_density(self):
        return GenDensity(BlockSubmeasureSpec(self.blocks, "normalizedCounting"))

    def describe(self):
        return f"lacunary ideal on {self.blocks.describe()}"

    def to_json(self):
        return {"kind": self.kind, "lengths": self.blocks.to_json()}


@dataclass(frozen=True)
class FubiniEmptyFin(IdealSpec):
    kind = "fubiniEmptyFin"

    def describe(self):
        return "∅×Fin"


@dataclass(frozen=True)
class Restriction(IdealSpec):
    base: IdealSpec
    e: SetExpr
    kind = "restriction"

    def describe(self):
        return f"({self.base.describe()}) restricted to {self.e.describe()}"

    def to_json(self):
        return {"kind": self.kind, "base": self.base.to_json(), "set": self.e.to_json()}


def ideal_from_json(doc):
    """
    Build an IdealSpec from its JSON encoding.

    Args:
        doc (dict): The encoded ideal

    Returns:
        IdealSpec: The decoded ideal

    Raises:
        InvalidSpec: If the document is malformed or describes an improper ideal
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InvalidSpec(f"Ideal must be an object with 'kind', got {doc!r}")
    kind = doc["kind"]
    try:
        if kind == "fin":
            return Fin()
        if kind == "densityZero":
            return DensityZero()
        if kind == "matrix":
            return MatrixIdeal(matrix_from_json(doc["matrix"]))
        if kind == "summable":
            return Summable(WeightSpec.from_json(doc["f"]))
        if kind == "genDensity":
            blocks = BlockSpec.from_json(doc["blocks"])
            return GenDensity(BlockSubmeasureSpec.from_json(blocks, doc.get("submeasure")))
        if kind == "lacunary":
            return Lacunary(BlockSpec.from_json(doc["lengths"]))
        if kind == "fubiniEmptyFin":
            return FubiniEmptyFin()
        if kind == "restriction":
            return Restriction(ideal_from_json(doc["base"]), set_from_json(doc["set"]))
    except KeyError as e:
        raise InvalidSpec(f"Ideal {kind!r} is missing field {e}") from e
    raise InvalidSpec(f"Unknown ideal kind: {kind!r}")
