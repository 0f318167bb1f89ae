#!/usr/bin/env python3
"""
Sequences

Real sequences with rational values, represented either by a finite support
or by named generators, and the horizon parameters that bound every finite
inspection of an infinite object.

The central operation is ``exceedance_set``: for every representation the set
{n : |x(n) - eta| > eps} is produced exactly as a SetExpr, so that limit
questions become ideal membership questions.
"""

import os
import math
import logging
from types import MappingProxyType
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from ..sets.setexpr import (
    SetExpr, Finite, Range, Union, Intersect, Complement, OMEGA, EMPTY,
    from_json as set_from_json,
)
from ..utils.converters import parse_rational
from ..utils.errors import InvalidSpec

# Configure module logger
logger = logging.getLogger(__name__)

NAMED_RULES = ("constant", "unit", "powersOfTwo", "identity", "harmonic")


@dataclass(frozen=True)
class HorizonParams:
    """Finite truncation of the limits: index horizon, trace length, tolerance."""

    N: int = 100_000
    rows: int = 1000
    epsilon: Fraction = Fraction(1, 100)
    recurrence: Fraction = Fraction(1, 10)
    scan_limit: int = 1000
    steps: int = 8
    depth: int = 16

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        object.__setattr__(self, "recurrence", Fraction(self.recurrence))
        if not (self.N >= self.rows >= 1):
            raise InvalidSpec(f"HorizonParams needs N >= rows >= 1, got N={self.N}, rows={self.rows}")
        if self.epsilon <= 0:
            raise InvalidSpec(f"HorizonParams needs epsilon > 0, got {self.epsilon}")
        if not (0 < self.recurrence <= 1):
            raise InvalidSpec(f"HorizonParams needs recurrence in (0, 1], got {self.recurrence}")
        if self.scan_limit < 1 or self.steps < 1 or self.depth < 0:
            raise InvalidSpec("scan_limit and steps must be positive, depth nonnegative")

    @classmethod
    def from_env(cls, config=None):
        """
        Build parameters from a config dict, falling back to environment variables.

        Args:
            config (dict, optional): Overrides keyed by field name. If None, only env vars are used.

        Returns:
            HorizonParams: The validated parameters
        """
        config = config or {}
        try:
            return cls(
                N=int(config.get('N', os.getenv("OMEGA_IDEALS_N", "100000"))),
                rows=int(config.get('rows', os.getenv("OMEGA_IDEALS_ROWS", "1000"))),
                epsilon=parse_rational(config.get('epsilon', os.getenv("OMEGA_IDEALS_EPSILON", "1/100"))),
                recurrence=parse_rational(config.get('recurrence', os.getenv("OMEGA_IDEALS_RECURRENCE", "1/10"))),
                scan_limit=int(config.get('scan_limit', os.getenv("OMEGA_IDEALS_SCAN_LIMIT", "1000"))),
                steps=int(config.get('steps', os.getenv("OMEGA_IDEALS_ADVERSARY_STEPS", "8"))),
                depth=int(config.get('depth', os.getenv("OMEGA_IDEALS_WITNESS_DEPTH", "16"))),
            )
        except ValueError as e:
            raise InvalidSpec(f"Invalid horizon parameter: {e}") from e

    def sample_points(self, upper=None):
        """``rows`` indices spread evenly over [0, upper], ending at upper (default N)."""
        upper = self.N if upper is None else upper
        if upper < self.rows:
            return list(range(upper + 1))
        return sorted({(i + 1) * upper // self.rows for i in range(self.rows)})

    def to_json(self):
        return {
            "N": self.N, "rows": self.rows, "epsilon": self.epsilon,
            "recurrence": self.recurrence, "scanLimit": self.scan_limit,
            "steps": self.steps, "depth": self.depth,
        }


class Seq:
    """Base class for rational-valued sequences on ω."""

    def at(self, n: int) -> Fraction:
        raise NotImplementedError

    def exceedance(self, eta: Fraction, eps: Fraction) -> SetExpr:
        raise NotImplementedError

    def escape(self) -> Optional[SetExpr]:
        """A set on which |x(n)| tends to infinity, if the representation shows one."""
        return None

    def values(self) -> Optional[frozenset]:
        """The finite value set, or None when it is infinite or not known."""
        return None

    def limit(self) -> Optional[Fraction]:
        """The ordinary limit when the representation exposes it."""
        return None

    def describe(self) -> str:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def __str__(self):
        return self.describe()


def _outside(value, eta, eps):
    return abs(value - eta) > eps


@dataclass(frozen=True)
class FiniteSupport(Seq):
    entries: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        entries = tuple((int(n), Fraction(v)) for n, v in self.entries)
        object.__setattr__(self, "entries", entries)
        indices = [n for n, _ in entries]
        if any(n < 0 for n in indices) or any(a >= b for a, b in zip(indices, indices[1:])):
            raise InvalidSpec("FiniteSupport indices must be naturals in strictly increasing order")
        if any(v == 0 for _, v in entries):
            raise InvalidSpec("FiniteSupport values must be nonzero")
        object.__setattr__(self, "_table", MappingProxyType(dict(entries)))

    @classmethod
    def of(cls, pairs):
        """Build from (index, value) pairs in any order, dropping zeros."""
        table = {}
        for n, v in pairs:
            table[int(n)] = Fraction(v)
        return cls(tuple((n, v) for n, v in sorted(table.items()) if v != 0))

    @property
    def support(self):
        return Finite(tuple(n for n, _ in self.entries))

    def as_dict(self):
        """Read-only mapping index -> value, built once."""
        return self._table

    def at(self, n):
        return self._table.get(n, Fraction(0))

    def exceedance(self, eta, eps):
        if _outside(Fraction(0), eta, eps):
            close = [n for n, v in self.entries if not _outside(v, eta, eps)]
            return Complement(Finite(tuple(close)))
        return Finite(tuple(n for n, v in self.entries if _outside(v, eta, eps)))

    def values(self):
        return frozenset(v for _, v in self.entries) | {Fraction(0)}

    def limit(self):
        return Fraction(0)

    def describe(self):
        if not self.entries:
            return "0"
        shown = ", ".join(f"({n}, {v})" for n, v in self.entries[:6])
        return "[" + shown + (", …" if len(self.entries) > 6 else "") + "]"

    def to_json(self):
        return {"kind": "finiteSupport", "entries": [[n, v] for n, v in self.entries]}


def _naturals_between(lo, hi):
    """Naturals n with lo <= n <= hi (rational ends) as a Range."""
    first = max(0, math.ceil(lo))
    last = math.floor(hi)
    return Range(first, last) if last >= first else EMPTY


@dataclass(frozen=True)
class Named(Seq):
    rule: str
    c: Fraction = Fraction(0)
    k: int = 0

    def __post_init__(self):
        if self.rule not in NAMED_RULES:
            raise InvalidSpec(f"Unknown sequence rule {self.rule!r}, expected one of {NAMED_RULES}")
        object.__setattr__(self, "c", Fraction(self.c))
        if self.k < 0:
            raise InvalidSpec(f"Unit vector index must be natural, got {self.k}")

    def at(self, n):
        if self.rule == "constant":
            return self.c
        if self.rule == "unit":
            return Fraction(1 if n == self.k else 0)
        if self.rule == "powersOfTwo":
            return Fraction(1 << n)
        if self.rule == "identity":
            return Fraction(n)
        return Fraction(1, n + 1)

    def exceedance(self, eta, eps):
        lo, hi = eta - eps, eta + eps
        if self.rule == "constant":
            return OMEGA if _outside(self.c, eta, eps) else EMPTY
        if self.rule == "unit":
            return FiniteSupport(((self.k, Fraction(1)),)).exceedance(eta, eps)
        if self.rule == "identity":
            return Complement(_naturals_between(lo, hi)).simplify()
        if self.rule == "powersOfTwo":
            close = []
            n = 0
            while (1 << n) <= hi:
                if (1 << n) >= lo:
                    close.append(n)
                n += 1
            return Complement(Finite(tuple(close))).simplify()
        # harmonic: 1/(n+1) decreases to 0
        if hi <= 0:
            return OMEGA
        first_close = max(0, math.ceil(1 / hi) - 1)
        if lo <= 0:
            return Range(0, first_close - 1).simplify()
        last_close = math.floor(1 / lo) - 1
        return Complement(Range(first_close, last_close)).simplify()

    def escape(self):
        if self.rule in ("powersOfTwo", "identity"):
            return OMEGA
        return None

    def values(self):
        if self.rule == "constant":
            return frozenset({self.c})
        if self.rule == "unit":
            return frozenset({Fraction(0), Fraction(1)})
        return None

    def limit(self):
        if self.rule == "constant":
            return self.c
        if self.rule in ("unit", "harmonic"):
            return Fraction(0)
        return None

    def describe(self):
        if self.rule == "constant":
            return f"constant {self.c}"
        if self.rule == "unit":
            return f"e_{self.k}"
        return self.rule

    def to_json(self):
        doc = {"kind": "named", "rule": self.rule}
        if self.rule == "constant":
            doc["c"] = self.c
        if self.rule == "unit":
            doc["k"] = self.k
        return doc


@dataclass(frozen=True)
class Overlay(Seq):
    """Base sequence with a finite patch; the patch wins at patched indices."""

    base: Seq
    patch: FiniteSupport

    def at(self, n):
        patched = self.patch.as_dict()
        if n in patched:
            return patched[n]
        return self.base.at(n)

    def exceedance(self, eta, eps):
        patched = self.patch.support
        bad = Finite(tuple(n for n, v in self.patch.entries if _outside(v, eta, eps)))
        kept = Intersect((self.base.exceedance(eta, eps), Complement(patched)))
        return Union((kept, bad)).simplify()

    def escape(self):
        base = self.base.escape()
        if base is None:
            return None
        return Intersect((base, Complement(self.patch.support))).simplify()

    def values(self):
        base = self.base.values()
        if base is None:
            return None
        return base | frozenset(v for _, v in self.patch.entries)

    def limit(self):
        return self.base.limit()

    def describe(self):
        return f"{self.base.describe()} patched at {self.patch.describe()}"

    def to_json(self):
        return {"kind": "overlay", "base": self.base.to_json(),
                "patch": [[n, v] for n, v in self.patch.entries]}


@dataclass(frozen=True)
class OnSet(Seq):
    """The base sequence on ``set``, 0 elsewhere."""

    set: SetExpr
    base: Seq

    def at(self, n):
        return self.base.at(n) if self.set.contains(n) else Fraction(0)

    def exceedance(self, eta, eps):
        inside = Intersect((self.set, self.base.exceedance(eta, eps)))
        if _outside(Fraction(0), eta, eps):
            return Union((inside, Complement(self.set))).simplify()
        return inside.simplify()

    def escape(self):
        base = self.base.escape()
        if base is None:
            return None
        return Intersect((self.set, base)).simplify()

    def values(self):
        base = self.base.values()
        if base is None:
            return None
        return base | {Fraction(0)}

    def limit(self):
        if self.set.finiteness() is True:
            return Fraction(0)
        if self.set.cofiniteness() is True:
            return self.base.limit()
        return None

    def describe(self):
        return f"{self.base.describe()} on {self.set.describe()}"

    def to_json(self):
        return {"kind": "onSet", "set": self.set.to_json(), "base": self.base.to_json()}


@dataclass(frozen=True)
class RampOn(Seq):
    """n·(|y(n)| + 1) on ``set``, 0 elsewhere: outgrows every multiple of |y| along the set."""

    set: SetExpr
    y: Seq

    def at(self, n):
        if not self.set.contains(n):
            return Fraction(0)
        return n * (abs(self.y.at(n)) + 1)

    def exceedance(self, eta, eps):
        # x(n) >= n on the set, so only indices n <= |eta| + eps can be close to eta
        reach = math.floor(abs(eta) + eps)
        close = tuple(n for n in self.set.iter_prefix(reach) if not _outside(self.at(n), eta, eps))
        inside = Intersect((self.set, Complement(Finite(close))))
        if _outside(Fraction(0), eta, eps):
            return Union((inside, Complement(self.set))).simplify()
        return inside.simplify()

    def escape(self):
        return self.set

    def limit(self):
        if self.set.finiteness() is True:
            return Fraction(0)
        return None

    def describe(self):
        return f"n·(|{self.y.describe()}|+1) on {self.set.describe()}"

    def to_json(self):
        return {"kind": "rampOn", "set": self.set.to_json(), "y": self.y.to_json()}


@dataclass(frozen=True)
class Scaled(Seq):
    factor: Fraction
    base: Seq

    def __post_init__(self):
        object.__setattr__(self, "factor", Fraction(self.factor))

    def at(self, n):
        return self.factor * self.base.at(n)

    def exceedance(self, eta, eps):
        if self.factor == 0:
            return OMEGA if _outside(Fraction(0), eta, eps) else EMPTY
        return self.base.exceedance(eta / self.factor, eps / abs(self.factor))

    def escape(self):
        return self.base.escape() if self.factor != 0 else None

    def values(self):
        base = self.base.values()
        if base is None:
            return None
        return frozenset(self.factor * v for v in base)

    def limit(self):
        base = self.base.limit()
        return None if base is None else self.factor * base

    def describe(self):
        return f"{self.factor}·{self.base.describe()}"

    def to_json(self):
        return {"kind": "scaled", "factor": self.factor, "base": self.base.to_json()}


def indicator_seq(s):
    """The 0/1 indicator sequence of a set."""
    return OnSet(s, Named("constant", Fraction(1)))


def evaluate(x, n):
    """Value x(n); Overlay patches win at patched indices."""
    return x.at(n)


def exceedance_set(x, eta, eps):
    """
    Exact symbolic set {n : |x(n) - eta| > eps}.

    Args:
        x (Seq): The sequence
        eta (Fraction): Candidate limit
        eps (Fraction): Tolerance, eps >= 0 (eps = 0 gives the support when eta = 0)

    Returns:
        SetExpr: The simplified exceedance set
    """
    eta, eps = Fraction(eta), Fraction(eps)
    if eps < 0:
        raise InvalidSpec(f"Tolerance must be nonnegative, got {eps}")
    return x.exceedance(eta, eps).simplify()


def escape_set(x):
    return x.escape()


def support_set(x):
    """Exact support {n : x(n) != 0} as a SetExpr."""
    return exceedance_set(x, Fraction(0), Fraction(0))


def support_prefix(x, N):
    """
    Support of x below the horizon.

    Args:
        x (Seq): The sequence
        N (int): Index horizon

    Returns:
        Finite: {n <= N : x(n) != 0}
    """
    return Finite(tuple(support_set(x).iter_prefix(N)))


def as_finite_support(x):
    """FiniteSupport form of x when its support is finite and enumerable, else None."""
    if isinstance(x, FiniteSupport):
        return x
    support = support_set(x)
    if isinstance(support, Finite):
        indices = support.elems
    elif isinstance(support, Range):
        indices = range(support.lo, support.hi + 1)
    else:
        return None
    return FiniteSupport(tuple((n, x.at(n)) for n in indices))


def _rational(value, what):
    try:
        return parse_rational(value)
    except ValueError as e:
        raise InvalidSpec(f"Bad rational for {what}: {e}") from e


def _entries(raw):
    if not isinstance(raw, list):
        raise InvalidSpec("Sequence entries must be a list of [index, value] pairs")
    pairs = []
    for item in raw:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise InvalidSpec(f"Bad sequence entry: {item!r}")
        pairs.append((int(item[0]), _rational(item[1], "sequence entry")))
    return FiniteSupport(tuple(pairs))


def seq_from_json(doc):
    """
    Build a Seq from its JSON encoding.

    Raises:
        InvalidSpec: If the document is malformed
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InvalidSpec(f"Sequence must be an object with 'kind', got {doc!r}")
    kind = doc["kind"]
    try:
        if kind == "finiteSupport":
            return _entries(doc.get("entries", []))
        if kind == "named":
            rule = doc["rule"]
            return Named(rule, _rational(doc.get("c", 0), "constant"), int(doc.get("k", 0)))
        if kind == "overlay":
            return Overlay(seq_from_json(doc["base"]), _entries(doc.get("patch", [])))
        if kind == "onSet":
            return OnSet(set_from_json(doc["set"]), seq_from_json(doc["base"]))
        if kind == "scaled":
            return Scaled(_rational(doc["factor"], "factor"), seq_from_json(doc["base"]))
        if kind == "rampOn":
            return RampOn(set_from_json(doc["set"]), seq_from_json(doc["y"]))
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidSpec(f"Malformed {kind!r} sequence: {e}") from e
    raise InvalidSpec(f"Unknown sequence kind: {kind!r}")
