#!/usr/bin/env python3
"""
Set Expressions

This module implements a small symbolic algebra of subsets of ω (the
nonnegative integers, 0 included). Every expression answers membership
exactly, enumerates and counts its elements below a horizon, and carries
enough structure (closed forms, density bounds, counting exponents) for the
ideal membership fast paths to issue certified verdicts.

Values are immutable; every operation is pure.
"""

from __future__ import annotations

import heapq
import logging
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Tuple

from ..utils.errors import InvalidSpec

# Configure module logger
logger = logging.getLogger(__name__)

SPARSE_RULES = ("squares", "powersOfTwo", "factorials")

# Ranges larger than this stay symbolic inside intersections
RANGE_EXPANSION_LIMIT = 1_000_000

ZERO = Fraction(0)
ONE = Fraction(1)


def nu2(n):
    """2-adic valuation with the convention nu2(0) = 0."""
    if n == 0:
        return 0
    return (n & -n).bit_length() - 1


def _is_factorial(n):
    value, j = 1, 1
    while value < n:
        j += 1
        value *= j
    return value == n


def _factorial_values() -> Iterator[int]:
    # distinct values of j!, i.e. 1, 2, 6, 24, ...
    value, j = 1, 1
    while True:
        yield value
        j += 1
        value *= j


def _power_residue_cycle(d):
    """Residues mod d attained by 2**j for infinitely many j."""
    seen = {}
    residue, j = 1 % d, 0
    while residue not in seen:
        seen[residue] = j
        residue = (residue * 2) % d
        j += 1
    start = seen[residue]
    return {r for r, idx in seen.items() if idx >= start}


def sparse_meets_progression(rule, a, d):
    """
    Decide whether RuleSparse(rule) meets ArithProg(a, d) in infinitely many points.

    Args:
        rule (str): One of SPARSE_RULES
        a (int): Progression offset
        d (int): Progression step

    Returns:
        bool: True iff the intersection is infinite
    """
    target = a % d
    if rule == "squares":
        return any((r * r) % d == target for r in range(d))
    if rule == "powersOfTwo":
        return target in _power_residue_cycle(d)
    if rule == "factorials":
        # j! is divisible by d for every j >= d
        return target == 0
    raise InvalidSpec(f"Unknown sparse rule: {rule}")


def sparse_meets_level(rule, k):
    """Decide whether RuleSparse(rule) has infinitely many elements n with nu2(n) = k."""
    if rule == "squares":
        # nu2(m^2) = 2*nu2(m), and 4^j * odd^2 gives infinitely many at each even level
        return k % 2 == 0
    if rule in ("powersOfTwo", "factorials"):
        # one power of two per level; nu2(j!) is nondecreasing and unbounded
        return False
    raise InvalidSpec(f"Unknown sparse rule: {rule}")


class SetExpr:
    """Base class for symbolic subsets of ω."""

    def contains(self, n: int) -> bool:
        raise NotImplementedError

    def iter_prefix(self, N: int) -> Iterator[int]:
        """Yield the elements n <= N in increasing order."""
        return (n for n in range(N + 1) if self.contains(n))

    def count_prefix(self, N: int) -> int:
        if N < 0:
            return 0
        return sum(1 for _ in self.iter_prefix(N))

    def first_at_least(self, m: int, limit: int) -> Optional[int]:
        """Least element n with m <= n <= limit, or None."""
        for n in range(max(m, 0), limit + 1):
            if self.contains(n):
                return n
        return None

    def finiteness(self) -> Optional[bool]:
        """True if provably finite, False if provably infinite, None if undecided."""
        return None

    def cofiniteness(self) -> Optional[bool]:
        """True if provably cofinite, False if provably not, None if undecided."""
        return None

    def density_bounds(self) -> Tuple[Fraction, Fraction, str]:
        """Certified (lower, upper, reason) bounds on lower and upper asymptotic density."""
        return ZERO, ONE, "no density information"

    def counting_exponent(self) -> Tuple[Fraction, str]:
        """Certified alpha with count_prefix(N) = O(N**alpha)."""
        return ONE, "trivial bound"

    def enclosing(self) -> Optional["SetExpr"]:
        """A set known to contain this one when it was built by thinning another."""
        return None

    def member_certificate(self, ideal) -> Optional[str]:
        """Why the set belongs to ``ideal`` by construction, if it does."""
        return None

    def simplify(self) -> "SetExpr":
        return self

    def describe(self) -> str:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def __str__(self):
        return self.describe()


@dataclass(frozen=True)
class Finite(SetExpr):
    elems: Tuple[int, ...] = ()

    def __post_init__(self):
        elems = tuple(self.elems)
        object.__setattr__(self, "elems", elems)
        for value in elems:
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise InvalidSpec(f"Finite set elements must be naturals, got {value!r}")
        if any(x >= y for x, y in zip(elems, elems[1:])):
            raise InvalidSpec("Finite set elements must be sorted and distinct")

    @classmethod
    def of(cls, values):
        return cls(tuple(sorted(set(values))))

    def contains(self, n):
        i = bisect_left(self.elems, n)
        return i < len(self.elems) and self.elems[i] == n

    def iter_prefix(self, N):
        return iter(self.elems[:bisect_right(self.elems, N)])

    def count_prefix(self, N):
        return bisect_right(self.elems, N)

    def first_at_least(self, m, limit):
        i = bisect_left(self.elems, m)
        if i < len(self.elems) and self.elems[i] <= limit:
            return self.elems[i]
        return None

    def finiteness(self):
        return True

    def cofiniteness(self):
        return False

    def density_bounds(self):
        return ZERO, ZERO, "finite set"

    def counting_exponent(self):
        return ZERO, "finite set"

    def describe(self):
        if not self.elems:
            return "∅"
        shown = ",".join(str(e) for e in self.elems[:8])
        return "{" + shown + (",…" if len(self.elems) > 8 else "") + "}"

    def to_json(self):
        return {"kind": "finite", "elems": list(self.elems)}


@dataclass(frozen=True)
class Range(SetExpr):
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0:
            raise InvalidSpec(f"Range lower end must be natural, got {self.lo}")

    def contains(self, n):
        return self.lo <= n <= self.hi

    def iter_prefix(self, N):
        return iter(range(self.lo, min(self.hi, N) + 1))

    def count_prefix(self, N):
        return max(0, min(self.hi, N) - self.lo + 1)

    def first_at_least(self, m, limit):
        n = max(m, self.lo)
        return n if n <= min(self.hi, limit) else None

    def finiteness(self):
        return True

    def cofiniteness(self):
        return False

    def density_bounds(self):
        return ZERO, ZERO, "finite interval"

    def counting_exponent(self):
        return ZERO, "finite interval"

    def simplify(self):
        if self.hi < self.lo:
            return Finite(())
        return self

    def describe(self):
        return f"[{self.lo}..{self.hi}]"

    def to_json(self):
        return {"kind": "range", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class ArithProg(SetExpr):
    """{a + d*n : n in ω}."""

    a: int
    d: int

    def __post_init__(self):
        if self.a < 0 or self.d < 1:
            raise InvalidSpec(f"ArithProg needs a >= 0 and d >= 1, got a={self.a}, d={self.d}")

    def contains(self, n):
        return n >= self.a and (n - self.a) % self.d == 0

    def iter_prefix(self, N):
        return iter(range(self.a, N + 1, self.d))

    def count_prefix(self, N):
        if N < self.a:
            return 0
        return (N - self.a) // self.d + 1

    def first_at_least(self, m, limit):
        if m <= self.a:
            n = self.a
        else:
            n = self.a + -(-(m - self.a) // self.d) * self.d
        return n if n <= limit else None

    def finiteness(self):
        return False

    def cofiniteness(self):
        return self.d == 1

    def density_bounds(self):
        density = Fraction(1, self.d)
        return density, density, f"AP density 1/d = 1/{self.d}"

    def describe(self):
        return f"AP({self.a},{self.d})"

    def to_json(self):
        return {"kind": "ap", "a": self.a, "d": self.d}


@dataclass(frozen=True)
class RuleSparse(SetExpr):
    rule: str

    def __post_init__(self):
        if self.rule not in SPARSE_RULES:
            raise InvalidSpec(f"Unknown sparse rule {self.rule!r}, expected one of {SPARSE_RULES}")

    def contains(self, n):
        if n < 0:
            return False
        if self.rule == "squares":
            return math.isqrt(n) ** 2 == n
        if self.rule == "powersOfTwo":
            return n >= 1 and n & (n - 1) == 0
        return _is_factorial(n)

    def iter_prefix(self, N):
        if self.rule == "squares":
            return (r * r for r in range(math.isqrt(N) + 1)) if N >= 0 else iter(())
        if self.rule == "powersOfTwo":
            return (1 << j for j in range(max(N, 0).bit_length()))
        return (v for v in self._factorials_upto(N))

    @staticmethod
    def _factorials_upto(N):
        for value in _factorial_values():
            if value > N:
                return
            yield value

    def count_prefix(self, N):
        if N < 0:
            return 0
        if self.rule == "squares":
            return math.isqrt(N) + 1
        if self.rule == "powersOfTwo":
            return N.bit_length()
        return sum(1 for _ in self._factorials_upto(N))

    def first_at_least(self, m, limit):
        m = max(m, 0)
        if self.rule == "squares":
            root = math.isqrt(m)
            if root * root < m:
                root += 1
            n = root * root
        elif self.rule == "powersOfTwo":
            n = 1 if m <= 1 else 1 << (m - 1).bit_length()
        else:
            n = next(v for v in _factorial_values() if v >= m)
        return n if n <= limit else None

    def finiteness(self):
        return False

    def cofiniteness(self):
        return False

    def density_bounds(self):
        return ZERO, ZERO, self.counting_exponent()[1]

    def counting_exponent(self):
        if self.rule == "squares":
            return Fraction(1, 2), "counting function O(√N)"
        if self.rule == "powersOfTwo":
            return ZERO, "counting function O(log₂N)"
        return ZERO, "counting function O(log N / log log N) (inverse factorial)"

    def describe(self):
        return self.rule

    def to_json(self):
        return {"kind": "sparse", "rule": self.rule}


@dataclass(frozen=True)
class Nu2Level(SetExpr):
    """{n >= 1 : nu2(n) = k}, plus 0 when k = 0."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise InvalidSpec(f"Nu2Level needs k >= 0, got {self.k}")

    def contains(self, n):
        if n < 0:
            return False
        return nu2(n) == self.k

    def iter_prefix(self, N):
        if N < 0:
            return iter(())
        step = 1 << self.k
        head = [0] if self.k == 0 else []
        return iter(head + list(range(step, N + 1, 2 * step)))

    def count_prefix(self, N):
        if N < 0:
            return 0
        count = (N >> self.k) - (N >> (self.k + 1))
        return count + (1 if self.k == 0 else 0)

    def first_at_least(self, m, limit):
        if self.k == 0 and m <= 0:
            return 0 if limit >= 0 else None
        step = 1 << self.k
        q = max(-(-m // step), 1)
        if q % 2 == 0:
            q += 1
        n = step * q
        return n if n <= limit else None

    def finiteness(self):
        return False

    def cofiniteness(self):
        return False

    def density_bounds(self):
        density = Fraction(1, 1 << (self.k + 1))
        return density, density, f"2-adic level {self.k} density {density}"

    def describe(self):
        return f"ν₂={self.k}"

    def to_json(self):
        return {"kind": "nu2", "k": self.k}


def _is_empty(s):
    return (isinstance(s, Finite) and not s.elems) or (isinstance(s, Range) and s.hi < s.lo)


def _is_omega(s):
    return isinstance(s, Complement) and _is_empty(s.arg)


def _intersect_progressions(p, q):
    """Closed-form intersection of two arithmetic progressions (None if empty)."""
    g = math.gcd(p.d, q.d)
    if (q.a - p.a) % g:
        return None
    lcm = p.d // g * q.d
    step = q.d // g
    inverse = pow(p.d // g, -1, step) if step > 1 else 0
    x0 = (p.a + p.d * (((q.a - p.a) // g * inverse) % step)) % lcm
    start = max(p.a, q.a)
    if x0 < start:
        x0 += -(-(start - x0) // lcm) * lcm
    return ArithProg(x0, lcm)


def within(s, t):
    """True when s ⊆ t follows from how s was built (thinning chains, progressions)."""
    current = s
    while current is not None:
        if current == t:
            return True
        if isinstance(current, ArithProg) and isinstance(t, ArithProg):
            if current.d % t.d == 0 and t.contains(current.a):
                return True
        current = current.enclosing()
    return False


@dataclass(frozen=True)
class Union(SetExpr):
    args: Tuple[SetExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def contains(self, n):
        return any(arg.contains(n) for arg in self.args)

    def iter_prefix(self, N):
        last = None
        for n in heapq.merge(*(arg.iter_prefix(N) for arg in self.args)):
            if n != last:
                yield n
                last = n

    def first_at_least(self, m, limit):
        hits = [h for h in (arg.first_at_least(m, limit) for arg in self.args) if h is not None]
        return min(hits) if hits else None

    def finiteness(self):
        flags = [arg.finiteness() for arg in self.args]
        if all(flag is True for flag in flags):
            return True
        if any(flag is False for flag in flags):
            return False
        return None

    def cofiniteness(self):
        if any(arg.cofiniteness() is True for arg in self.args):
            return True
        _, hi, _ = self.density_bounds()
        if hi < 1:
            return False
        return None

    def density_bounds(self):
        bounds = [arg.density_bounds() for arg in self.args]
        if not bounds:
            return ZERO, ZERO, "empty union"
        lo = max(b[0] for b in bounds)
        hi = min(ONE, sum((b[1] for b in bounds), ZERO))
        if lo > 0:
            reason = max(bounds, key=lambda b: b[0])[2]
        else:
            reason = "union of: " + "; ".join(b[2] for b in bounds)
        return lo, hi, reason

    def counting_exponent(self):
        exps = [arg.counting_exponent() for arg in self.args]
        if not exps:
            return ZERO, "empty union"
        alpha, reason = max(exps, key=lambda e: e[0])
        return alpha, reason

    def simplify(self):
        flat = []
        for arg in (a.simplify() for a in self.args):
            if isinstance(arg, Union):
                flat.extend(arg.args)
            else:
                flat.append(arg)
        if any(_is_omega(arg) for arg in flat):
            return Complement(Finite(()))
        finite_elems = set()
        rest = []
        for arg in flat:
            if _is_empty(arg):
                continue
            if isinstance(arg, Finite):
                finite_elems.update(arg.elems)
            elif arg not in rest:
                rest.append(arg)
        if finite_elems:
            rest.append(Finite.of(finite_elems))
        if not rest:
            return Finite(())
        if len(rest) == 1:
            return rest[0]
        return Union(tuple(rest))

    def describe(self):
        return "(" + " ∪ ".join(arg.describe() for arg in self.args) + ")"

    def to_json(self):
        return {"kind": "union", "args": [arg.to_json() for arg in self.args]}


def _driver_key(arg):
    composite = isinstance(arg, (Complement, Union, Intersect))
    return (composite, arg.density_bounds()[1])


@dataclass(frozen=True)
class Intersect(SetExpr):
    args: Tuple[SetExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def contains(self, n):
        return all(arg.contains(n) for arg in self.args)

    def _split(self):
        ordered = sorted(self.args, key=_driver_key)
        return ordered[0], ordered[1:]

    def iter_prefix(self, N):
        if not self.args:
            return iter(range(N + 1))
        driver, others = self._split()
        return (n for n in driver.iter_prefix(N) if all(o.contains(n) for o in others))

    def first_at_least(self, m, limit):
        if not self.args:
            return m if m <= limit else None
        driver, others = self._split()
        candidate = driver.first_at_least(m, limit)
        while candidate is not None:
            if all(o.contains(candidate) for o in others):
                return candidate
            candidate = driver.first_at_least(candidate + 1, limit)
        return None

    def finiteness(self):
        flags = [arg.finiteness() for arg in self.args]
        if any(flag is True for flag in flags):
            return True
        # cofinite arguments do not change infiniteness
        relevant = [arg for arg in self.args if arg.cofiniteness() is not True]
        if not relevant:
            return False
        if len(relevant) == 1:
            return relevant[0].finiteness()
        sparse = [arg for arg in relevant if isinstance(arg, RuleSparse)]
        progs = [arg for arg in relevant if isinstance(arg, ArithProg)]
        levels = [arg for arg in relevant if isinstance(arg, Nu2Level)]
        if len(relevant) == 2 and len(sparse) == 1 and len(progs) == 1:
            return not sparse_meets_progression(sparse[0].rule, progs[0].a, progs[0].d)
        if len(relevant) == 2 and len(sparse) == 1 and len(levels) == 1:
            return not sparse_meets_level(sparse[0].rule, levels[0].k)
        lo, _, _ = self.density_bounds()
        if lo > 0:
            return False
        return None

    def cofiniteness(self):
        flags = [arg.cofiniteness() for arg in self.args]
        if all(flag is True for flag in flags):
            return True
        if any(flag is False for flag in flags):
            return False
        return None

    def density_bounds(self):
        bounds = [arg.density_bounds() for arg in self.args]
        if not bounds:
            return ONE, ONE, "ω"
        lo = max(ZERO, sum((b[0] for b in bounds), ZERO) - (len(bounds) - 1))
        hi = min(b[1] for b in bounds)
        if hi == 0:
            reason = min(bounds, key=lambda b: b[1])[2]
        elif lo > 0:
            reason = f"intersection with lower density at least {lo}"
        else:
            reason = "intersection of: " + "; ".join(b[2] for b in bounds)
        return lo, hi, reason

    def counting_exponent(self):
        exps = [arg.counting_exponent() for arg in self.args]
        if not exps:
            return ONE, "ω"
        return min(exps, key=lambda e: e[0])

    def simplify(self):
        flat = []
        for arg in (a.simplify() for a in self.args):
            if isinstance(arg, Intersect):
                flat.extend(arg.args)
            else:
                flat.append(arg)
        if any(_is_empty(arg) for arg in flat):
            return Finite(())
        flat = [arg for arg in flat if not _is_omega(arg)]
        unique = []
        for arg in flat:
            if arg not in unique:
                unique.append(arg)
        flat = [t for t in unique if not any(s is not t and within(s, t) for s in unique)]

        bounded = [arg for arg in flat if isinstance(arg, Finite)]
        bounded += [arg for arg in flat if isinstance(arg, Range)
                    and arg.hi - arg.lo < RANGE_EXPANSION_LIMIT]
        if bounded:
            base = bounded[0]
            others = [arg for arg in flat if arg is not base]
            candidates = base.elems if isinstance(base, Finite) else range(base.lo, base.hi + 1)
            return Finite(tuple(n for n in candidates if all(o.contains(n) for o in others)))

        progs = [arg for arg in flat if isinstance(arg, ArithProg)]
        if len(progs) > 1:
            merged = progs[0]
            for prog in progs[1:]:
                merged = _intersect_progressions(merged, prog)
                if merged is None:
                    return Finite(())
            flat = [arg for arg in flat if not isinstance(arg, ArithProg)] + [merged]

        levels = {arg.k for arg in flat if isinstance(arg, Nu2Level)}
        if len(levels) > 1:
            return Finite(())

        if not flat:
            return Complement(Finite(()))
        if len(flat) == 1:
            return flat[0]
        return Intersect(tuple(flat))

    def describe(self):
        return "(" + " ∩ ".join(arg.describe() for arg in self.args) + ")"

    def to_json(self):
        return {"kind": "intersect", "args": [arg.to_json() for arg in self.args]}


@dataclass(frozen=True)
class Complement(SetExpr):
    """ω minus the inner set."""

    arg: SetExpr

    def contains(self, n):
        return n >= 0 and not self.arg.contains(n)

    def count_prefix(self, N):
        if N < 0:
            return 0
        return N + 1 - self.arg.count_prefix(N)

    def finiteness(self):
        return self.arg.cofiniteness()

    def cofiniteness(self):
        return self.arg.finiteness()

    def density_bounds(self):
        lo, hi, reason = self.arg.density_bounds()
        return ONE - hi, ONE - lo, f"complement of ({reason}) has lower density {ONE - hi}"

    def counting_exponent(self):
        if self.finiteness() is True:
            return ZERO, "finite complement of a cofinite set"
        return ONE, "trivial bound"

    def simplify(self):
        inner = self.arg.simplify()
        if isinstance(inner, Complement):
            return inner.arg
        return Complement(inner)

    def describe(self):
        if _is_empty(self.arg):
            return "ω"
        return f"ω∖{self.arg.describe()}"

    def to_json(self):
        return {"kind": "complement", "arg": self.arg.to_json()}


OMEGA = Complement(Finite(()))
EMPTY = Finite(())


def indicator(s, n):
    """Exact membership test n ∈ s."""
    return s.contains(n)


def enumerate_prefix(s, N):
    """Sorted list of all n <= N belonging to s."""
    return list(s.iter_prefix(N))


def count_prefix(s, N):
    """|{n <= N : n ∈ s}|."""
    return s.count_prefix(N)


def take(s, count, limit):
    """
    First ``count`` elements of s (fewer if the scan reaches ``limit``).

    Args:
        s (SetExpr): The set to enumerate
        count (int): Number of elements wanted
        limit (int): Largest index scanned

    Returns:
        list: The increasing enumeration s_0 < s_1 < ... found
    """
    found = []
    candidate = s.first_at_least(0, limit)
    while candidate is not None and len(found) < count:
        found.append(candidate)
        candidate = s.first_at_least(candidate + 1, limit)
    return found


def from_json(doc):
    """
    Build a SetExpr from its JSON encoding.

    Args:
        doc (dict): The encoded set

    Returns:
        SetExpr: The decoded set

    Raises:
        InvalidSpec: If the document is malformed
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InvalidSpec(f"Set expression must be an object with 'kind', got {doc!r}")
    kind = doc["kind"]
    try:
        if kind == "finite":
            return Finite(tuple(doc.get("elems", [])))
        if kind == "range":
            return Range(int(doc["lo"]), int(doc["hi"]))
        if kind == "ap":
            return ArithProg(int(doc.get("a", 0)), int(doc["d"]))
        if kind == "sparse":
            return RuleSparse(doc["rule"])
        if kind == "nu2":
            return Nu2Level(int(doc["k"]))
        if kind == "union":
            return Union(tuple(from_json(arg) for arg in doc["args"]))
        if kind == "intersect":
            return Intersect(tuple(from_json(arg) for arg in doc["args"]))
        if kind == "complement":
            return Complement(from_json(doc["arg"]))
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidSpec(f"Malformed {kind!r} set expression: {e}") from e
    raise InvalidSpec(f"Unknown set kind: {kind!r}")
