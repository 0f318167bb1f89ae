#!/usr/bin/env python3
"""
Summability Matrices

Nonnegative infinite matrices given as row generators. Each variant exposes
its entries, a bound on the row support (or a summable tail bound for rows
with infinite support), the row maxima used by the tallness criterion and the
column suprema used by the tall-subset greedy.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from ..ideals.verdicts import TriState, persistent_level
from ..utils.converters import parse_rational
from ..utils.errors import InvalidSpec

# Configure module logger
logger = logging.getLogger(__name__)

# Infinite rows are truncated once the declared tail bound drops below 2**-TAIL_BITS
TAIL_BITS = 64

EXPLICIT_TAILS = ("repeatLast", "cesaroTail")


class MatrixSpec:
    kind = ""

    def entry(self, n: int, k: int) -> Fraction:
        raise NotImplementedError

    def row_support_bound(self, n: int) -> Optional[int]:
        """Last column that can be nonzero in row n, or None for infinite rows."""
        raise NotImplementedError

    def tail_bound(self, n: int, K: int) -> Fraction:
        """Upper bound on the sum of a_{n,k} over k > K (infinite rows only)."""
        return Fraction(0)

    def row_entries(self, n: int, K: Optional[int] = None):
        """Nonzero (k, a_{n,k}) with k <= K (K defaults to the support bound)."""
        bound = self.row_support_bound(n)
        if bound is None:
            bound = n + TAIL_BITS if K is None else K
        elif K is not None:
            bound = min(bound, K)
        return [(k, a) for k in range(bound + 1) for a in (self.entry(n, k),) if a]

    def max_entry(self, n: int) -> Fraction:
        entries = self.row_entries(n)
        return max((a for _, a in entries), default=Fraction(0))

    def argmax_column(self, n: int) -> Optional[int]:
        entries = self.row_entries(n)
        if not entries:
            return None
        top = max(a for _, a in entries)
        return min(k for k, a in entries if a == top)

    def column_sup(self, k: int) -> Fraction:
        """sup_n a_{n,k}."""
        raise NotImplementedError

    def row_weight(self, n, s):
        """Sum of a_{n,k} over k in s (row-truncated for infinite rows)."""
        return sum((a for k, a in self.row_entries(n) if s.contains(k)), Fraction(0))

    def describe(self):
        return self.kind

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class Cesaro(MatrixSpec):
    kind = "cesaro"

    def entry(self, n, k):
        return Fraction(1, n + 1) if 0 <= k <= n else Fraction(0)

    def row_support_bound(self, n):
        return n

    def max_entry(self, n):
        return Fraction(1, n + 1)

    def argmax_column(self, n):
        return 0

    def column_sup(self, k):
        return Fraction(1, k + 1)

    def row_weight(self, n, s):
        return Fraction(s.count_prefix(n), n + 1)


@dataclass(frozen=True)
class Identity(MatrixSpec):
    kind = "identity"

    def entry(self, n, k):
        return Fraction(1 if n == k else 0)

    def row_support_bound(self, n):
        return n

    def row_entries(self, n, K=None):
        return [(n, Fraction(1))] if K is None or n <= K else []

    def max_entry(self, n):
        return Fraction(1)

    def argmax_column(self, n):
        return n

    def column_sup(self, k):
        return Fraction(1)

    def row_weight(self, n, s):
        return Fraction(1 if s.contains(n) else 0)


@dataclass(frozen=True)
class ShiftedGeometric(MatrixSpec):
    """a_{n,k} = 2^-(k-n+1) for k >= n: regular, every row infinite."""

    kind = "shiftedGeometric"

    def entry(self, n, k):
        return Fraction(1, 1 << (k - n + 1)) if k >= n else Fraction(0)

    def row_support_bound(self, n):
        return None

    def tail_bound(self, n, K):
        if K < n:
            return Fraction(1)
        return Fraction(1, 1 << (K - n + 1))

    def row_entries(self, n, K=None):
        last = n + TAIL_BITS if K is None else K
        return [(k, Fraction(1, 1 << (k - n + 1))) for k in range(n, last + 1)]

    def max_entry(self, n):
        return Fraction(1, 2)

    def argmax_column(self, n):
        return n

    def column_sup(self, k):
        return Fraction(1, 2)


@dataclass(frozen=True)
class ExplicitRows(MatrixSpec):
    """A finite table of rows followed by a tail rule."""

    rows: Tuple[Tuple[Fraction, ...], ...]
    tail: str = "repeatLast"
    kind = "rows"

    def __post_init__(self):
        rows = tuple(tuple(Fraction(a) for a in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise InvalidSpec("ExplicitRows needs at least one row")
        if self.tail not in EXPLICIT_TAILS:
            raise InvalidSpec(f"Unknown row tail {self.tail!r}, expected one of {EXPLICIT_TAILS}")
        if any(a < 0 for row in rows for a in row):
            raise InvalidSpec("Matrix entries must be nonnegative")
        if self.tail == "repeatLast" and sum(rows[-1]) == 0:
            raise InvalidSpec("A repeated zero row makes every set null")

    @property
    def table_rows(self):
        return len(self.rows)

    def _row(self, n):
        if n < len(self.rows):
            return self.rows[n]
        if self.tail == "repeatLast":
            return self.rows[-1]
        return None

    def entry(self, n, k):
        row = self._row(n)
        if row is None:
            return Fraction(1, n + 1) if 0 <= k <= n else Fraction(0)
        return row[k] if 0 <= k < len(row) else Fraction(0)

    def row_support_bound(self, n):
        row = self._row(n)
        return n if row is None else len(row) - 1

    def max_entry(self, n):
        row = self._row(n)
        if row is None:
            return Fraction(1, n + 1)
        return max(row, default=Fraction(0))

    def column_sup(self, k):
        table = max((row[k] for row in self.rows if k < len(row)), default=Fraction(0))
        if self.tail == "cesaroTail":
            return max(table, Fraction(1, max(k, len(self.rows)) + 1))
        return table

    def row_weight(self, n, s):
        row = self._row(n)
        if row is None:
            return Fraction(s.count_prefix(n), n + 1)
        return sum((a for k, a in enumerate(row) if a and s.contains(k)), Fraction(0))

    def describe(self):
        return f"{len(self.rows)} explicit rows + {self.tail}"

    def to_json(self):
        return {"kind": self.kind, "rows": [list(row) for row in self.rows], "tail": self.tail}


def matrix_from_json(doc):
    """
    Build a MatrixSpec from its JSON encoding.

    Raises:
        InvalidSpec: If the document is malformed
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InvalidSpec(f"Matrix must be an object with 'kind', got {doc!r}")
    kind = doc["kind"]
    if kind == "cesaro":
        return Cesaro()
    if kind == "identity":
        return Identity()
    if kind == "shiftedGeometric":
        return ShiftedGeometric()
    if kind == "rows":
        try:
            rows = tuple(tuple(parse_rational(a) for a in row) for row in doc["rows"])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidSpec(f"Malformed matrix rows: {e}") from e
        return ExplicitRows(rows, doc.get("tail", "repeatLast"))
    raise InvalidSpec(f"Unknown matrix kind: {kind!r}")


def check_regularity(a, params):
    """
    Check the Silverman-Toeplitz conditions for a nonnegative matrix.

    Named variants are certified symbolically. A repeated explicit row has no
    closed form, so the row-sum and column traces are returned with Unknown.

    Args:
        a (MatrixSpec): The matrix
        params (HorizonParams): Horizon parameters

    Returns:
        TriState: In when regular
    """
    if isinstance(a, Cesaro):
        return TriState.inside("row sums exactly 1, column k entries 1/(n+1) -> 0")
    if isinstance(a, Identity):
        return TriState.inside("row sums exactly 1, column n hits 1 once then 0")
    if isinstance(a, ShiftedGeometric):
        return TriState.inside("row sums exactly 1, column k vanishes for n > k")
    if a.tail == "cesaroTail":
        return TriState.inside(
            f"{a.table_rows} explicit rows followed by Cesàro rows (row sums 1, columns -> 0)")

    upto = min(params.rows, a.table_rows + params.rows // 4 + 1)
    row_sums = [(n, sum((v for _, v in a.row_entries(n)), Fraction(0))) for n in range(upto)]
    last = a.rows[-1]
    columns = [(k, last[k]) for k in range(len(last))]
    logger.info(f"Regularity of {a.describe()} undecided: no closed form for the repeated row")
    return TriState.unknown(
        row_sums + columns,
        certificate=f"row sums over {upto} rows then limits of {len(last)} columns (repeated row)")


def pringsheim_tau(a, n0, horizon):
    """tau_{n0} = max a_{n,k} over n0 <= n <= horizon and k >= n0."""
    if isinstance(a, Cesaro):
        return Fraction(1, n0 + 1)
    if isinstance(a, Identity):
        return Fraction(1)
    if isinstance(a, ShiftedGeometric):
        return Fraction(1, 2)
    best = Fraction(0)
    for n in range(n0, min(horizon, a.table_rows - 1) + 1):
        best = max([best] + [v for k, v in a.row_entries(n) if k >= n0])
    if horizon >= max(n0, a.table_rows):
        if a.tail == "repeatLast":
            best = max([best] + list(a.rows[-1][n0:]))
        else:
            best = max(best, Fraction(1, max(n0, a.table_rows) + 1))
    return best


def pringsheim_zero_estimate(a, params):
    """
    Estimate whether the Pringsheim limit of the entries is 0.

    Args:
        a (MatrixSpec): The matrix
        params (HorizonParams): Horizon parameters

    Returns:
        TriState: In with the tau trace, Out with the persistent level, or Unknown
    """
    starts = list(range(params.rows))
    trace = [(n0, pringsheim_tau(a, n0, params.N)) for n0 in starts]
    if isinstance(a, Cesaro) or (isinstance(a, ExplicitRows) and a.tail == "cesaroTail"):
        return TriState(
            "In", "closed form tau_{n0} = 1/(n0+1) -> 0 beyond the explicit rows", tuple(trace))
    if isinstance(a, Identity):
        return TriState.outside("diagonal entries a_{n,n} = 1: persistent level delta = 1")
    if isinstance(a, ShiftedGeometric):
        return TriState.outside("diagonal entries a_{n,n} = 1/2: persistent level delta = 1/2")

    later = [tau for _, tau in trace[len(trace) // 2:]]
    delta = persistent_level(later, params.recurrence) / 2
    if delta > params.epsilon and trace[-1][1] >= delta:
        return TriState("Out", f"entry level delta = {delta} recurs beyond every tested n0", tuple(trace))
    return TriState.unknown(trace)
