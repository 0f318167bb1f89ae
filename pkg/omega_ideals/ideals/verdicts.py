"""
Verdict types

Tri-state answers (In / Out / Unknown) and tallness reports. An In or Out
verdict always names the rule that produced it; an Unknown verdict carries
the numeric trace that was inspected instead.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Tuple

IN = "In"
OUT = "Out"
UNKNOWN = "Unknown"

TALL = "Tall"
NOT_TALL = "NotTall"


@dataclass(frozen=True)
class TriState:
    verdict: str
    certificate: Optional[str] = None
    trace: Tuple[Tuple[int, Fraction], ...] = ()
    eta: Optional[Fraction] = None

    @classmethod
    def inside(cls, certificate, eta=None):
        return cls(IN, certificate, (), eta)

    @classmethod
    def outside(cls, certificate):
        return cls(OUT, certificate)

    @classmethod
    def unknown(cls, trace=(), certificate=None):
        return cls(UNKNOWN, certificate, tuple(trace))

    @property
    def decided(self):
        return self.verdict != UNKNOWN

    def annotate(self, prefix):
        """Same verdict with ``prefix`` prepended to the certificate."""
        if self.certificate is None:
            return self
        return replace(self, certificate=f"{prefix}: {self.certificate}")

    def to_json(self):
        doc = {"verdict": self.verdict}
        if self.certificate is not None:
            doc["certificate"] = self.certificate
        if self.trace:
            doc["trace"] = [[n, value] for n, value in self.trace]
        if self.eta is not None:
            doc["eta"] = self.eta
        return doc


@dataclass(frozen=True)
class TallnessReport:
    verdict: str
    criterion: str
    witness: Optional[object] = None
    trace: Tuple[Tuple[int, Fraction], ...] = ()
    delta: Optional[Fraction] = None
    notes: Tuple[str, ...] = field(default=())

    @property
    def decided(self):
        return self.verdict != UNKNOWN

    def to_json(self):
        doc = {"verdict": self.verdict, "criterion": self.criterion}
        if self.witness is not None:
            doc["witness"] = self.witness.to_json()
        if self.trace:
            doc["trace"] = [[n, value] for n, value in self.trace]
        if self.delta is not None:
            doc["delta"] = self.delta
        if self.notes:
            doc["notes"] = list(self.notes)
        return doc


def persistent_level(values, recurrence):
    """
    Largest level reached by at least a ``recurrence`` fraction of the values.

    Args:
        values (list): Nonnegative rationals sampled along rows
        recurrence (Fraction): Required fraction in (0, 1]

    Returns:
        Fraction: The level (0 when nothing recurs)
    """
    if not values:
        return Fraction(0)
    ranked = sorted(values, reverse=True)
    needed = -(-recurrence.numerator * len(ranked) // recurrence.denominator)
    needed = min(max(needed, 1), len(ranked))
    return Fraction(ranked[needed - 1])
