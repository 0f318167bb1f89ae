#!/usr/bin/env python3
"""
Ideal Membership

Tri-state membership for every ideal family. In and Out are only returned
through exact fast paths that name the rule they used; everything else is
Unknown together with the family's density trace.
"""

import logging
from fractions import Fraction

from .families import (
    Fin, DensityZero, MatrixIdeal, Summable, GenDensity, Lacunary,
    FubiniEmptyFin, Restriction,
)
from .verdicts import TriState, IN, OUT
from ..sets.setexpr import (
    ArithProg, Complement, Intersect, Nu2Level, RuleSparse, Union, nu2,
)
from ..sequences.seq import HorizonParams
from ..summability.matrices import (
    Cesaro, Identity, ShiftedGeometric, check_regularity,
)
from ..utils.errors import InvalidSpec, UnsupportedFamily

# Configure module logger
logger = logging.getLogger(__name__)

# Membership regimes: each family reduces to one of these decision tables
FIN_LIKE = "fin"
DENSITY = "density"
HARMONIC = "harmonic"
ALTERNATING = "alternating"
BLOCK = "block"
FUBINI = "fubini"
OPAQUE = "opaque"


def unwrap(ideal):
    """Lacunary ideals are generalized density ideals with normalized counting."""
    if isinstance(ideal, Lacunary):
        return ideal.as_gen_density()
    return ideal


def regime(ideal):
    """
    Decision table used for an ideal.

    Returns:
        tuple: (regime name, explanation used as certificate prefix)
    """
    ideal = unwrap(ideal)
    if isinstance(ideal, Fin):
        return FIN_LIKE, "Fin"
    if isinstance(ideal, DensityZero):
        return DENSITY, "density zero"
    if isinstance(ideal, FubiniEmptyFin):
        return FUBINI, "∅×Fin"
    if isinstance(ideal, MatrixIdeal):
        a = ideal.matrix
        if isinstance(a, Cesaro):
            return DENSITY, "Cesàro matrix ideal equals density zero"
        if isinstance(a, (Identity, ShiftedGeometric)):
            return FIN_LIKE, f"{a.kind} matrix: every infinite set has row sums >= {a.max_entry(0)} infinitely often"
        if a.tail == "cesaroTail":
            return DENSITY, "finitely many explicit rows then Cesàro rows: equals density zero"
        return OPAQUE, "repeated explicit row"
    if isinstance(ideal, Summable):
        rule = ideal.f.governing
        if rule.rule == "constant":
            return FIN_LIKE, f"weight eventually constant {rule.c} > 0: ideal equals Fin"
        if rule.rule == "harmonic":
            return HARMONIC, "weight eventually 1/(n+1)"
        return ALTERNATING, f"weight eventually alternating (c = {rule.c})"
    if isinstance(ideal, GenDensity):
        if ideal.phi.weight_vanishes:
            return BLOCK, "block weights tend to 0"
        return FIN_LIKE, "block weights bounded below: ideal equals Fin"
    raise UnsupportedFamily(f"No membership table for {ideal.describe()}")


def validate_ideal(ideal, params):
    """
    Check the invariants that cannot be checked at construction.

    Raises:
        InvalidSpec: If a restriction set belongs to its base ideal
    """
    if isinstance(ideal, Restriction):
        validate_ideal(ideal.base, params)
        verdict = _decide(ideal.base, ideal.e.simplify(), params)
        if verdict is not None and verdict.verdict == IN:
            raise InvalidSpec(f"Restriction set {ideal.e.describe()} belongs to the base ideal")
    elif isinstance(ideal, MatrixIdeal):
        if not check_regularity(ideal.matrix, params).decided:
            logger.warning(f"Regularity of {ideal.matrix.describe()} is not certified, only generic rules apply")


def _fin_rule(s, why):
    if s.finiteness() is False:
        return TriState.outside(f"{why}; set is infinite")
    return None


def _density_rule(s, why):
    lo, hi, reason = s.density_bounds()
    if hi == 0:
        return TriState.inside(reason)
    if lo > 0:
        return TriState.outside(f"{reason} > 0")
    return None


def _harmonic_rule(s, why):
    lo, _, reason = s.density_bounds()
    if lo > 0:
        return TriState.outside(f"{reason} > 0, so the sum of 1/(n+1) over the set diverges")
    alpha, exp_reason = s.counting_exponent()
    if alpha < 1:
        return TriState.inside(f"{exp_reason}, so the sum of 1/(n+1) over the set converges")
    return None


def _alternating_rule(s, c):
    evens = Intersect((s, ArithProg(0, 2))).simplify()
    odds = Intersect((s, ArithProg(1, 2))).simplify()
    parts = []
    if c > 0:
        flag = evens.finiteness()
        if flag is False:
            return TriState.outside(f"infinitely many even indices carry weight {c}")
        if flag is None:
            return None
        parts.append("finitely many even indices")
    if odds.finiteness() is True:
        parts.append("finitely many odd indices")
    else:
        odd = _harmonic_rule(odds, "")
        if odd is None:
            return None
        if odd.verdict == OUT:
            return TriState.outside(f"odd part: {odd.certificate}")
        parts.append(f"odd part: {odd.certificate}")
    return TriState.inside("; ".join(parts))


def _block_rule(s):
    lo, _, reason = s.density_bounds()
    if lo > 0:
        return TriState.outside(
            f"{reason} > 0 and block lengths are o(block starts), so block densities do not vanish")
    if isinstance(s, RuleSparse):
        return TriState.inside(f"gaps of {s.rule} tend to infinity while block lengths tend to infinity")
    return None


def _progression_level(prog):
    e = nu2(prog.d) if prog.d else 0
    if prog.a == 0 or nu2(prog.a) >= e:
        return e
    return nu2(prog.a)


def _enclosing_level(s):
    current = s.enclosing()
    while current is not None:
        if isinstance(current, Nu2Level):
            return current
        current = current.enclosing()
    return None


def _fubini_rule(s):
    if isinstance(s, Nu2Level):
        return TriState.outside("level slice infinite")
    level = _enclosing_level(s)
    if level is not None and s.finiteness() is False:
        return TriState.outside(f"infinite subset of level {level.k}: level slice infinite")
    if isinstance(s, ArithProg):
        return TriState.outside(f"level {_progression_level(s)} slice infinite")
    if isinstance(s, RuleSparse):
        if s.rule == "squares":
            return TriState.outside("level 0 slice infinite (odd squares)")
        if s.rule == "powersOfTwo":
            return TriState.inside("each level slice has exactly one element")
        return TriState.inside("nu2(j!) is nondecreasing and unbounded, so every level slice is finite")
    if isinstance(s, Intersect):
        levels = [arg for arg in s.args if isinstance(arg, Nu2Level)]
        if levels and s.finiteness() is False:
            return TriState.outside(f"level {levels[0].k} slice infinite")
    lo, _, reason = s.density_bounds()
    if lo > 0:
        return TriState.outside(f"{reason} > 0 forces an infinite level slice")
    return None


def _fast_path(ideal, s):
    name, why = regime(ideal)
    if name == FIN_LIKE:
        verdict = _fin_rule(s, why)
    elif name == DENSITY:
        verdict = _density_rule(s, why)
    elif name == HARMONIC:
        verdict = _harmonic_rule(s, why)
    elif name == ALTERNATING:
        verdict = _alternating_rule(s, unwrap(ideal).f.governing.c)
    elif name == BLOCK:
        verdict = _block_rule(s)
    elif name == FUBINI:
        verdict = _fubini_rule(s)
    else:
        verdict = None
    if verdict is not None and name not in (DENSITY, FUBINI) and why not in verdict.certificate:
        verdict = verdict.annotate(why)
    return verdict


def _decide(ideal, s, params):
    """Exact verdict for a simplified set, or None."""
    certificate = s.member_certificate(ideal)
    if certificate is not None:
        return TriState.inside(certificate)
    if isinstance(ideal, Restriction):
        if s.finiteness() is True:
            return TriState.inside("finite set")
        if s.cofiniteness() is True:
            return TriState.outside("cofinite set contains E up to finitely many points, and E is outside the base ideal")
        inner = _decide(ideal.base, Intersect((s, ideal.e)).simplify(), params)
        return inner.annotate("intersected with E") if inner is not None else None

    if s.finiteness() is True:
        return TriState.inside("finite set")
    if s.cofiniteness() is True:
        return TriState.outside("cofinite set (properness)")

    verdict = _fast_path(ideal, s)
    if verdict is not None:
        return verdict

    if isinstance(s, Union):
        parts = [_decide(ideal, arg, params) for arg in s.args]
        outs = [p for p in parts if p is not None and p.verdict == OUT]
        if outs:
            return TriState.outside(f"contains a non-member: {outs[0].certificate}")
        if all(p is not None and p.verdict == IN for p in parts):
            return TriState.inside("finite union of members: " + "; ".join(p.certificate for p in parts))
    if isinstance(s, Intersect):
        for arg in s.args:
            part = _decide(ideal, arg, params)
            if part is not None and part.verdict == IN:
                return TriState.inside(f"subset of a member: {part.certificate}")
    return None


def _fallback_trace(ideal, s, params):
    target = unwrap(ideal.base if isinstance(ideal, Restriction) else ideal)
    if isinstance(ideal, Restriction):
        s = Intersect((s, ideal.e)).simplify()
    try:
        return density_trace(target, s, params.rows)
    except UnsupportedFamily:
        return [(n, Fraction(s.count_prefix(n))) for n in params.sample_points()]


def member(ideal, s, params=None):
    """
    Decide s ∈ ideal.

    Args:
        ideal (IdealSpec): The ideal
        s (SetExpr): The set
        params (HorizonParams, optional): Horizon parameters (defaults if None)

    Returns:
        TriState: In/Out with certificate, or Unknown with the density trace

    Raises:
        InvalidSpec: If the ideal description violates its invariants
    """
    params = params or HorizonParams()
    validate_ideal(ideal, params)
    simplified = s.simplify()
    verdict = _decide(ideal, simplified, params)
    if verdict is None:
        logger.debug(f"No fast path for {simplified.describe()} in {ideal.describe()}")
        return TriState.unknown(_fallback_trace(ideal, simplified, params))
    logger.debug(f"{simplified.describe()} in {ideal.describe()}: {verdict.verdict} ({verdict.certificate})")
    return verdict


def dual_member(ideal, s, params=None):
    """Decide s ∈ ideal* (the dual filter), i.e. membership of the complement."""
    return member(ideal, Complement(s), params)


def density_trace(ideal, s, rows):
    """
    The family's canonical functional at n = 0..rows-1.

    Args:
        ideal (IdealSpec): DensityZero, MatrixIdeal, Summable, GenDensity or Lacunary
        s (SetExpr): The set
        rows (int): Number of rows (>= 1)

    Returns:
        list: Pairs (n, value)

    Raises:
        UnsupportedFamily: For Fin, ∅×Fin and restrictions
    """
    ideal = unwrap(ideal)
    if rows < 1:
        raise InvalidSpec(f"rows must be >= 1, got {rows}")
    if isinstance(ideal, DensityZero):
        members = set(s.iter_prefix(rows - 1))
        trace, count = [], 0
        for n in range(rows):
            count += n in members
            trace.append((n, Fraction(count, n + 1)))
        return trace
    if isinstance(ideal, MatrixIdeal):
        return [(n, ideal.matrix.row_weight(n, s)) for n in range(rows)]
    if isinstance(ideal, Summable):
        members = set(s.iter_prefix(rows - 1))
        trace, total = [], Fraction(0)
        for n in range(rows):
            if n in members:
                total += ideal.f.value(n)
            trace.append((n, total))
        return trace
    if isinstance(ideal, GenDensity):
        return [(n, ideal.phi.phi(n, s)) for n in range(rows)]
    raise UnsupportedFamily(f"No density functional for {ideal.describe()}")


def sampled_trace(ideal, s, params):
    """
    The family functional at ``rows`` points spread over the horizon.

    For summable ideals the decaying quantity is the remaining mass of s
    between the sample point and N.

    Returns:
        list: Pairs (n, value); n is a block index for generalized densities
    """
    ideal = unwrap(ideal)
    if isinstance(ideal, Restriction):
        return sampled_trace(ideal.base, Intersect((s, ideal.e)).simplify(), params)
    points = params.sample_points()
    if isinstance(ideal, DensityZero):
        return [(n, Fraction(s.count_prefix(n), n + 1)) for n in points]
    if isinstance(ideal, MatrixIdeal):
        return [(n, ideal.matrix.row_weight(n, s)) for n in points]
    if isinstance(ideal, Summable):
        elements = list(s.iter_prefix(params.N))
        masses = [ideal.f.value(k) for k in elements]
        suffix = [Fraction(0)] * (len(elements) + 1)
        for i in range(len(elements) - 1, -1, -1):
            suffix[i] = suffix[i + 1] + masses[i]
        trace, i = [], 0
        for n in points:
            while i < len(elements) and elements[i] <= n:
                i += 1
            trace.append((n, suffix[i]))
        return trace
    if isinstance(ideal, GenDensity):
        last_block = ideal.phi.blocks.block_of(params.N)
        return [(b, ideal.phi.phi(b, s)) for b in params.sample_points(last_block)]
    raise UnsupportedFamily(f"No sampled functional for {ideal.describe()}")
