"""Deciding membership of f_{a,b} in the Laguerre–Pólya class of type I.

For 1 < a < b, f belongs to the class exactly when phi(x) = f(-x) takes a
non-positive value somewhere in (1, a].  A verdict is therefore either a
rational witness with a certified phi(z0) <= 0, or a finite cover of [1, a]
by intervals on which phi is certified positive, or one of the closed-form
necessary conditions failing with certified margin.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from gmpy2 import mpfr

from . import rigor
from .quotient import CoefficientStream, ParameterError, QuotientSpec, parameter_value
from .rigor import DEFAULT_LADDER, DomainError, RigorousValue, check_precision, rv
from .series import eval_phi, eval_phi_mvf, phi_floats, tail_bound

DEFAULT_GRID = 256
DEFAULT_COVER_BUDGET = 40_000


class Status(enum.Enum):
    MEMBER = "Member"
    NOT_MEMBER = "NotMember"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class MembershipVerdict:
    status: Status
    witness: Fraction | None = None
    witness_value: RigorousValue | None = None
    floor: RigorousValue | None = None
    precision_used: int = 0
    reason: str = ""
    detail: dict = field(default_factory=dict, compare=False)

    @property
    def is_member(self) -> bool:
        return self.status is Status.MEMBER

    def to_json(self) -> dict:
        out = {"status": self.status.value, "reason": self.reason, "precision": self.precision_used}
        if self.witness is not None:
            out["witness"] = rv(self.witness, max(self.precision_used, 64)).to_json()
        if self.witness_value is not None:
            out["phi_at_witness"] = self.witness_value.to_json()
        if self.floor is not None:
            out["min_phi"] = self.floor.to_json()
        out.update(self.detail)
        return out


# -- closed-form gates -------------------------------------------------------

def lemma_f_check(spec: QuotientSpec) -> bool:
    """b(a - 4) + 3 >= 0, exact in rationals; False rules membership out."""
    return spec.b * (spec.a - 4) + 3 >= 0


def _check_bound_domain(a) -> Fraction:
    a = parameter_value(a)
    if not 3 <= a < 4:
        raise DomainError(f"bound defined for 3 <= a < 4, got a={a}")
    return a


def sufficient_bound_H(a, precision: int = 128) -> RigorousValue:
    """8 / (a (4 - a)): a < b <= this (with b >= 2) guarantees membership."""
    a = _check_bound_domain(a)
    return rv(Fraction(8) / (a * (4 - a)), precision)


def necessary_bound_I(a, precision: int = 128) -> RigorousValue:
    """(-a(2a - 9) + 2(a - 3) sqrt(a(a - 3))) / (a(4 - a)): members with a < b stay below it."""
    a = _check_bound_domain(a)
    root = rv(a * (a - 3), precision).sqrt()
    num = rv(-a * (2 * a - 9), precision) + root * (2 * (a - 3))
    return num / rv(a * (4 - a), precision)


def qinf_gate(spec: QuotientSpec, qinf: RigorousValue) -> bool:
    """False only when a < q_inf is certified; an overlapping enclosure passes."""
    return not rv(spec.a, qinf.precision).certainly_lt(qinf)


def _over_necessary(spec: QuotientSpec, precision: int = 128) -> bool:
    if not 3 <= spec.a < 4:
        return False
    return necessary_bound_I(spec.a, precision).certainly_lt(spec.b)


def _under_sufficient(spec: QuotientSpec, precision: int = 128) -> bool:
    if not 3 <= spec.a < 4 or spec.b < 2:
        return False
    return rv(spec.b, precision).certainly_le(sufficient_bound_H(spec.a, precision))


# -- witness search ------------------------------------------------------------

def _approx_coefficients(stream, n: int, p: int):
    return [stream.coefficient(k, p).mid for k in range(n + 1)]


def _approx_phi(coeffs, x, ctx):
    acc = mpfr(0)
    for c in reversed(coeffs):
        acc = ctx.sub(c, ctx.mul(x, acc))
    return acc


def _golden_min(coeffs, lo, hi, p: int):
    """Golden-section minimizer of phi on [lo, hi] in p-bit arithmetic."""
    import gmpy2

    ctx = gmpy2.context(precision=p + 16)
    inv_phi = ctx.div(ctx.sub(ctx.sqrt(mpfr(5)), 1), 2)
    a, b = mpfr(lo), mpfr(hi)
    c = ctx.sub(b, ctx.mul(inv_phi, ctx.sub(b, a)))
    d = ctx.add(a, ctx.mul(inv_phi, ctx.sub(b, a)))
    fc, fd = _approx_phi(coeffs, c, ctx), _approx_phi(coeffs, d, ctx)
    tol = mpfr(2) ** (-(p // 2 + 8))
    for _ in range(4 * p):
        if ctx.sub(b, a) <= ctx.mul(tol, abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = ctx.sub(b, ctx.mul(inv_phi, ctx.sub(b, a)))
            fc = _approx_phi(coeffs, c, ctx)
        else:
            a, c, fc = c, d, fd
            d = ctx.add(a, ctx.mul(inv_phi, ctx.sub(b, a)))
            fd = _approx_phi(coeffs, d, ctx)
    return c if fc < fd else d


def _rational_candidates(x) -> list[Fraction]:
    exact = rigor.to_fraction(x)
    out = []
    for digits in (12, 20, 40):
        scale = 10**digits
        out.append(Fraction(round(exact * scale), scale))
    out.append(exact)
    return out


def find_witness(stream, hi: Fraction, precision: int, grid_density: int = DEFAULT_GRID, lo: Fraction = Fraction(1)):
    """Rational z in [lo, hi] with certified phi(z) <= 0, or None."""
    xs = np.linspace(float(lo), float(hi), max(grid_density, 3))
    vals = phi_floats(stream, xs)
    order = np.argsort(vals)
    minima = [i for i in order if (i == 0 or vals[i] <= vals[i - 1]) and (i == len(xs) - 1 or vals[i] <= vals[i + 1])]
    n = tail_bound(stream, rv(hi, precision), precision).cutoff
    coeffs = _approx_coefficients(stream, n, precision)
    for i in minima[:4]:
        left = Fraction(xs[max(i - 1, 0)]).limit_denominator(1 << 40)
        right = Fraction(xs[min(i + 1, len(xs) - 1)]).limit_denominator(1 << 40)
        left, right = max(left, lo), min(right, hi)
        best = _golden_min(coeffs, rv(left, precision + 16).mid, rv(right, precision + 16).mid, precision)
        for z in _rational_candidates(best):
            z = min(max(z, lo), hi)
            value = eval_phi(stream, rv(z, precision), precision)
            if value.upper <= 0:
                return z, value
    return None


# -- positivity cover ----------------------------------------------------------

@dataclass
class CoverResult:
    certified: bool
    floor: RigorousValue | None = None
    pieces: int = 0
    witness: tuple | None = None


def positivity_cover(stream, lo: Fraction, hi: Fraction, precision: int, budget: int = DEFAULT_COVER_BUDGET,
                     initial: int = 32) -> CoverResult:
    """Adaptive bisection cover of [lo, hi] by intervals with phi certified > 0."""
    p = precision
    d = rigor._down(p + 64)
    a, b = rv(lo, p + 64).lower, rv(hi, p + 64).upper
    step = (b - a) / initial
    stack = []
    edges = [a] + [d.add(a, d.mul(step, i)) for i in range(1, initial)] + [b]
    for i in range(initial - 1, -1, -1):
        stack.append((edges[i], edges[i + 1]))
    lows, highs = [], []
    evaluations = 0
    while stack:
        left, right = stack.pop()
        evaluations += 1
        if evaluations > budget:
            return CoverResult(False, pieces=evaluations)
        box = RigorousValue(left, right, p + 64)
        value = eval_phi_mvf(stream, box, p)
        if value.lower > 0:
            lows.append(value.lower)
            highs.append(value.upper)
            continue
        if value.upper <= 0:
            z = rigor.to_fraction(left)
            return CoverResult(False, pieces=evaluations, witness=(z, eval_phi(stream, rv(z, p), p)))
        mid = d.div(d.add(left, right), 2)
        if not left < mid < right:
            return CoverResult(False, pieces=evaluations)
        stack.append((mid, right))
        stack.append((left, mid))
    floor = RigorousValue(min(lows), min(highs), p)
    return CoverResult(True, floor=floor, pieces=evaluations)


def decide(stream, hi: Fraction, precision_ladder: Sequence[int] = DEFAULT_LADDER, grid_density: int = DEFAULT_GRID,
           budget: int = DEFAULT_COVER_BUDGET, lo: Fraction = Fraction(1)) -> MembershipVerdict:
    """Witness-or-cover decision for phi on [lo, hi], escalating precision."""
    last = 0
    for p in precision_ladder:
        check_precision(p)
        last = p
        found = find_witness(stream, hi, p, grid_density, lo)
        if found:
            z, value = found
            return MembershipVerdict(Status.MEMBER, witness=z, witness_value=value, precision_used=p, reason="witness")
        cover = positivity_cover(stream, lo, hi, p, budget)
        if cover.certified:
            return MembershipVerdict(Status.NOT_MEMBER, floor=cover.floor, precision_used=p, reason="cover",
                                     detail={"cover_pieces": cover.pieces})
        if cover.witness and cover.witness[1].upper <= 0:
            z, value = cover.witness
            return MembershipVerdict(Status.MEMBER, witness=z, witness_value=value, precision_used=p, reason="witness")
    return MembershipVerdict(Status.INDETERMINATE, precision_used=last, reason="precision ladder exhausted")


# -- classification --------------------------------------------------------------

_QINF_CACHE: dict = {}


def default_qinf() -> RigorousValue:
    """Enclosure of q_inf used by the gate; computed once per process."""
    if "value" not in _QINF_CACHE:
        from .theta import compute_qinf

        _QINF_CACHE["value"] = compute_qinf(precision=128, tol=Fraction(1, 10**12))
    return _QINF_CACHE["value"]


def set_default_qinf(value: RigorousValue) -> None:
    _QINF_CACHE["value"] = value


def classify(spec: QuotientSpec, precision_ladder: Sequence[int] = DEFAULT_LADDER, grid_density: int = DEFAULT_GRID,
             qinf: RigorousValue | None = None, budget: int = DEFAULT_COVER_BUDGET) -> MembershipVerdict:
    """Membership verdict for f_{a,b} with 1 < a < b."""
    if not 1 < spec.a < spec.b:
        raise ParameterError(f"classification needs 1 < a < b, got a={spec.a}, b={spec.b}")
    if not precision_ladder:
        raise rigor.ConfigurationError("empty precision ladder")
    p0 = max(precision_ladder[0], 64)
    if _over_necessary(spec, p0):
        return MembershipVerdict(Status.NOT_MEMBER, precision_used=p0, reason="overI")
    if not lemma_f_check(spec):
        return MembershipVerdict(Status.NOT_MEMBER, precision_used=0, reason="lemmaF")
    if spec.a < 4:
        gate = qinf if qinf is not None else default_qinf()
        if not qinf_gate(spec, gate):
            return MembershipVerdict(Status.NOT_MEMBER, precision_used=gate.precision, reason="qinf")
    return decide(CoefficientStream(spec), spec.a, precision_ladder, grid_density, budget)


@dataclass(frozen=True)
class GateFlags:
    lemmaF: bool
    underH: bool
    overI: bool
    qinfGate: bool

    def to_json(self) -> dict:
        return {"lemmaF": self.lemmaF, "underH": self.underH, "overI": self.overI, "qinfGate": self.qinfGate}


def gate_flags(spec: QuotientSpec, qinf: RigorousValue | None = None) -> GateFlags:
    # q_inf lies in [3, 4], so the enclosure is only needed in between
    if spec.a >= 4 or spec.a < 3:
        passes = spec.a >= 4
    else:
        passes = qinf_gate(spec, qinf if qinf is not None else default_qinf())
    return GateFlags(lemma_f_check(spec), _under_sufficient(spec), _over_necessary(spec), passes)


def phi_minimum_enclosure(verdict: MembershipVerdict) -> RigorousValue | None:
    """Enclosure of min phi on [1, a] implied by a verdict, when it gives one."""
    if verdict.floor is not None:
        return verdict.floor
    if verdict.witness_value is not None:
        return RigorousValue(mpfr("-inf"), verdict.witness_value.upper, verdict.witness_value.precision)
    return None
