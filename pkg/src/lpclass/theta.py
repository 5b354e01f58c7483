"""The partial theta function g_a(z) = sum z^k a^(-k^2), q_inf and the constants c_n.

With A = a^2, the substitution z = a w turns g_a into the constant-quotient
member of the family: g_a(a w) = f_{A,A}(w).  The witness range (-a^3, -a)
becomes w in (-A, -1), so the same witness-or-cover machinery decides
membership, and the Taylor sections become polynomials with rational
coefficients A^(-k(k-1)/2) that Sturm sequences decide exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .membership import (DEFAULT_COVER_BUDGET, DEFAULT_GRID, MembershipVerdict, Status, decide, find_witness,
                         positivity_cover)
from .quotient import CoefficientStream, QuotientSpec, parameter_value
from .realroot import InconsistencyError, Polynomial, all_real
from .rigor import DEFAULT_LADDER, DEFAULT_PRECISION, RigorousValue, check_precision, rv
from .series import eval_series

QINF_BRACKET = (Fraction(3), Fraction(4))
CN_BRACKET = (Fraction(2), Fraction(5))


@dataclass(frozen=True)
class ThetaSpec:
    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", parameter_value(self.a))
        if self.a <= 1:
            raise ValueError(f"theta parameter must exceed 1, got {self.a}")


class ThetaStream:
    """Coefficients a^(-k^2) of g_a itself (not rescaled)."""

    def __init__(self, a):
        self.a = parameter_value(a)

    def coefficient(self, k: int, precision: int) -> RigorousValue:
        return _theta_coefficient(self.a, k, precision)

    def term_ratio(self, k: int, precision: int) -> RigorousValue:
        return _theta_coefficient(self.a, 1, precision) ** (2 * k + 1)

    def float_coefficients(self, count: int) -> list[float]:
        import math

        la = math.log(self.a)
        return [math.exp(-k * k * la) for k in range(count)]


@lru_cache(maxsize=1 << 14)
def _theta_coefficient(a: Fraction, k: int, precision: int) -> RigorousValue:
    return rv(a, precision) ** (-(k * k)) if k else rv(1, precision)


def eval_g(a, z, precision: int = DEFAULT_PRECISION) -> RigorousValue:
    """Enclosure of g_a(z)."""
    return eval_series(ThetaStream(ThetaSpec(a).a), z, check_precision(precision))


def _scaled_stream(square: Fraction) -> CoefficientStream:
    return CoefficientStream(QuotientSpec(square, square))


def member_by_square(square, precision_ladder=DEFAULT_LADDER, grid_density: int = DEFAULT_GRID,
                     budget: int = DEFAULT_COVER_BUDGET) -> MembershipVerdict:
    """Theta membership for a^2 = ``square``; the witness is reported as w = z / a in [1, A]."""
    square = parameter_value(square)
    return decide(_scaled_stream(square), square, precision_ladder, grid_density, budget)


def theta_member(a, precision: int = DEFAULT_PRECISION, grid_density: int = DEFAULT_GRID) -> MembershipVerdict:
    """Is g_a real-rooted?  Member carries a witness z0 in [-a^3, -a] with g_a(z0) <= 0."""
    spec = ThetaSpec(a)
    ladder = tuple(p for p in DEFAULT_LADDER if p >= precision) or (precision,)
    verdict = member_by_square(spec.a**2, ladder, grid_density)
    if verdict.status is not Status.MEMBER:
        return verdict
    z0 = -spec.a * verdict.witness
    value = eval_g(spec.a, rv(z0, verdict.precision_used), verdict.precision_used)
    if value.upper > 0:
        raise InconsistencyError("rescaled witness does not certify g_a(z0) <= 0")
    return MembershipVerdict(Status.MEMBER, witness=z0, witness_value=value,
                             precision_used=verdict.precision_used, reason="witness")


def _bisect(predicate, lo: Fraction, hi: Fraction, tol: Fraction):
    """Shrink [lo, hi] keeping predicate(lo) False and predicate(hi) True.

    predicate returns True, False or None (undecided); an undecided midpoint
    is retried at off-centre splits before giving up.
    """
    while hi - lo > tol:
        w = hi - lo
        for frac in (Fraction(1, 2), Fraction(3, 8), Fraction(5, 8), Fraction(1, 4), Fraction(3, 4)):
            m = lo + w * frac
            verdict = predicate(m)
            if verdict is not None:
                break
        else:
            return lo, hi, False
        if verdict:
            hi = m
        else:
            lo = m
    return lo, hi, True


def _theta_predicate(precision: int, budget: int):
    ladder = tuple(sorted({precision, 2 * precision}))

    def predicate(square):
        v = member_by_square(square, ladder, budget=budget)
        if v.status is Status.INDETERMINATE:
            return None
        return v.status is Status.MEMBER

    return predicate


@lru_cache(maxsize=32)
def _qinf_cached(precision: int, tol: Fraction, budget: int):
    lo, hi, done = _bisect(_theta_predicate(precision, budget), *QINF_BRACKET, tol)
    return lo, hi, done


def compute_qinf(precision: int = DEFAULT_PRECISION, tol=Fraction(1, 10**8),
                 budget: int = DEFAULT_COVER_BUDGET) -> RigorousValue:
    """Enclosure of q_inf by bisection on a^2 with the theta test as predicate.

    The result is exactly the final bracket, rounded outward; it is wider
    than ``tol`` only if a midpoint stayed undecided at every retry.
    """
    tol = parameter_value(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi, _ = _qinf_cached(check_precision(precision), tol, budget)
    return RigorousValue.hull_of(lo, hi, precision)


# -- Taylor sections ------------------------------------------------------------

def section_polynomial(n: int, square) -> Polynomial:
    """S_n(a w, g_a) = sum_{k<=n} w^k A^(-k(k-1)/2), exact in A = a^2."""
    if n < 2:
        raise ValueError("sections start at degree 2")
    square = parameter_value(square)
    return Polynomial([1 / square ** (k * (k - 1) // 2) for k in range(n + 1)])


def section_real_rooted(n: int, square) -> bool:
    """Sturm decision: S_n(., g_a) has only real zeros, a^2 = ``square``."""
    return all_real(section_polynomial(n, square))


class _SectionStream:
    """A section as a finite stream, so the witness and cover routines apply."""

    def __init__(self, poly: Polynomial):
        self.coeffs = poly.coefficients

    def coefficient(self, k: int, precision: int) -> RigorousValue:
        return rv(self.coeffs[k], precision) if k < len(self.coeffs) else rv(0, precision)

    def term_ratio(self, k: int, precision: int) -> RigorousValue:
        if k + 1 >= len(self.coeffs):
            return rv(0, precision)
        return rv(self.coeffs[k + 1] / self.coeffs[k], precision)

    def float_coefficients(self, count: int) -> list[float]:
        return [float(c) for c in self.coeffs[:count]] + [0.0] * max(0, count - len(self.coeffs))


def section_witness_test(n: int, square, precision: int = DEFAULT_PRECISION,
                         grid_density: int = DEFAULT_GRID, budget: int = 4000) -> bool | None:
    """Witness criterion for sections: S_n(-a u) <= 0 for some u in [1, A].

    Returns None when neither a witness nor a positivity cover is certified.
    """
    square = parameter_value(square)
    poly = _deflate_endpoint(section_polynomial(n, square), square)
    stream = _SectionStream(poly)
    # exact evaluation at the candidate keeps boundary cases (min exactly 0) decidable
    found = find_witness(stream, square, precision, grid_density)
    if found:
        return True
    for candidate in _exact_candidates(n, square):
        if 1 <= candidate <= square and poly(-candidate) <= 0:
            return True
    cover = positivity_cover(stream, Fraction(1), square, precision, budget)
    if cover.certified:
        return False
    if cover.witness and cover.witness[1].upper <= 0:
        return True
    return None


def _deflate_endpoint(poly: Polynomial, square: Fraction) -> Polynomial:
    """Divide out one zero at w = -A, an endpoint of the open witness range (S_3(-A) = 0 for every A).

    A multiple zero there survives deflation and still counts as a witness.
    """
    if poly.degree > 0 and poly(-square) == 0:
        quotient, carry = [], Fraction(0)
        for c in reversed(poly.coefficients[1:]):
            carry = c - square * carry if quotient else c
            quotient.append(carry)
        poly = Polynomial(quotient[::-1])
    return poly


def _exact_candidates(n: int, square: Fraction):
    # the multiple roots at a^2 = c_2 and a^2 = c_3 sit at u = A/2 and u = A
    yield square / 2
    yield square


def section_member(n: int, a, precision: int = DEFAULT_PRECISION) -> bool:
    """All zeros of the degree-n section of g_a real?  Sturm and witness tests must agree."""
    a = ThetaSpec(a).a
    return section_member_by_square(n, a * a, precision)


def section_member_by_square(n: int, square, precision: int = DEFAULT_PRECISION) -> bool:
    square = parameter_value(square)
    if square <= 1:
        raise ValueError("a^2 must exceed 1")
    sturm = section_real_rooted(n, square)
    witness = section_witness_test(n, square, precision)
    if witness is not None and witness != sturm:
        raise InconsistencyError(f"section test disagreement at n={n}, a^2={square}: sturm={sturm}, witness={witness}")
    return sturm


@lru_cache(maxsize=64)
def _cn_cached(n: int, tol: Fraction):
    lo, hi, _ = _bisect(lambda s: section_real_rooted(n, s), *CN_BRACKET, tol)
    return lo, hi


def compute_cn(n: int, precision: int = DEFAULT_PRECISION, tol=Fraction(1, 10**8)) -> RigorousValue:
    """Enclosure of c_n = inf{a^2 : S_n(., g_a) real-rooted} by exact Sturm bisection."""
    if n < 2:
        raise ValueError("c_n is defined for n >= 2")
    tol = parameter_value(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = _cn_cached(n, tol)
    return RigorousValue.hull_of(lo, hi, check_precision(precision))
