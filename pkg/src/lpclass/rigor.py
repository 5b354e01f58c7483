"""Interval enclosures with outward rounding.

Every bound is an MPFR number produced under an explicit rounding direction
(lower bounds rounded toward -inf, upper bounds toward +inf), so each
operation returns an interval that contains the exact real result.  The
working precision travels with the value; there is no global state.
"""

from __future__ import annotations

import enum
import math
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

MIN_PRECISION = 32
DEFAULT_PRECISION = 128
DEFAULT_LADDER = (64, 128, 256, 512)

Real = Union[int, Fraction, str, float, "RigorousValue"]


class ConfigurationError(ValueError):
    """Invalid numeric configuration (precision, tolerance, ...)."""


class DomainError(ArithmeticError):
    """Operation undefined on (part of) the input enclosure."""


class Inconclusive(ArithmeticError):
    """A sign or count could not be decided at the available precision."""


class SignVerdict(enum.Enum):
    STRICTLY_NEGATIVE = "StrictlyNegative"
    STRICTLY_POSITIVE = "StrictlyPositive"
    NON_POSITIVE = "NonPositive"
    NON_NEGATIVE = "NonNegative"
    INDETERMINATE = "Indeterminate"

    @property
    def le_zero(self) -> bool:
        return self in (SignVerdict.STRICTLY_NEGATIVE, SignVerdict.NON_POSITIVE)

    @property
    def ge_zero(self) -> bool:
        return self in (SignVerdict.STRICTLY_POSITIVE, SignVerdict.NON_NEGATIVE)


def check_precision(precision: int) -> int:
    if not isinstance(precision, int) or precision < MIN_PRECISION:
        raise ConfigurationError(f"precision must be an integer >= {MIN_PRECISION}, got {precision!r}")
    return precision


@lru_cache(maxsize=None)
def _down(precision: int) -> gmpy2.context:
    return gmpy2.context(precision=precision, round=gmpy2.RoundDown)


@lru_cache(maxsize=None)
def _up(precision: int) -> gmpy2.context:
    return gmpy2.context(precision=precision, round=gmpy2.RoundUp)


@lru_cache(maxsize=None)
def _exact(precision: int) -> gmpy2.context:
    return gmpy2.context(precision=precision)


def neg(x):
    """-x without rounding (plain unary minus rounds to the global 53-bit context)."""
    return _exact(x.precision).minus(x)


def absolute(x):
    return _exact(x.precision).abs(x)


_NEG_INF = mpfr("-inf")
_POS_INF = mpfr("inf")


def _lo_fix(x):
    return _NEG_INF if gmpy2.is_nan(x) else x


def _hi_fix(x):
    return _POS_INF if gmpy2.is_nan(x) else x


def to_fraction(value) -> Fraction:
    """Exact rational value of an int, Fraction, decimal string, float or finite mpfr."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, type(mpfr(0))):
        n, d = value.as_integer_ratio()
        return Fraction(int(n), int(d))
    if isinstance(value, type(mpq(0))):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def _round_rational(q: Fraction, precision: int):
    n, d = mpz(q.numerator), mpz(q.denominator)
    return _down(precision).div(n, d), _up(precision).div(n, d)


class RigorousValue:
    """Closed interval [lower, upper] of extended reals at a working precision."""

    __slots__ = ("lower", "upper", "precision")

    def __init__(self, lower, upper=None, precision: int = DEFAULT_PRECISION):
        if upper is None:
            upper = lower
        if not isinstance(lower, type(_POS_INF)) or not isinstance(upper, type(_POS_INF)):
            raise TypeError("RigorousValue bounds must be mpfr; use RigorousValue.of()")
        if lower > upper:
            raise ValueError(f"empty interval [{lower}, {upper}]")
        self.lower = lower
        self.upper = upper
        self.precision = precision

    # -- construction ---------------------------------------------------
    @classmethod
    def of(cls, value: Real, precision: int = DEFAULT_PRECISION) -> "RigorousValue":
        """Tightest enclosure of an exact value at ``precision`` bits."""
        if isinstance(value, RigorousValue):
            if value.precision == precision:
                return value
            return cls(_down(precision).plus(value.lower), _up(precision).plus(value.upper), precision)
        if isinstance(value, type(_POS_INF)):
            return cls(_down(precision).plus(value), _up(precision).plus(value), precision)
        lo, hi = _round_rational(to_fraction(value), precision)
        return cls(lo, hi, precision)

    @classmethod
    def hull_of(cls, lower: Real, upper: Real, precision: int = DEFAULT_PRECISION) -> "RigorousValue":
        lo = cls.of(lower, precision)
        hi = cls.of(upper, precision)
        return cls(min(lo.lower, hi.lower), max(lo.upper, hi.upper), precision)

    def _coerce(self, other) -> "RigorousValue":
        if isinstance(other, RigorousValue):
            return other
        return RigorousValue.of(other, self.precision)

    # -- inspection -----------------------------------------------------
    @property
    def mid(self):
        ctx = _down(self.precision + 2)
        m = ctx.div(ctx.add(self.lower, self.upper), 2)
        return min(max(m, self.lower), self.upper)

    @property
    def width(self):
        return _up(self.precision).sub(self.upper, self.lower)

    @property
    def magnitude(self):
        """Upper bound of |x|."""
        return max(absolute(self.lower), absolute(self.upper))

    @property
    def mignitude(self):
        """Lower bound of |x| (0 when the interval contains 0)."""
        if self.lower > 0:
            return self.lower
        if self.upper < 0:
            return neg(self.upper)
        return mpfr(0)

    def is_point(self) -> bool:
        return self.lower == self.upper

    def contains(self, value) -> bool:
        if isinstance(value, RigorousValue):
            return self.lower <= value.lower and value.upper <= self.upper
        if isinstance(value, (int, Fraction, str)):
            q = to_fraction(value)
            v = mpq(q.numerator, q.denominator)
            return self.lower <= v <= self.upper
        return self.lower <= value <= self.upper

    def contains_zero(self) -> bool:
        return self.lower <= 0 <= self.upper

    def overlaps(self, other: "RigorousValue") -> bool:
        return not (self.upper < other.lower or other.upper < self.lower)

    def certainly_lt(self, other) -> bool:
        other = self._coerce(other)
        return self.upper < other.lower

    def certainly_le(self, other) -> bool:
        other = self._coerce(other)
        return self.upper <= other.lower

    def certainly_gt(self, other) -> bool:
        return self._coerce(other).certainly_lt(self)

    def certainly_ge(self, other) -> bool:
        return self._coerce(other).certainly_le(self)

    # -- lattice operations --------------------------------------------
    def hull(self, other) -> "RigorousValue":
        other = self._coerce(other)
        return RigorousValue(min(self.lower, other.lower), max(self.upper, other.upper),
                             max(self.precision, other.precision))

    def intersect(self, other: "RigorousValue") -> "RigorousValue":
        lo = max(self.lower, other.lower)
        hi = min(self.upper, other.upper)
        if lo > hi:
            raise DomainError("intersection of disjoint enclosures; an enclosure is unsound")
        return RigorousValue(lo, hi, max(self.precision, other.precision))

    def widen(self, ulps: int = 1) -> "RigorousValue":
        lo, hi = self.lower, self.upper
        for _ in range(ulps):
            lo = _down(self.precision).next_below(lo)
            hi = _up(self.precision).next_above(hi)
        return RigorousValue(lo, hi, self.precision)

    # -- arithmetic -----------------------------------------------------
    def __neg__(self) -> "RigorousValue":
        return RigorousValue(neg(self.upper), neg(self.lower), self.precision)

    def __pos__(self) -> "RigorousValue":
        return self

    def __abs__(self) -> "RigorousValue":
        if self.lower >= 0:
            return self
        if self.upper <= 0:
            return -self
        return RigorousValue(mpfr(0), max(neg(self.lower), self.upper), self.precision)

    def __add__(self, other) -> "RigorousValue":
        other = self._coerce(other)
        p = max(self.precision, other.precision)
        return RigorousValue(_lo_fix(_down(p).add(self.lower, other.lower)),
                             _hi_fix(_up(p).add(self.upper, other.upper)), p)

    __radd__ = __add__

    def __sub__(self, other) -> "RigorousValue":
        other = self._coerce(other)
        p = max(self.precision, other.precision)
        return RigorousValue(_lo_fix(_down(p).sub(self.lower, other.upper)),
                             _hi_fix(_up(p).sub(self.upper, other.lower)), p)

    def __rsub__(self, other) -> "RigorousValue":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RigorousValue":
        other = self._coerce(other)
        p = max(self.precision, other.precision)
        d, u = _down(p), _up(p)
        xl, xu, yl, yu = self.lower, self.upper, other.lower, other.upper
        if xl >= 0 and yl >= 0:
            lo, hi = d.mul(xl, yl), u.mul(xu, yu)
        elif xu <= 0 and yu <= 0:
            lo, hi = d.mul(xu, yu), u.mul(xl, yl)
        elif xl >= 0 and yu <= 0:
            lo, hi = d.mul(xu, yl), u.mul(xl, yu)
        elif xu <= 0 and yl >= 0:
            lo, hi = d.mul(xl, yu), u.mul(xu, yl)
        else:
            pairs = ((xl, yl), (xl, yu), (xu, yl), (xu, yu))
            lo = min(_lo_fix(d.mul(s, t)) for s, t in pairs)
            hi = max(_hi_fix(u.mul(s, t)) for s, t in pairs)
        return RigorousValue(_lo_fix(lo), _hi_fix(hi), p)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RigorousValue":
        other = self._coerce(other)
        if other.contains_zero():
            raise DomainError("division by an enclosure containing 0")
        p = max(self.precision, other.precision)
        d, u = _down(p), _up(p)
        pairs = ((self.lower, other.lower), (self.lower, other.upper),
                 (self.upper, other.lower), (self.upper, other.upper))
        lo = min(_lo_fix(d.div(s, t)) for s, t in pairs)
        hi = max(_hi_fix(u.div(s, t)) for s, t in pairs)
        return RigorousValue(lo, hi, p)

    def __rtruediv__(self, other) -> "RigorousValue":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "RigorousValue":
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported; use sqrt() for half powers")
        p = self.precision
        d, u = _down(p), _up(p)
        one = mpfr(1)
        if n == 0:
            return RigorousValue(one, one, p)
        xl, xu = self.lower, self.upper
        if n < 0:
            if self.contains_zero():
                raise DomainError("negative power of an enclosure containing 0")
            if xl > 0:
                return RigorousValue(d.pow(xu, n), u.pow(xl, n), p)
            if n % 2 == 0:
                return RigorousValue(d.pow(xl, n), u.pow(xu, n), p)
            return RigorousValue(neg(u.pow(neg(xu), n)), neg(d.pow(neg(xl), n)), p)
        if xl >= 0:
            return RigorousValue(d.pow(xl, n), u.pow(xu, n), p)
        if n % 2 == 1:
            return RigorousValue(d.pow(xl, n), u.pow(xu, n), p)
        if xu <= 0:
            return RigorousValue(d.pow(xu, n), u.pow(xl, n), p)
        return RigorousValue(mpfr(0), u.pow(max(neg(xl), xu), n), p)

    def sqrt(self) -> "RigorousValue":
        if self.lower < 0:
            raise DomainError("sqrt of an enclosure reaching below 0")
        p = self.precision
        return RigorousValue(_down(p).sqrt(self.lower), _up(p).sqrt(self.upper), p)

    def __repr__(self) -> str:
        return f"RigorousValue([{self.lower}, {self.upper}], prec={self.precision})"

    # -- serialization --------------------------------------------------
    def to_json(self, digits: int = 25) -> dict:
        return {
            "dec": decimal_string(self.mid, digits, None),
            "lo": decimal_string(self.lower, digits, ROUND_FLOOR),
            "hi": decimal_string(self.upper, digits, ROUND_CEILING),
            "prec": self.precision,
        }


def rv(value: Real, precision: int = DEFAULT_PRECISION) -> RigorousValue:
    """Shorthand for :meth:`RigorousValue.of`."""
    return RigorousValue.of(value, precision)


def pi(precision: int = DEFAULT_PRECISION) -> RigorousValue:
    return RigorousValue(_down(precision).const_pi(), _up(precision).const_pi(), precision)


def decimal_string(x, digits: int = 25, rounding=ROUND_FLOOR) -> str:
    """Decimal rendering of an mpfr with ``digits`` significant digits.

    ``rounding`` is a :mod:`decimal` rounding mode; ROUND_FLOOR/ROUND_CEILING
    keep the printed bound on the outside of the enclosure.
    """
    if gmpy2.is_infinite(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    q = to_fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits
        if rounding is not None:
            ctx.rounding = rounding
        value = Decimal(q.numerator) / Decimal(q.denominator)
    return format(value.normalize(), "f") if abs(value.adjusted()) < 30 else str(value.normalize())


def sign_of(x: RigorousValue) -> SignVerdict:
    if x.upper < 0:
        return SignVerdict.STRICTLY_NEGATIVE
    if x.lower > 0:
        return SignVerdict.STRICTLY_POSITIVE
    if x.upper == 0:
        return SignVerdict.NON_POSITIVE
    if x.lower == 0:
        return SignVerdict.NON_NEGATIVE
    return SignVerdict.INDETERMINATE


# -- trigonometric enclosures -----------------------------------------------

def _trig(x: RigorousValue, name: str) -> RigorousValue:
    p = x.precision
    d, u = _down(p), _up(p)
    lo, hi = x.lower, x.upper
    if gmpy2.is_infinite(lo) or gmpy2.is_infinite(hi) or u.sub(hi, lo) >= 6:
        return RigorousValue(mpfr(-1), mpfr(1), p)
    fd, fu = getattr(d, name), getattr(u, name)
    vals_lo = [fd(lo), fd(hi)]
    vals_hi = [fu(lo), fu(hi)]
    pil, piu = d.const_pi(), u.const_pi()
    # extrema of cos at m*pi, of sin at (m + 1/2)*pi; value (-1)**m in both cases
    offset = 0 if name == "cos" else 1
    m_lo = math.floor(float(lo) / math.pi) - 2
    m_hi = math.ceil(float(hi) / math.pi) + 2
    for m in range(m_lo, m_hi + 1):
        k = 2 * m + offset
        if k >= 0:
            a, b = d.div(d.mul(pil, k), 2), u.div(u.mul(piu, k), 2)
        else:
            a, b = d.div(d.mul(piu, k), 2), u.div(u.mul(pil, k), 2)
        if b >= lo and a <= hi:
            v = mpfr(1) if m % 2 == 0 else mpfr(-1)
            vals_lo.append(v)
            vals_hi.append(v)
    lower = max(min(vals_lo), mpfr(-1))
    upper = min(max(vals_hi), mpfr(1))
    return RigorousValue(lower, upper, p)


def cos(x: RigorousValue) -> RigorousValue:
    return _trig(x, "cos")


def sin(x: RigorousValue) -> RigorousValue:
    return _trig(x, "sin")
