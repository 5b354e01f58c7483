"""The two-parameter family with 2-periodic second quotients.

    f(x) = sum_k a_k x^k,   a_0 = a_1 = 1,
    a_{n-1}^2 / (a_{n-2} a_n) = a  (n even),  = b  (n odd).

Coefficients are produced from closed-form exponents, a_k = a^-e_a(k) b^-e_b(k),
never by iterated products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .rigor import DEFAULT_PRECISION, RigorousValue, check_precision, rv, to_fraction


class ParameterError(ValueError):
    """Parameters outside the admissible region of an operation."""


def parameter_value(value) -> Fraction:
    """Exact rational for a user-facing parameter; floats are read as their shortest decimal."""
    if isinstance(value, float):
        return Fraction(repr(value))
    return to_fraction(value)


@dataclass(frozen=True)
class QuotientSpec:
    """Second quotient ``a`` at even indices and ``b`` at odd indices."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", parameter_value(self.a))
        object.__setattr__(self, "b", parameter_value(self.b))
        if self.a <= 1 or self.b <= 1:
            raise ParameterError(f"need a > 1 and b > 1, got a={self.a}, b={self.b}")

    @classmethod
    def parse(cls, a, b) -> "QuotientSpec":
        return cls(parameter_value(a), parameter_value(b))

    def quotient(self, n: int) -> Fraction:
        """q_n for n >= 2."""
        if n < 2:
            raise ValueError("second quotients start at n = 2")
        return self.a if n % 2 == 0 else self.b

    def __str__(self) -> str:
        return f"(a={format_rational(self.a)}, b={format_rational(self.b)})"


def format_rational(q: Fraction) -> str:
    """Plain decimal when terminating, otherwise p/q."""
    return _is_decimal(q) or str(q)


def _is_decimal(q: Fraction) -> str | None:
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return None
    places = max(twos, fives)
    scaled = q * 10**places
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}" if places else sign + digits


def exponents(k: int) -> tuple[int, int]:
    """Exponents (e_a, e_b) with a_k = a^-e_a * b^-e_b."""
    if k < 0:
        raise ValueError("index must be non-negative")
    m, odd = divmod(k, 2)
    if odd:
        return m * (m + 1), m * m
    return m * m, m * (m - 1)


def partial_product_exponents(k: int) -> tuple[int, int]:
    """Exponents of q_2 q_3 ... q_k, i.e. of a_{k-1}/a_k (k >= 1)."""
    if k < 1:
        raise ValueError("index must be >= 1")
    return k // 2, (k - 1) // 2


def coefficient_exact(spec: QuotientSpec, k: int) -> Fraction:
    ea, eb = exponents(k)
    return 1 / (spec.a**ea * spec.b**eb)


@lru_cache(maxsize=1 << 16)
def _coefficient(a: Fraction, b: Fraction, k: int, precision: int) -> RigorousValue:
    ea, eb = exponents(k)
    value = rv(1, precision)
    if ea:
        value = value * rv(a, precision) ** (-ea)
    if eb:
        value = value * rv(b, precision) ** (-eb)
    return value


def coefficient(spec: QuotientSpec, k: int, precision: int = DEFAULT_PRECISION) -> RigorousValue:
    check_precision(precision)
    if k < 0:
        raise ValueError("index must be non-negative")
    return _coefficient(spec.a, spec.b, k, precision)


@lru_cache(maxsize=1 << 16)
def _partial_product(a: Fraction, b: Fraction, k: int, precision: int) -> RigorousValue:
    ea, eb = partial_product_exponents(k)
    return rv(a, precision) ** ea * rv(b, precision) ** eb


def quotient_roundtrip(spec: QuotientSpec, n: int, precision: int = DEFAULT_PRECISION) -> RigorousValue:
    """Recompute q_n = a_{n-1}^2 / (a_{n-2} a_n) from coefficient enclosures."""
    if n < 2:
        raise ValueError("n must be >= 2")
    c = [coefficient(spec, k, precision) for k in (n - 2, n - 1, n)]
    return c[1] ** 2 / (c[0] * c[2])


class CoefficientStream:
    """On-demand coefficients a_k of one family member.

    ``term_ratio(k)`` encloses a_{k+1}/a_k = 1/(q_2 ... q_{k+1}); it is
    non-increasing in k, which the tail bounds rely on.
    """

    def __init__(self, spec: QuotientSpec):
        self.spec = spec

    def __getitem__(self, k: int) -> tuple[tuple[int, int], Fraction]:
        return exponents(k), coefficient_exact(self.spec, k)

    def coefficient(self, k: int, precision: int) -> RigorousValue:
        return _coefficient(self.spec.a, self.spec.b, k, precision)

    def term_ratio(self, k: int, precision: int) -> RigorousValue:
        return 1 / _partial_product(self.spec.a, self.spec.b, k + 1, precision)

    def partial_product(self, k: int, precision: int) -> RigorousValue:
        """q_2 q_3 ... q_k."""
        return _partial_product(self.spec.a, self.spec.b, k, precision)

    def float_coefficients(self, count: int) -> list[float]:
        import math

        la, lb = math.log(self.spec.a), math.log(self.spec.b)
        out = []
        for k in range(count):
            ea, eb = exponents(k)
            out.append(math.exp(-(ea * la + eb * lb)))
        return out
