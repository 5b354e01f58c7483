"""Shared helpers for comparing enclosures against frozen reference decimals."""

from fractions import Fraction

from lpclass.rigor import RigorousValue, to_fraction


def near(x: RigorousValue, reference, tol="1e-30") -> bool:
    """reference lies in x widened by tol on both sides."""
    ref = Fraction(str(reference))
    slack = Fraction(tol)
    return to_fraction(x.lower) - slack <= ref <= to_fraction(x.upper) + slack


def width(x: RigorousValue) -> Fraction:
    return to_fraction(x.upper) - to_fraction(x.lower)
