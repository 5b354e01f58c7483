from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpclass.quotient import (CoefficientStream, ParameterError, QuotientSpec, coefficient, coefficient_exact,
                              exponents, format_rational, parameter_value, quotient_roundtrip)
from lpclass.rigor import ConfigurationError

from oracles import brute_coefficients, brute_exponents


@pytest.mark.parametrize("k, expected", [(0, (0, 0)), (1, (0, 0)), (4, (4, 2)), (5, (6, 4)), (7, (12, 9))])
def test_exponent_examples(k, expected):
    assert exponents(k) == expected


def test_exponents_match_brute_force_product():
    for k in range(51):
        assert exponents(k) == brute_exponents(k)


def test_closed_form_exponent_shapes():
    for m in range(1, 20):
        assert exponents(2 * m) == (m * m, m * (m - 1))
        assert exponents(2 * m + 1) == (m * (m + 1), m * m)


@pytest.mark.parametrize("a, b, k, expected", [
    (4, 5, 0, Fraction(1)),
    (4, 5, 2, Fraction(1, 4)),
    (3, 4, 4, Fraction(1, 1296)),
])
def test_coefficient_examples(a, b, k, expected):
    spec = QuotientSpec(a, b)
    assert coefficient(spec, k).contains(expected)
    assert coefficient_exact(spec, k) == expected


def test_coefficients_match_quotient_recursion():
    spec = QuotientSpec(Fraction(7, 2), Fraction(21, 5))
    assert [coefficient_exact(spec, k) for k in range(25)] == brute_coefficients(Fraction(7, 2), Fraction(21, 5), 24)


@pytest.mark.parametrize("a, b, n, expected", [(4, 5, 6, 4), (4, 5, 7, 5), ("3.5", "4.2", 9, Fraction(21, 5))])
def test_quotient_roundtrip(a, b, n, expected):
    assert quotient_roundtrip(QuotientSpec.parse(a, b), n).contains(expected)


def test_constant_case_is_partial_theta_scaling():
    spec = QuotientSpec(3, 3)
    for k in range(12):
        assert coefficient_exact(spec, k) == Fraction(1, 3 ** (k * (k - 1) // 2))


def test_parameters_must_exceed_one():
    with pytest.raises(ParameterError):
        QuotientSpec(1, 2)
    with pytest.raises(ParameterError):
        QuotientSpec(2, "0.5")


def test_precision_below_minimum():
    with pytest.raises(ConfigurationError):
        coefficient(QuotientSpec(4, 5), 3, 8)


def test_float_parameters_read_as_decimals():
    assert QuotientSpec(3.7, 4.1) == QuotientSpec(Fraction(37, 10), Fraction(41, 10))
    assert parameter_value("2.25") == Fraction(9, 4)


@pytest.mark.parametrize("q, text", [(Fraction(7, 2), "3.5"), (Fraction(4), "4"), (Fraction(1, 3), "1/3")])
def test_format_rational(q, text):
    assert format_rational(q) == text


def test_stream_ratio_encloses_exact_ratio():
    spec = QuotientSpec(4, 5)
    stream = CoefficientStream(spec)
    for k in range(10):
        exact = coefficient_exact(spec, k + 1) / coefficient_exact(spec, k)
        assert stream.term_ratio(k, 96).contains(exact)


quotients = st.fractions(min_value=Fraction(11, 10), max_value=12, max_denominator=1000)


@settings(max_examples=40, deadline=None)
@given(quotients, quotients, st.integers(2, 30))
def test_roundtrip_property(a, b, n):
    spec = QuotientSpec(a, b)
    assert quotient_roundtrip(spec, n, 64).contains(spec.quotient(n))


@settings(max_examples=40, deadline=None)
@given(quotients, quotients, st.integers(2, 40))
def test_telescoping_ratio_identity(a, b, k):
    spec = QuotientSpec(a, b)
    c = [coefficient_exact(spec, j) for j in (k - 2, k - 1, k)]
    assert c[2] / c[1] == c[1] / c[0] / spec.quotient(k)
