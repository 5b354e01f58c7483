from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpclass.certificates import rho
from lpclass.quotient import CoefficientStream, QuotientSpec, coefficient_exact
from lpclass.rigor import RigorousValue, SignVerdict, pi, rv, sign_of, to_fraction
from lpclass.series import (CircleSeries, eval_f, eval_phi, eval_phi_complex, eval_phi_mvf, eval_phi_prime,
                            eval_series, phi_floats, tail_bound)
from lpclass.theta import eval_g

from support import near, width

# direct mpmath summation (oracles.phi_sum / f_sum / phi_prime_sum / phi_complex_sum), 40 digits
PHI_45_AT_1 = "0.2376558596191101083755433559510856837733"
PHI_45_AT_2 = "-0.09751248437890600586242674827576279640105"
F_34_AT_1 = "2.361888086827817778757989464254829484211"
F_45_AT_2 = "4.102512515628906494143676767349249124528"
PHI_PRIME_45_AT_2 = "-0.1450312031386708984512328624725669622365"
PHI_45_RHO2_THIRD_PI = ("-5.038919454784572918887251098241458051525", "8.727880775223637150905228820480133081376")

SPEC = QuotientSpec(4, 5)


def test_phi_at_zero_is_one():
    value = eval_phi(SPEC, 0)
    assert value.contains(1) and width(value) == 0


def test_phi_at_one_positive_and_matches_oracle():
    value = eval_phi(SPEC, 1)
    assert sign_of(value) is SignVerdict.STRICTLY_POSITIVE
    assert near(value, PHI_45_AT_1)


def test_phi_at_two_negative_and_matches_oracle():
    value = eval_phi(SPEC, 2)
    assert sign_of(value) is SignVerdict.STRICTLY_NEGATIVE
    assert near(value, PHI_45_AT_2)
    assert width(value) < Fraction(1, 10**30)


@pytest.mark.parametrize("a, b, x, expected", [(3, 4, 1, F_34_AT_1), (4, 5, 2, F_45_AT_2)])
def test_f_matches_direct_summation(a, b, x, expected):
    assert near(eval_f(QuotientSpec(a, b), x), expected)


def test_f_at_zero():
    assert eval_f(SPEC, 0).contains(1)


def test_phi_prime_examples():
    assert eval_phi_prime(SPEC, 0).contains(-1)
    assert eval_phi_prime(SPEC, Fraction(1, 100)).upper < 0
    assert near(eval_phi_prime(SPEC, 2), PHI_PRIME_45_AT_2)


def test_phi_prime_against_central_difference():
    h = Fraction(1, 10**8)
    fd = (eval_phi(SPEC, 2 + h) - eval_phi(SPEC, 2 - h)) / (2 * h)
    assert abs(to_fraction(fd.mid) - to_fraction(eval_phi_prime(SPEC, 2).mid)) < Fraction(1, 10**6)


def test_complex_on_real_axis():
    r = rv(3)
    re, im = eval_phi_complex(SPEC, r, 0)
    assert im.contains(0)
    assert re.overlaps(eval_phi(SPEC, 3))
    re, im = eval_phi_complex(SPEC, r, pi())
    assert re.overlaps(eval_f(SPEC, 3))
    assert im.contains_zero()


def test_complex_matches_direct_summation():
    re, im = eval_phi_complex(SPEC, rho(SPEC, 2), pi() / 3)
    assert near(re, PHI_45_RHO2_THIRD_PI[0], tol="1e-25")
    assert near(im, PHI_45_RHO2_THIRD_PI[1], tol="1e-25")


def test_circle_series_slope_matches_difference_quotient():
    series = CircleSeries(SPEC, 10)
    h = Fraction(1, 10**9)
    (r0, i0), (dr, di) = series.value_and_slope(Fraction(1, 2))
    (r1, i1), _ = series.value_and_slope(Fraction(1, 2) + h)
    assert abs(to_fraction((r1 - r0).mid) / h - to_fraction(dr.mid)) < Fraction(1, 10**4)
    assert abs(to_fraction((i1 - i0).mid) / h - to_fraction(di.mid)) < Fraction(1, 10**4)


def test_interval_input_encloses_samples():
    x = RigorousValue.hull_of(Fraction(3, 2), Fraction(5, 2))
    box = eval_phi_mvf(SPEC, x)
    for t in np.linspace(1.5, 2.5, 11):
        assert box.overlaps(eval_phi(SPEC, Fraction(repr(float(t)))))


def test_phi_floats_agree_with_enclosures():
    xs = np.array([0.0, 0.5, 1.0, 2.0, 3.5])
    approx = phi_floats(SPEC, xs)
    for x, y in zip(xs, approx):
        exact = eval_phi(SPEC, Fraction(x))
        assert abs(float(exact.mid) - y) < 1e-12


@pytest.mark.parametrize("c", [Fraction(4), Fraction(9, 4)])
def test_constant_quotient_reduces_to_partial_theta(c):
    root = Fraction(2) if c == 4 else Fraction(3, 2)
    spec = QuotientSpec(c, c)
    for x in (Fraction(1, 2), Fraction(3), Fraction(7)):
        assert eval_phi(spec, x).overlaps(eval_g(root, -root * x))


def test_alternating_enclosure_between_partial_sums():
    x = Fraction(2)
    value = eval_phi(SPEC, x)
    partial = [Fraction(0)]
    for k in range(30):
        partial.append(partial[-1] + coefficient_exact(SPEC, k) * (-x) ** k)
    # the terms shrink from k = 1 on, so consecutive partial sums bracket the value
    # while the next term (down to about 1e-39 at n = 10) still exceeds the enclosure width
    for n in range(3, 11):
        lo, hi = sorted((partial[n], partial[n + 1]))
        assert lo <= to_fraction(value.lower) and to_fraction(value.upper) <= hi


# -- properties ----------------------------------------------------------------

quotients = st.fractions(min_value=Fraction(11, 10), max_value=9, max_denominator=100)
points = st.fractions(min_value=-40, max_value=40, max_denominator=64)


def _partial_sum(spec, x, n):
    return sum(coefficient_exact(spec, k) * x ** k for k in range(n + 1))


@settings(max_examples=30, deadline=None)
@given(quotients, quotients, points)
def test_tail_bound_soundness(a, b, x):
    spec = QuotientSpec(a, b)
    tb = tail_bound(CoefficientStream(spec), abs(x), 64)
    n = tb.cutoff
    gap = abs(_partial_sum(spec, x, 2 * n + 2) - _partial_sum(spec, x, n))
    assert gap <= to_fraction(tb.bound.upper) * 2


@settings(max_examples=30, deadline=None)
@given(quotients, quotients, points)
def test_precision_doubling_nests_series(a, b, x):
    spec = QuotientSpec(a, b)
    coarse = eval_f(spec, x, 64)
    fine = eval_f(spec, x, 128)
    assert coarse.overlaps(fine)
    assert width(fine) <= width(coarse) + Fraction(1, 2**100)


@settings(max_examples=20, deadline=None)
@given(quotients, quotients, st.fractions(min_value=Fraction(1, 2), max_value=6, max_denominator=16))
def test_derivative_matches_finite_difference(a, b, x):
    spec = QuotientSpec(a, b)
    h = Fraction(1, 10**6)
    fd = (eval_phi(spec, x + h) - eval_phi(spec, x - h)) / (2 * h)
    slope = eval_phi_prime(spec, x)
    scale = max(1, abs(to_fraction(slope.mid)))
    assert abs(to_fraction(fd.mid) - to_fraction(slope.mid)) <= Fraction(1, 10**6) * scale


@settings(max_examples=20, deadline=None)
@given(quotients, quotients)
def test_phi_positive_on_unit_interval(a, b):
    spec = QuotientSpec(a, b)
    edges = [Fraction(k, 16) for k in range(17)]
    for lo, hi in zip(edges, edges[1:]):
        assert sign_of(eval_phi_mvf(spec, RigorousValue.hull_of(lo, hi))) is SignVerdict.STRICTLY_POSITIVE


@settings(max_examples=20, deadline=None)
@given(quotients, quotients, st.fractions(min_value=-20, max_value=20, max_denominator=8))
def test_point_evaluation_matches_long_exact_sum(a, b, x):
    spec = QuotientSpec(a, b)
    value = eval_series(CoefficientStream(spec), x, 96)
    assert value.contains(_partial_sum(spec, x, 80)) or near(value, float(_partial_sum(spec, x, 80)), "1e-12")
