"""Certified evaluation of the family's power series with explicit tails.

A stream supplies enclosures of the coefficients c_k and of the consecutive
ratio c_{k+1}/c_k, which must be non-increasing in k.  The cutoff N is the
first index where the weighted term ratio at radius r drops to 1/2; from then
on terms at least halve, so the discarded tail is at most twice the first
omitted term, or the first omitted term alone when the series alternates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

from gmpy2 import mpfr

from . import rigor
from .quotient import CoefficientStream, QuotientSpec
from .rigor import DEFAULT_PRECISION, RigorousValue, check_precision, neg, rv

MAX_TERMS = 100_000


class Stream(Protocol):
    def coefficient(self, k: int, precision: int) -> RigorousValue: ...

    def term_ratio(self, k: int, precision: int) -> RigorousValue: ...

    def float_coefficients(self, count: int) -> list[float]: ...


def as_stream(source) -> Stream:
    return CoefficientStream(source) if isinstance(source, QuotientSpec) else source


@dataclass(frozen=True)
class TailBound:
    """Terms beyond ``cutoff`` sum to at most ``bound.upper`` in modulus."""

    cutoff: int
    bound: RigorousValue


def _upper(radius, precision: int):
    if isinstance(radius, RigorousValue):
        return abs(radius).upper
    return rv(radius, precision).upper


def tail_bound(stream: Stream, radius, precision: int = DEFAULT_PRECISION, order: int = 0,
               min_cutoff: int = 0) -> TailBound:
    """Cutoff and tail bound for the weighted series at |x| <= radius.

    order 0 bounds sum c_k x^k, order 1 the derivative sum k c_k x^(k-1),
    order 2 the majorant sum k^2 c_k |x|^k.  The cutoff is the first index
    past ``min_cutoff`` where the term ratio is <= 1/2 and the first omitted
    term is below 2^-precision times the largest retained one.
    """
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    p = check_precision(precision)
    up = rigor._up(p)
    r = _upper(radius, p)
    half = mpfr("0.5")
    eps = mpfr(2) ** (-p)

    def term(k):
        c = stream.coefficient(k, p).upper
        if order == 0:
            return up.mul(c, up.pow(r, k))
        if order == 1:
            return up.mul(up.mul(c, mpfr(k)), up.pow(r, k - 1))
        return up.mul(up.mul(c, mpfr(k * k)), up.pow(r, k))

    k = 1 if order else 0
    scale = max(mpfr(1), term(k))
    while True:
        nxt = term(k + 1)
        if k >= min_cutoff:
            growth = up.mul(r, stream.term_ratio(k, p).upper)
            if order:
                step = up.div(mpfr(k + 1), mpfr(k))
                growth = up.mul(growth, step if order == 1 else up.mul(step, step))
            if growth <= half and nxt <= up.mul(eps, scale):
                return TailBound(k, RigorousValue(mpfr(0), nxt, p))
        scale = max(scale, nxt)
        k += 1
        if k > MAX_TERMS:
            raise rigor.Inconclusive(f"no cutoff below {MAX_TERMS} terms at radius {r}")


def _horner(stream: Stream, x: RigorousValue, n: int, p: int, order: int) -> RigorousValue:
    if order == 0:
        h = stream.coefficient(n, p)
        for k in range(n - 1, -1, -1):
            h = stream.coefficient(k, p) + x * h
        return h
    h = stream.coefficient(n, p) * n
    for k in range(n - 1, 0, -1):
        h = stream.coefficient(k, p) * k + x * h
    return h


def _signed_groups(stream: Stream, y, n: int, p: int, order: int, negative: bool):
    """Sums P(y), M(y) of the positive and negative terms at x = y or x = -y."""
    yv = RigorousValue(y, y, p)
    plus = rv(0, p)
    minus = rv(0, p)
    power = rv(1, p)
    for k in range(1 if order else 0, n + 1):
        term = stream.coefficient(k, p) * power
        if order:
            term = term * k
        if negative and (k - order) % 2:
            minus = minus + term
        else:
            plus = plus + term
        power = power * yv
    return plus, minus


def _tail_enclosure(tb: TailBound, x: RigorousValue, order: int) -> RigorousValue:
    t = tb.bound.upper
    p = tb.bound.precision
    if x.lower >= 0:
        return RigorousValue(mpfr(0), rigor._up(p).mul(t, 2), p)
    if x.upper <= 0:
        # alternating, magnitudes at least halving: sign of the first omitted term
        if (tb.cutoff + 1 - order) % 2:
            return RigorousValue(neg(t), mpfr(0), p)
        return RigorousValue(mpfr(0), t, p)
    t2 = rigor._up(p).mul(t, 2)
    return RigorousValue(neg(t2), t2, p)


def eval_series(stream: Stream, x, precision: int = DEFAULT_PRECISION, order: int = 0,
                min_cutoff: int = 0) -> RigorousValue:
    """Enclosure of S(x) (order 0) or S'(x) (order 1) over every point of ``x``."""
    p = check_precision(precision)
    x = rv(x, p)
    if x.lower < 0 < x.upper:
        left = eval_series(stream, RigorousValue(x.lower, mpfr(0), p), p, order, min_cutoff)
        right = eval_series(stream, RigorousValue(mpfr(0), x.upper, p), p, order, min_cutoff)
        return left.hull(right)
    tb = tail_bound(stream, x, p, order=order, min_cutoff=min_cutoff)
    n = tb.cutoff
    if x.is_point():
        body = _horner(stream, x, n, p, order)
    else:
        # each sign group is monotone in |x|, which beats interval Horner
        negative = x.upper <= 0
        y_lo, y_hi = (neg(x.upper), neg(x.lower)) if negative else (x.lower, x.upper)
        p_lo, m_lo = _signed_groups(stream, y_lo, n, p, order, negative)
        p_hi, m_hi = _signed_groups(stream, y_hi, n, p, order, negative)
        body = RigorousValue(rigor._down(p).sub(p_lo.lower, m_hi.upper),
                             rigor._up(p).sub(p_hi.upper, m_lo.lower), p)
    return body + _tail_enclosure(tb, x, order)


def eval_f(spec: QuotientSpec, x, precision: int = DEFAULT_PRECISION) -> RigorousValue:
    """Enclosure of f(x) = sum a_k x^k."""
    return eval_series(CoefficientStream(spec), x, precision)


def eval_phi(spec, x, precision: int = DEFAULT_PRECISION) -> RigorousValue:
    """Enclosure of phi(x) = f(-x)."""
    return eval_series(as_stream(spec), -rv(x, precision), precision)


def eval_phi_prime(spec, x, precision: int = DEFAULT_PRECISION) -> RigorousValue:
    """Enclosure of phi'(x) = -f'(-x)."""
    return -eval_series(as_stream(spec), -rv(x, precision), precision, order=1)


def eval_phi_mvf(spec, x, precision: int = DEFAULT_PRECISION) -> RigorousValue:
    """phi over an interval: monotone-split bound intersected with the mean-value form."""
    stream = as_stream(spec)
    p = check_precision(precision)
    x = rv(x, p)
    direct = eval_series(stream, -x, p)
    if x.is_point():
        return direct
    m = x.mid
    centre = eval_series(stream, RigorousValue(neg(m), neg(m), p), p)
    slope = -eval_series(stream, -x, p, order=1)
    offset = x - RigorousValue(m, m, p)
    return direct.intersect(centre + slope * offset)


def phi_floats(spec, xs):
    """Double-precision phi on an array; used only to choose candidates."""
    import numpy as np

    stream = as_stream(spec)
    xs = np.asarray(xs, dtype=float)
    xmax = float(np.max(np.abs(xs))) if xs.size else 1.0
    n = tail_bound(stream, max(xmax, 1.0), 64).cutoff + 3
    out = np.zeros_like(xs)
    for c in reversed(stream.float_coefficients(n + 1)):
        out = c - xs * out
    return out


# -- circles ----------------------------------------------------------------

def _cmul(ar, ai, br, bi):
    return ar * br - ai * bi, ar * bi + ai * br


class CircleSeries:
    """F(theta) = phi(r e^{i theta}) and F'(theta) at a fixed radius r.

    One cutoff serves value, derivative and the bound on |F''|; powers of
    e^{i theta} come from complex multiplication, not per-term trig calls.
    """

    def __init__(self, spec, radius, precision: int = DEFAULT_PRECISION):
        stream = as_stream(spec)
        p = self.precision = check_precision(precision)
        self.radius = rv(radius, p)
        if self.radius.lower <= 0:
            raise ValueError("radius must be positive")
        tb0 = tail_bound(stream, self.radius, p, order=0)
        tb2 = tail_bound(stream, self.radius, p, order=2)
        n = self.cutoff = max(tb0.cutoff, tb2.cutoff)
        up = rigor._up(p)
        r = self.radius.upper
        first = stream.coefficient(n + 1, p).upper
        # ratios at n are <= 1/2 for both weightings, so the tails are geometric
        self.tail0 = up.mul(2, up.mul(first, up.pow(r, n + 1)))
        self.tail2 = up.mul(2, up.mul(up.mul(first, mpfr((n + 1) ** 2)), up.pow(r, n + 1)))
        self.terms = []
        power = rv(1, p)
        for k in range(n + 1):
            mag = stream.coefficient(k, p) * power
            self.terms.append(-mag if k % 2 else mag)
            power = power * self.radius

    def second_derivative_bound(self):
        """Upper bound of |F''(theta)| over all theta."""
        up = rigor._up(self.precision)
        total = self.tail2
        for k, t in enumerate(self.terms):
            total = up.add(total, up.mul(mpfr(k * k), t.magnitude))
        return total

    def value_and_slope(self, theta):
        """Rectangular enclosures ((re, im), (re', im')) of F and F' at theta."""
        p = self.precision
        theta = rv(theta, p)
        c, s = rigor.cos(theta), rigor.sin(theta)
        re, im = self.terms[0], rv(0, p)
        dre, dim = rv(0, p), rv(0, p)
        er, ei = c, s
        for k in range(1, len(self.terms)):
            t = self.terms[k]
            tr, ti = t * er, t * ei
            re, im = re + tr, im + ti
            dre, dim = dre - ti * k, dim + tr * k
            er, ei = _cmul(er, ei, c, s)
        pad0 = RigorousValue(neg(self.tail0), self.tail0, p)
        # k <= k^2, so the order-2 tail also covers the derivative tail
        pad1 = RigorousValue(neg(self.tail2), self.tail2, p)
        return (re + pad0, im + pad0), (dre + pad1, dim + pad1)

    def value(self, theta):
        return self.value_and_slope(theta)[0]


def eval_phi_complex(spec, radius, theta, precision: int = DEFAULT_PRECISION):
    """Rectangular enclosure (re, im) of phi(radius * e^{i theta})."""
    return CircleSeries(spec, radius, precision).value(theta)


def float_value(x: RigorousValue) -> float:
    return float(x.mid) if math.isfinite(float(x.mid)) else float("nan")
