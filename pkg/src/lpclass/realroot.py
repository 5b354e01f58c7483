"""Real-root counting by Sturm sequences and unit-disk counting by Schur–Cohn.

Exact polynomials (rational coefficients) go through integer pseudo-remainder
sequences and give decisions.  Polynomials with enclosure coefficients use an
interval Sturm chain that either certifies every leading coefficient and the
final constant, or raises :class:`~lpclass.rigor.Inconclusive`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .rigor import DEFAULT_PRECISION, Inconclusive, RigorousValue, rv, to_fraction


class InconsistencyError(ArithmeticError):
    """Two certified computations disagree, or a promised property fails."""


def _is_zero(c) -> bool:
    if isinstance(c, RigorousValue):
        return c.lower == 0 and c.upper == 0
    return c == 0


def _sign(c) -> int:
    """Certified sign of a coefficient; raises Inconclusive if undecidable."""
    if isinstance(c, RigorousValue):
        if c.lower > 0:
            return 1
        if c.upper < 0:
            return -1
        if c.lower == 0 and c.upper == 0:
            return 0
        raise Inconclusive("coefficient sign is not certified")
    return (c > 0) - (c < 0)


class Polynomial:
    """Coefficients in ascending order; trailing zeros are trimmed."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable):
        coeffs = []
        for c in coefficients:
            coeffs.append(c if isinstance(c, RigorousValue) else to_fraction(c))
        while coeffs and _is_zero(coeffs[-1]):
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    @classmethod
    def from_roots(cls, roots: Sequence, leading=1) -> "Polynomial":
        p = cls([leading])
        for r in roots:
            p = p * cls([-to_fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def exact(self) -> bool:
        return not any(isinstance(c, RigorousValue) for c in self.coefficients)

    def is_zero(self) -> bool:
        return not self.coefficients

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, k: int):
        return self.coefficients[k]

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients) if self.exact else id(self)

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coefficients)!r})"

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial([])
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] = a * b + out[i + j]
        return Polynomial(out)

    def derivative(self) -> "Polynomial":
        return Polynomial([c * k for k, c in enumerate(self.coefficients)][1:])

    def reversed(self) -> "Polynomial":
        """w^n p(1/w)."""
        return Polynomial(reversed(self.coefficients))

    def scaled(self, r) -> "Polynomial":
        """p(r w)."""
        out, power = [], 1
        for c in self.coefficients:
            out.append(c * power)
            power = power * r
        return Polynomial(out)

    def enclosed(self, precision: int = DEFAULT_PRECISION) -> "Polynomial":
        return Polynomial([rv(c, precision) for c in self.coefficients])

    def is_palindromic(self) -> bool:
        c = self.coefficients
        return self.exact and all(c[k] == c[-1 - k] for k in range(len(c)))

    def float_coefficients(self) -> list[float]:
        return [float(c.mid) if isinstance(c, RigorousValue) else float(c) for c in self.coefficients]


# -- exact integer polynomial arithmetic ------------------------------------

def _primitive(coeffs: list[int]) -> list[int]:
    g = reduce(math.gcd, coeffs, 0)
    if g > 1:
        coeffs = [c // g for c in coeffs]
    return coeffs


def _to_integer(p: Polynomial) -> list[int]:
    """Positive rational multiple of p with coprime integer coefficients."""
    den = reduce(lambda acc, c: acc * c.denominator // math.gcd(acc, c.denominator), p.coefficients, 1)
    return _primitive([int(c * den) for c in p.coefficients])


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _prem(u: list[int], v: list[int]) -> list[int]:
    """lc(v)^(deg u - deg v + 1) * u mod v, over the integers."""
    r = list(u)
    dv = len(v) - 1
    lv = v[-1]
    steps = len(u) - len(v) + 1
    for _ in range(steps):
        if len(r) - 1 < dv:
            r = [c * lv for c in r]
            continue
        lr = r[-1]
        shift = len(r) - 1 - dv
        r = [c * lv for c in r]
        for i, c in enumerate(v):
            r[i + shift] -= lr * c
        r.pop()
        _trim(r)
    return r


def _int_derivative(c: list[int]) -> list[int]:
    return [k * c[k] for k in range(1, len(c))]


def _int_gcd(u: list[int], v: list[int]) -> list[int]:
    u, v = _primitive(list(u)), _primitive(list(v))
    if len(u) < len(v):
        u, v = v, u
    while v:
        r = _trim(_prem(u, v))
        u, v = v, (_primitive(r) if r else [])
    if u and u[-1] < 0:
        u = [-c for c in u]
    return u


def _int_divexact(u: list[int], v: list[int]) -> list[int]:
    """u / v for integer polynomials known to divide over Q; result made primitive."""
    q = [Fraction(0)] * (len(u) - len(v) + 1)
    r = [Fraction(c) for c in u]
    for k in range(len(q) - 1, -1, -1):
        q[k] = r[k + len(v) - 1] / v[-1]
        for i, c in enumerate(v):
            r[k + i] -= q[k] * c
    den = reduce(lambda acc, c: acc * c.denominator // math.gcd(acc, c.denominator), q, 1)
    return _primitive([int(c * den) for c in q])


def _sturm_chain(c: list[int]) -> list[list[int]]:
    chain = [c, _primitive(_int_derivative(c))]
    while True:
        u, v = chain[-2], chain[-1]
        if len(v) <= 1:
            break
        r = _trim(_prem(u, v))
        if not r:
            break
        # prem multiplies by lc(v)^d; restore the sign of the true remainder
        d = len(u) - len(v) + 1
        if v[-1] < 0 and d % 2:
            r = [-x for x in r]
        r = [-x for x in _primitive(r)]
        g = reduce(math.gcd, r, 0)
        chain.append([x // g for x in r] if g > 1 else r)
    return chain


def _sign_at(c: list[int], x) -> int:
    """Sign of the polynomial at an exact point or at +-inf."""
    if x == math.inf:
        return (c[-1] > 0) - (c[-1] < 0)
    if x == -math.inf:
        s = (c[-1] > 0) - (c[-1] < 0)
        return s if (len(c) - 1) % 2 == 0 else -s
    q = to_fraction(x)
    u, v = q.numerator, q.denominator
    n = len(c) - 1
    total = 0
    for k, a in enumerate(c):
        total += a * u**k * v ** (n - k)
    return (total > 0) - (total < 0)


def _variations(signs: Iterable[int]) -> int:
    count, last = 0, 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def _normalize_endpoint(x):
    if x is None:
        return None
    if isinstance(x, float) and math.isinf(x):
        return x
    return to_fraction(x)


def _exact_distinct_count(c: list[int], lo, hi) -> int:
    if len(c) <= 1:
        return 0
    g = _int_gcd(c, _int_derivative(c))
    s = _int_divexact(c, g) if len(g) > 1 else c
    if len(s) <= 1:
        return 0
    chain = _sturm_chain(s)
    return _variations(_sign_at(q, lo) for q in chain) - _variations(_sign_at(q, hi) for q in chain)


# -- interval Sturm ---------------------------------------------------------

def _interval_chain(p: Polynomial) -> list[list[RigorousValue]]:
    """Sturm chain over enclosures; every leading coefficient certified nonzero."""
    first = list(p.coefficients)
    chain = [first, [c * k for k, c in enumerate(first)][1:]]
    _sign(chain[1][-1])
    while len(chain[-1]) > 1:
        u, v = list(chain[-2]), chain[-1]
        dv = len(v) - 1
        while len(u) - 1 >= dv:
            factor = u[-1] / v[-1]
            shift = len(u) - 1 - dv
            for i in range(dv):
                u[i + shift] = u[i + shift] - factor * v[i]
            u.pop()
        if not u or all(_is_zero(c) for c in u):
            raise Inconclusive("interval Sturm chain terminated early: repeated roots possible")
        rem = [-c for c in u]
        while rem and _is_zero(rem[-1]):
            rem.pop()
        _sign(rem[-1])  # degree must be certified
        chain.append(rem)
    return chain


def _interval_sign_at(c: list, x) -> int:
    if x == math.inf:
        return _sign(c[-1])
    if x == -math.inf:
        s = _sign(c[-1])
        return s if (len(c) - 1) % 2 == 0 else -s
    point = rv(x, c[-1].precision)
    acc = rv(0, point.precision)
    for a in reversed(c):
        acc = acc * point + a
    s = _sign(acc)
    if s == 0:
        raise Inconclusive("chain vanishes at an endpoint")
    return s


def _interval_distinct_count(p: Polynomial, lo, hi) -> int:
    chain = _interval_chain(p)
    return (_variations(_interval_sign_at(q, lo) for q in chain)
            - _variations(_interval_sign_at(q, hi) for q in chain))


# -- public API ------------------------------------------------------------

def _trim_zero_roots(p: Polynomial) -> tuple[Polynomial, int]:
    c = list(p.coefficients)
    k = 0
    while k < len(c) and _is_zero(c[k]):
        k += 1
    return Polynomial(c[k:]), k


def sturm_count(p: Polynomial, lo=-math.inf, hi=math.inf) -> int:
    """Number of distinct real roots in (lo, hi]."""
    if p.degree < 1:
        raise ValueError("sturm_count needs a nonconstant polynomial")
    lo, hi = _normalize_endpoint(lo), _normalize_endpoint(hi)
    if not lo < hi:
        return 0
    if p.exact:
        return _exact_distinct_count(_to_integer(p), lo, hi)
    q, zeros = _trim_zero_roots(p)
    count = 0
    if zeros and lo < 0 <= hi:
        count = 1
    if q.degree < 1:
        return count
    return count + _interval_distinct_count(q, lo, hi)


def real_root_count(p: Polynomial, lo=-math.inf, hi=math.inf) -> int:
    """Real roots in (lo, hi] counted with multiplicity."""
    if p.degree < 1:
        return 0
    lo, hi = _normalize_endpoint(lo), _normalize_endpoint(hi)
    if not p.exact:
        q, zeros = _trim_zero_roots(p)
        count = zeros if lo < 0 <= hi else 0
        if q.degree >= 1:
            # the chain certifies square-freeness, so distinct = with multiplicity
            count += _interval_distinct_count(q, lo, hi)
        return count
    c = _to_integer(p)
    total = 0
    while len(c) > 1:
        total += _exact_distinct_count(c, lo, hi)
        c = _int_gcd(c, _int_derivative(c))
    return total


def all_real(p: Polynomial) -> bool:
    """True iff every root of p is real (counted with multiplicity)."""
    if p.degree < 1:
        return True
    return real_root_count(p) == p.degree


def nonreal_count(p: Polynomial) -> int:
    """Number of nonreal roots with multiplicity."""
    return max(p.degree, 0) - real_root_count(p)


def square_free_part(p: Polynomial) -> Polynomial:
    if not p.exact:
        raise TypeError("square-free part needs exact coefficients")
    if p.degree < 1:
        return p
    c = _to_integer(p)
    g = _int_gcd(c, _int_derivative(c))
    return Polynomial(_int_divexact(c, g) if len(g) > 1 else c)


def _palindromic_circle_roots(p: Polynomial) -> int:
    """Distinct roots on |w| = 1 of an exact palindromic p of even degree.

    p(w) = w^m q(w + 1/w); circle roots correspond to roots of q in [-2, 2].
    """
    m = p.degree // 2
    c = p.coefficients
    # build q by peeling (w + 1/w)^k terms from the top
    q = [Fraction(0)] * (m + 1)
    rest = {k - m: c[k] for k in range(len(c))}
    for k in range(m, -1, -1):
        coef = rest.get(k, Fraction(0))
        q[k] = coef
        if coef:
            for i in range(k + 1):
                e = k - 2 * i
                rest[e] = rest.get(e, Fraction(0)) - coef * math.comb(k, i)
    qp = Polynomial(q)
    if qp.degree < 1:
        return 0
    count = sturm_count(qp, Fraction(-2), Fraction(2))
    return count + (1 if qp(Fraction(-2)) == 0 else 0)


def unit_disk_count(p: Polynomial, min_modulus=None) -> int:
    """Roots of p in |w| < 1 with multiplicity (Schur–Cohn reduction).

    p must have no roots on |w| = 1.  When a reduction step is degenerate
    (|c_0| = |c_n| up to enclosure), a certified lower bound ``min_modulus``
    of |p| on the circle lets the disk shrink to radius 1 - eps first: no
    root can enter the annulus because sum k|c_k| * eps < min_modulus.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    q, zeros = _trim_zero_roots(p)
    if q.degree < 1:
        return zeros
    try:
        return zeros + _schur_cohn(q)
    except (_Degenerate, Inconclusive):
        if q.is_palindromic() and q.degree % 2 == 0 and zeros == 0:
            if _palindromic_circle_roots(q):
                raise InconsistencyError("palindromic polynomial has roots on the unit circle")
            return q.degree // 2
        if min_modulus is None:
            min_modulus = circle_min_modulus(q)
        return zeros + _schur_cohn(_shrink(q, min_modulus))


def circle_min_modulus(p: Polynomial, precision: int = DEFAULT_PRECISION, max_nodes: int = 1 << 16):
    """Certified positive lower bound of |p| on |w| = 1, or Inconclusive."""
    from . import rigor

    lip = rv(0, precision)
    for k, c in enumerate(p.coefficients):
        lip = lip + abs(rv(c, precision)) * k
    nodes = 16 * max(p.degree, 1)
    two_pi = rigor.pi(precision) * 2
    while nodes <= max_nodes:
        h = two_pi / nodes
        slack = lip * h / 2
        best = None
        for i in range(nodes):
            theta = two_pi * Fraction(i, nodes)
            c, s = rigor.cos(theta), rigor.sin(theta)
            re, im, er, ei = rv(0, precision), rv(0, precision), rv(1, precision), rv(0, precision)
            for coef in p.coefficients:
                re, im = re + er * coef, im + ei * coef
                er, ei = er * c - ei * s, er * s + ei * c
            modulus = (abs(re) ** 2 + abs(im) ** 2).sqrt()
            bound = rigor._down(precision).sub(modulus.lower, slack.upper)
            if bound <= 0:
                break
            best = bound if best is None else min(best, bound)
        else:
            return RigorousValue(best, best, precision)
        nodes *= 4
    raise Inconclusive("could not separate the polynomial from the unit circle")


def _shrink(p: Polynomial, min_modulus) -> Polynomial:
    prec = max((c.precision for c in p.coefficients if isinstance(c, RigorousValue)), default=DEFAULT_PRECISION)
    m = rv(min_modulus, prec) if not isinstance(min_modulus, RigorousValue) else min_modulus
    if m.lower <= 0:
        raise Inconclusive("min-modulus bound is not positive")
    lip = rv(0, prec)
    for k, c in enumerate(p.coefficients):
        lip = lip + abs(rv(c, prec)) * k
    # eps rounded down to a short dyadic so the shrunk coefficients stay tight
    eps = (m / (lip * 2)).lower
    eps = Fraction(math.ldexp(math.floor(math.ldexp(float(eps), 60)), -60))
    if eps <= 0:
        raise Inconclusive("shrink radius underflow")
    if not (lip * eps).certainly_lt(m):
        raise Inconclusive("shrink radius too large")
    return Polynomial([rv(c, prec) for c in p.coefficients]).scaled(rv(1 - eps, prec))


class _Degenerate(Exception):
    pass


def _schur_cohn(p: Polynomial) -> int:
    q, zeros = _trim_zero_roots(p)
    if zeros:
        return zeros + _schur_cohn(q)
    n = q.degree
    if n == 0:
        return 0
    c = q.coefficients
    _sign(c[n])  # the degree must be certain
    delta = c[0] * c[0] - c[n] * c[n]
    try:
        s = _sign(delta)
    except Inconclusive:
        raise _Degenerate from None
    if s == 0:
        raise _Degenerate
    reduced = [c[0] * c[k] - c[n] * c[n - k] for k in range(n)]
    t = Polynomial(reduced)
    if t.is_zero():
        raise _Degenerate
    inner = _schur_cohn(t) if t.degree >= 1 else 0
    return inner if s > 0 else n - inner
