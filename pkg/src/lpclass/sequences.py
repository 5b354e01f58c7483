"""Multiplier and complex-zero-decreasing sequences induced by a family member.

When f = sum a_k x^k is in the class, (k! a_k) is a multiplier sequence and
(f(k)) never increases the number of nonreal zeros.  The checks here apply a
sequence coefficient-wise to polynomials and count zeros before and after.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .quotient import QuotientSpec, coefficient_exact
from .realroot import Polynomial, all_real, nonreal_count, real_root_count
from .rigor import DEFAULT_PRECISION, RigorousValue, rv, to_fraction
from .series import eval_f


class Provenance(enum.Enum):
    MULTIPLIER_FROM_SPEC = "MultiplierFromSpec"
    CZDS_FROM_SPEC = "CZDSFromSpec"
    USER_SUPPLIED = "UserSupplied"


@dataclass(frozen=True)
class GammaSequence:
    values: tuple
    provenance: Provenance = Provenance.USER_SUPPLIED
    certified: bool = True

    def __post_init__(self):
        vals = tuple(v if isinstance(v, RigorousValue) else to_fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int):
        return self.values[k]

    def apply(self, p: Polynomial) -> Polynomial:
        """sum gamma_k c_k z^k for p = sum c_k z^k."""
        if p.degree >= len(self):
            raise ValueError(f"sequence has {len(self)} terms, polynomial degree is {p.degree}")
        return Polynomial([g * c for g, c in zip(self.values, p.coefficients)])

    def to_json(self) -> dict:
        def enc(v):
            return v.to_json() if isinstance(v, RigorousValue) else str(v)

        return {"provenance": self.provenance.value, "certified": self.certified,
                "values": [enc(v) for v in self.values]}


def _is_member(spec: QuotientSpec) -> bool:
    from .membership import classify

    return classify(spec).is_member


def multiplier_sequence(spec: QuotientSpec, n_terms: int, precision: int = DEFAULT_PRECISION,
                        certified: bool | None = None) -> GammaSequence:
    """gamma_k = k! a_k as exact rationals; ``certified`` records membership of f."""
    if certified is None:
        certified = _is_member(spec)
    values = tuple(math.factorial(k) * coefficient_exact(spec, k) for k in range(n_terms))
    return GammaSequence(values, Provenance.MULTIPLIER_FROM_SPEC, certified)


def czds_sequence(spec: QuotientSpec, n_terms: int, precision: int = DEFAULT_PRECISION,
                  certified: bool | None = None) -> GammaSequence:
    """gamma_k = f(k), enclosed."""
    if certified is None:
        certified = _is_member(spec)
    values = tuple(eval_f(spec, rv(k, precision), precision) for k in range(n_terms))
    return GammaSequence(values, Provenance.CZDS_FROM_SPEC, certified)


def theta_sequence(a, n_terms: int) -> GammaSequence:
    """gamma_k = a^(-k^2), exact for rational a."""
    a = to_fraction(a)
    return GammaSequence(tuple(1 / a ** (k * k) for k in range(n_terms)))


def reciprocal_factorials(n_terms: int) -> GammaSequence:
    return GammaSequence(tuple(Fraction(1, math.factorial(k)) for k in range(n_terms)))


def jensen_polynomial(gamma: GammaSequence, n: int) -> Polynomial:
    """P_n(z) = sum_k C(n, k) gamma_k z^k."""
    if n >= len(gamma):
        raise ValueError(f"need at least {n + 1} terms, have {len(gamma)}")
    return Polynomial([math.comb(n, k) * gamma[k] for k in range(n + 1)])


def one_signed_roots(p: Polynomial) -> bool:
    """All roots real and of one sign (zero allowed on either side)."""
    if not all_real(p):
        return False
    nonpositive = real_root_count(p, -math.inf, 0)
    negative = nonpositive - _zero_multiplicity(p)
    return nonpositive == p.degree or negative == 0


def _zero_multiplicity(p: Polynomial) -> int:
    k = 0
    while k < len(p.coefficients) and p.coefficients[k] == 0:
        k += 1
    return k


def verify_ms(gamma: GammaSequence, p: Polynomial) -> bool:
    """Does gamma keep the real-rooted polynomial p real-rooted?"""
    if not all_real(p):
        raise ValueError("verify_ms needs a real-rooted input polynomial")
    return all_real(gamma.apply(p))


def verify_czds(gamma: GammaSequence, p: Polynomial) -> bool:
    """Does gamma avoid increasing the number of nonreal zeros of p?"""
    return nonreal_count(gamma.apply(p)) <= nonreal_count(p)


# -- corpora ------------------------------------------------------------------------

def real_rooted_corpus(seed: int, count: int = 100, degrees: tuple[int, int] = (2, 10),
                       root_range: tuple[int, int] = (-5, 5)) -> list[Polynomial]:
    """Products of linear factors with integer roots, reproducible from ``seed``."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(*degrees)
        out.append(Polynomial.from_roots([rng.randint(*root_range) for _ in range(n)]))
    return out


def mixed_corpus(seed: int, count: int = 60, nonreal_pairs: Sequence[int] = (0, 1, 2),
                 max_degree: int = 10) -> list[Polynomial]:
    """Polynomials with a prescribed number of conjugate pairs (Z_C in {0, 2, 4})."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        pairs = nonreal_pairs[i % len(nonreal_pairs)]
        p = Polynomial([1])
        for _ in range(pairs):
            c = rng.randint(-3, 3)
            d = rng.randint(c * c // 4 + 1, c * c // 4 + 6)  # c^2 < 4d: no real roots
            p = p * Polynomial([d, c, 1])
        linear = rng.randint(0, max(0, max_degree - 2 * pairs))
        p = p * Polynomial.from_roots([rng.randint(-5, 5) for _ in range(linear)])
        if p.degree < 1:
            p = p * Polynomial([rng.randint(-5, 5), 1])
        out.append(p)
    return out


@dataclass(frozen=True)
class CorpusReport:
    kind: str
    results: tuple

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.results)

    def to_json(self) -> dict:
        return {"kind": self.kind, "passed": self.passed,
                "trials": [{"coefficients": [str(c) for c in p.coefficients], "ok": ok} for p, ok in self.results]}


def run_corpus(gamma: GammaSequence, corpus: Sequence[Polynomial], kind: str = "ms") -> CorpusReport:
    check = verify_ms if kind == "ms" else verify_czds
    return CorpusReport(kind, tuple((p, check(gamma, p)) for p in corpus))
