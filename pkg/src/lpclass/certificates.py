"""Sign-chain certificates of real-rootedness and the scalar inequalities behind them.

Between consecutive radii z0 < rho_2 < r_3 < rho_4 < ... < rho_J the sign of
phi alternates, so phi has at least J - 1 real zeros below rho_J, plus one in
(0, z0].  Combined with a winding count of exactly j zeros in |x| < rho_j this
forces every zero in the disk to be real.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import rigor
from .quotient import QuotientSpec, format_rational
from .realroot import InconsistencyError, Polynomial, unit_disk_count
from .rigor import DEFAULT_PRECISION, Inconclusive, RigorousValue, SignVerdict, check_precision, rv, sign_of
from .series import CircleSeries, eval_phi

DEFAULT_MAX_SAMPLES = 20_000
_SIN_QUARTER_PI = Fraction(7071, 10000)  # just below sin(pi/4)


class UsageError(ValueError):
    """Invalid index or radius argument."""


def rho(spec: QuotientSpec, j: int, precision: int = DEFAULT_PRECISION) -> RigorousValue:
    """q_2 ... q_j sqrt(q_{j+1}) = a^s b^(s-1) sqrt(b) for j = 2s."""
    if j < 2 or j % 2:
        raise UsageError(f"rho needs an even index >= 2, got {j}")
    s = j // 2
    p = check_precision(precision)
    b = rv(spec.b, p)
    return rv(spec.a, p) ** s * b ** (s - 1) * b.sqrt()


def r_radius(spec: QuotientSpec, j: int, z0, precision: int = DEFAULT_PRECISION) -> RigorousValue:
    """q_2 ... q_j z0 = (ab)^m z0 for j = 2m + 1."""
    if j < 3 or j % 2 == 0:
        raise UsageError(f"r_radius needs an odd index >= 3, got {j}")
    z0 = rigor.to_fraction(z0)
    if z0 <= 1:
        raise UsageError("witness must lie in (1, a]")
    m = (j - 1) // 2
    return rv((spec.a * spec.b) ** m * z0, check_precision(precision))


# -- scalar inequalities ---------------------------------------------------------

def _sqrt_b(spec: QuotientSpec, p: int) -> RigorousValue:
    return rv(spec.b, p).sqrt()


def dominance_inequality(spec: QuotientSpec, precision: int = DEFAULT_PRECISION) -> bool:
    """b sqrt(b) a (2 - 2 sqrt(b) a + ab) > 2 / (1 - 1/(b sqrt(b) a^2)), certified."""
    p = check_precision(precision)
    a, b = rv(spec.a, p), rv(spec.b, p)
    bsb = b * _sqrt_b(spec, p)
    lhs = bsb * a * (2 - 2 * _sqrt_b(spec, p) * a + a * b)
    denominator = 1 - 1 / (bsb * a * a)
    if denominator.lower <= 0:
        return False
    return lhs.certainly_gt(2 / denominator)


def nu_inequality(spec: QuotientSpec, precision: int = DEFAULT_PRECISION) -> bool:
    """a^2 b^2 (sqrt(b) - 2) + 2 (ab sqrt(b) - 1) >= 0, certified."""
    p = check_precision(precision)
    ab = rv(spec.a * spec.b, p)
    sb = _sqrt_b(spec, p)
    value = ab * ab * (sb - 2) + (ab * sb - 1) * 2
    return value.lower >= 0


def min_modulus_gblock(spec: QuotientSpec, j: int = 2, precision: int = DEFAULT_PRECISION) -> RigorousValue:
    """2 - 2 q_j sqrt(q_{j+1}) + q_j q_{j+1} = 2 - 2a sqrt(b) + ab for even j.

    This is the minimum of |P_j| on the unit circle; it must be positive.
    """
    if j < 2 or j % 2:
        raise UsageError(f"even index >= 2 required, got {j}")
    p = check_precision(precision)
    a = rv(spec.a, p)
    value = 2 - 2 * a * _sqrt_b(spec, p) + a * rv(spec.b, p)
    if spec.a >= 3 and spec.b >= spec.a and value.lower <= 0:
        raise InconsistencyError(f"min-modulus factor not positive at {spec}: {value}")
    return value


def gblock_minimum() -> tuple[Fraction, Fraction]:
    """Critical point and value of y^4 - 2y^3 + 2 away from 0, computed exactly."""
    g = Polynomial([2, 0, 0, -2, 1])
    # g'(y) = 2y^2 (2y - 3)
    y = Fraction(3, 2)
    if g.derivative()(y) != 0:
        raise InconsistencyError("3/2 is not a critical point")
    return y, g(y)


def quartic(spec: QuotientSpec, precision: int = DEFAULT_PRECISION) -> Polynomial:
    """P(w) = 1 - a sqrt(b) w + ab w^2 - a sqrt(b) w^3 + w^4 (self-reciprocal)."""
    p = check_precision(precision)
    s = rv(spec.a, p) * _sqrt_b(spec, p)
    one = rv(1, p)
    return Polynomial([one, -s, rv(spec.a * spec.b, p), -s, one])


def quartic_unit_disk_count(spec: QuotientSpec, precision: int = DEFAULT_PRECISION) -> int:
    """Roots of P in |w| < 1, using the circle bound |P| >= 2 - 2a sqrt(b) + ab."""
    bound = min_modulus_gblock(spec, 2, precision)
    if bound.lower <= 0:
        raise InconsistencyError("P may vanish on the unit circle")
    return unit_disk_count(quartic(spec, precision), min_modulus=bound)


# -- winding number ----------------------------------------------------------------

def _modulus_lower(re: RigorousValue, im: RigorousValue):
    d = rigor._down(re.precision)
    return d.sqrt(d.add(d.mul(re.mignitude, re.mignitude), d.mul(im.mignitude, im.mignitude)))


def winding_zero_count(spec: QuotientSpec, radius, precision: int = DEFAULT_PRECISION,
                       max_samples: int = DEFAULT_MAX_SAMPLES) -> int:
    """Zeros of phi in |x| < radius, from the winding of phi along the circle.

    Nodes sit at theta = 2 pi t for dyadic t.  An arc of length h starting at
    node theta is accepted when |F'(theta)| h + max|F''| h^2 / 2 stays below
    sin(pi/4) |F(theta)|: the arc then lies in a disk around F(theta) that
    sees the origin under an angle below pi/4, so each step of the argument
    is certified smaller than pi/2 and its principal value is the true one.
    """
    p = check_precision(precision)
    circle = CircleSeries(spec, radius, p)
    d2 = circle.second_derivative_bound()
    two_pi = rigor.pi(p) * 2
    up = rigor._up(p)
    quarter = rv(_SIN_QUARTER_PI, p).lower
    cache: dict[Fraction, tuple] = {}

    def node(t: Fraction):
        key = t % 1
        if key not in cache:
            cache[key] = circle.value_and_slope(two_pi * key)
        return cache[key]

    start = max(32, 4 * circle.cutoff)
    pending = [(Fraction(i + 1, start), Fraction(i, start)) for i in range(start)]
    pending.sort(reverse=True)
    accepted: list[tuple[Fraction, Fraction]] = []
    while pending:
        t1, t0 = pending.pop()
        (re, im), (dre, dim) = node(t0)
        h = (two_pi * (t1 - t0)).upper
        slope = up.sqrt(up.add(up.mul(dre.magnitude, dre.magnitude), up.mul(dim.magnitude, dim.magnitude)))
        reach = up.add(up.mul(slope, h), up.div(up.mul(d2, up.mul(h, h)), 2))
        size = _modulus_lower(re, im)
        if reach < rigor._down(p).mul(size, quarter):
            accepted.append((t0, t1))
            continue
        if len(cache) >= max_samples:
            raise Inconclusive(f"winding number not certified within {max_samples} samples")
        mid = (t0 + t1) / 2
        pending.append((t1, mid))
        pending.append((mid, t0))
    accepted.sort()
    total = 0.0
    for t0, t1 in accepted:
        (r0, i0), _ = node(t0)
        (r1, i1), _ = node(t1)
        z0 = complex(float(r0.mid), float(i0.mid))
        z1 = complex(float(r1.mid), float(i1.mid))
        total += math.atan2((z1 / z0).imag, (z1 / z0).real)
    turns = total / (2 * math.pi)
    count = round(turns)
    if abs(turns - count) > 0.25:
        raise Inconclusive(f"winding sum {turns} is not near an integer")
    return count


# -- sign chain -------------------------------------------------------------------

@dataclass(frozen=True)
class ChainEntry:
    j: int
    kind: str  # "Rho" or "R"
    radius: RigorousValue
    sign: SignVerdict

    @property
    def ok(self) -> bool:
        return self.sign.ge_zero if self.kind == "Rho" else self.sign.le_zero


@dataclass(frozen=True)
class SignChainCertificate:
    spec: QuotientSpec
    z0: Fraction
    depth: int
    entries: tuple[ChainEntry, ...]
    zero_counts: tuple[tuple[int, int], ...]
    checks: dict = field(default_factory=dict)
    first_failure: int | None = None

    @property
    def complete(self) -> bool:
        return (self.first_failure is None and all(e.ok for e in self.entries)
                and all(c == j for j, c in self.zero_counts) and all(self.checks.values())
                and self.increasing())

    def increasing(self) -> bool:
        bounds = [rv(self.z0, self.entries[0].radius.precision)] + [e.radius for e in self.entries]
        return all(x.certainly_lt(y) for x, y in zip(bounds, bounds[1:]))

    def sign_alternations(self) -> int:
        signs = [e.kind for e in self.entries if e.ok]
        return sum(1 for x, y in zip(signs, signs[1:]) if x != y)

    def to_json(self) -> dict:
        return {
            "spec": {"a": format_rational(self.spec.a), "b": format_rational(self.spec.b)},
            "z0": format_rational(self.z0),
            "depth": self.depth,
            "entries": [{"j": e.j, "kind": e.kind, "radius": e.radius.to_json(), "sign": e.sign.value}
                        for e in self.entries],
            "zero_counts": [{"j": j, "count": c} for j, c in self.zero_counts],
            "checks": dict(self.checks),
            "complete": self.complete,
            "first_failure": self.first_failure,
        }

    def dumps(self) -> str:
        """Canonical serialization: sorted keys, fixed separators."""
        return json.dumps(self.to_json(), sort_keys=True, indent=2, separators=(",", ": "))


def _certified_sign(spec, radius_fn, want_nonneg: bool, precision: int):
    """Evaluate phi at a radius, doubling precision until the wanted sign shows."""
    p = precision
    for _ in range(3):
        radius = radius_fn(p)
        verdict = sign_of(eval_phi(spec, radius, p))
        if (verdict.ge_zero if want_nonneg else verdict.le_zero):
            return radius, verdict
        p *= 2
    return radius, verdict


def sign_chain(spec: QuotientSpec, z0, depth: int, precision: int = DEFAULT_PRECISION,
               max_samples: int = DEFAULT_MAX_SAMPLES, windings: bool = True) -> SignChainCertificate:
    """Certified chain rho_2, r_3, rho_4, ..., rho_J with winding counts at each rho_j."""
    if depth < 4 or depth % 2:
        raise UsageError(f"depth must be even and >= 4, got {depth}")
    z0 = rigor.to_fraction(z0)
    if not 1 < z0 <= spec.a:
        raise UsageError("witness must lie in (1, a]")
    p = check_precision(precision)
    entries = []
    first_failure = None
    for j in range(2, depth + 1):
        if j % 2 == 0:
            radius, verdict = _certified_sign(spec, lambda q, j=j: rho(spec, j, q), True, p)
            entry = ChainEntry(j, "Rho", radius, verdict)
        else:
            radius, verdict = _certified_sign(spec, lambda q, j=j: r_radius(spec, j, z0, q), False, p)
            entry = ChainEntry(j, "R", radius, verdict)
        entries.append(entry)
        if not entry.ok and first_failure is None:
            first_failure = j
    counts = []
    if windings:
        for j in range(2, depth + 1, 2):
            try:
                counts.append((j, winding_zero_count(spec, rho(spec, j, p), p, max_samples)))
            except Inconclusive:
                counts.append((j, -1))
                if first_failure is None:
                    first_failure = j
    checks = proof_checks(spec, p)
    return SignChainCertificate(spec, z0, depth, tuple(entries), tuple(counts), checks, first_failure)


def proof_checks(spec: QuotientSpec, precision: int = DEFAULT_PRECISION) -> dict:
    checks = {"esta": dominance_inequality(spec, precision), "nu": nu_inequality(spec, precision)}
    try:
        checks["estg"] = min_modulus_gblock(spec, 2, precision).lower > 0
    except InconsistencyError:
        checks["estg"] = False
    try:
        checks["quartic"] = quartic_unit_disk_count(spec, precision) == 2
    except (InconsistencyError, Inconclusive):
        checks["quartic"] = False
    return checks
