"""Parameter-plane scans, the critical curve b*(a) and monotonicity audits."""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .membership import (DEFAULT_GRID, GateFlags, MembershipVerdict, Status, classify, gate_flags,
                         necessary_bound_I, phi_minimum_enclosure, set_default_qinf)
from .quotient import QuotientSpec, format_rational, parameter_value
from .rigor import DEFAULT_LADDER, RigorousValue, decimal_string, rv, to_fraction

CSV_COLUMNS = ("a", "b", "status", "witness", "min_phi_lo", "min_phi_hi",
               "lemmaF", "underH", "overI", "qinfGate", "precision")


class BracketError(ValueError):
    """Both ends of a bisection bracket classify the same way."""


@dataclass(frozen=True)
class ScanRecord:
    a: Fraction
    b: Fraction
    verdict: MembershipVerdict
    flags: GateFlags

    @property
    def status(self) -> Status:
        return self.verdict.status

    @property
    def witness(self) -> Fraction | None:
        return self.verdict.witness

    @property
    def min_phi(self) -> RigorousValue | None:
        return phi_minimum_enclosure(self.verdict)

    def row(self) -> dict:
        m = self.min_phi
        return {
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "status": self.status.value,
            "witness": format_rational(self.witness) if self.witness is not None else "",
            "min_phi_lo": decimal_string(m.lower, 20) if m is not None else "",
            "min_phi_hi": decimal_string(m.upper, 20) if m is not None else "",
            "lemmaF": self.flags.lemmaF,
            "underH": self.flags.underH,
            "overI": self.flags.overI,
            "qinfGate": self.flags.qinfGate,
            "precision": self.verdict.precision_used,
        }


def grid_values(lo, hi, step) -> list[Fraction]:
    """lo, lo + step, ... up to hi inclusive, in exact arithmetic."""
    lo, hi, step = parameter_value(lo), parameter_value(hi), parameter_value(step)
    if step <= 0:
        raise ValueError("step must be positive")
    out = []
    k = 0
    while lo + k * step <= hi:
        out.append(lo + k * step)
        k += 1
    return out


def _classify_point(args) -> ScanRecord:
    a, b, ladder, grid, qinf = args
    spec = QuotientSpec(a, b)
    return ScanRecord(a, b, classify(spec, ladder, grid, qinf=qinf), gate_flags(spec, qinf))


def _init_worker(qinf: RigorousValue | None) -> None:
    if qinf is not None:
        set_default_qinf(qinf)


def _axis(bounds: tuple, step) -> list[Fraction]:
    if len(bounds) == 3:
        return grid_values(*bounds)
    if step is None:
        raise ValueError("a step is required for two-element ranges")
    return grid_values(*bounds, step)


def scan_grid(a_range: tuple, b_range: tuple, step=None, precision: int | None = None,
              ladder: Sequence[int] = DEFAULT_LADDER, grid_density: int = DEFAULT_GRID,
              qinf: RigorousValue | None = None, workers: int = 1) -> list[ScanRecord]:
    """Classify every grid point with a < b, row-major by a then b.

    Ranges are (lo, hi) sharing ``step``, or (lo, hi, step) with their own.
    """
    from .membership import default_qinf

    if precision is not None:
        ladder = tuple(p for p in ladder if p >= precision) or (precision,)
    points = [(a, b) for a in _axis(a_range, step) for b in _axis(b_range, step) if 1 < a < b]
    needs_qinf = any(3 <= a < 4 for a, _ in points)
    qinf = qinf if qinf is not None or not needs_qinf else default_qinf()
    jobs = [(a, b, tuple(ladder), grid_density, qinf) for a, b in points]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(qinf,)) as pool:
            return list(pool.map(_classify_point, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    return [_classify_point(job) for job in jobs]


def records_csv(records: Iterable[ScanRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()


def records_json(records: Iterable[ScanRecord]) -> str:
    return json.dumps([r.row() for r in records], indent=1, sort_keys=True)


# -- critical curve --------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryPoint:
    a: Fraction
    b_star: RigorousValue | None
    iterations: int
    regime: str  # "boundary", "hutchinson", "below_qinf" or "indeterminate"

    def to_json(self) -> dict:
        out = {"a": format_rational(self.a), "iterations": self.iterations, "regime": self.regime}
        if self.b_star is not None:
            out["b_star"] = self.b_star.to_json()
        return out


def critical_b(a, precision: int = 128, tol=Fraction(1, 10**8), qinf: RigorousValue | None = None,
               ladder: Sequence[int] | None = None, hi=None) -> BoundaryPoint:
    """Enclosure of b*(a): Member at the lower end, NotMember at the upper end."""
    from .membership import default_qinf

    a, tol = parameter_value(a), parameter_value(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    ladder = tuple(ladder) if ladder else tuple(p for p in DEFAULT_LADDER if p >= precision) or (precision,)
    gate = qinf if qinf is not None else default_qinf()
    if rv(a, gate.precision).certainly_lt(gate):
        return BoundaryPoint(a, None, 0, "below_qinf")
    if a >= 4:
        return BoundaryPoint(a, None, 0, "hutchinson")
    lo = a + tol
    hi = parameter_value(hi) if hi is not None else _upper_start(a)

    def status(b):
        return classify(QuotientSpec(a, b), ladder, qinf=gate).status

    s_lo, s_hi = status(lo), status(hi)
    if s_lo is not Status.MEMBER or s_hi is not Status.NOT_MEMBER:
        raise BracketError(f"bracket [{lo}, {hi}] classifies as {s_lo.value}/{s_hi.value}")
    iterations = 0
    regime = "boundary"
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s = status(mid)
        iterations += 1
        if s is Status.INDETERMINATE:
            regime = "indeterminate"
            break
        if s is Status.MEMBER:
            lo = mid
        else:
            hi = mid
    return BoundaryPoint(a, RigorousValue.hull_of(lo, hi, precision), iterations, regime)


def _upper_start(a: Fraction) -> Fraction:
    if a >= 3:
        bound = necessary_bound_I(a, 128)
        return to_fraction(bound.upper).limit_denominator(10**6) + 1
    return a + 1


# -- monotonicity ------------------------------------------------------------------

@dataclass(frozen=True)
class AuditReport:
    checked: int
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"checked": self.checked, "violations": [
            {"rule": rule, "member": [format_rational(x) for x in m], "not_member": [format_rational(x) for x in n]}
            for rule, m, n in self.violations]}


def monotonicity_audit(records: Sequence[ScanRecord]) -> AuditReport:
    """Member at (a, b) must imply Member at (a, c) and (d, b) for grid a < c, d < b.

    Indeterminate cells are skipped on both sides.
    """
    status = {(r.a, r.b): r.status for r in records}
    by_a: dict[Fraction, list[Fraction]] = {}
    by_b: dict[Fraction, list[Fraction]] = {}
    for a, b in status:
        by_a.setdefault(a, []).append(b)
        by_b.setdefault(b, []).append(a)
    violations = []
    checked = 0
    for (a, b), s in status.items():
        if s is not Status.MEMBER:
            continue
        for c in by_a[a]:
            if a < c < b and status[(a, c)] is not Status.INDETERMINATE:
                checked += 1
                if status[(a, c)] is Status.NOT_MEMBER:
                    violations.append(("fixed_a", (a, b), (a, c)))
        for d in by_b[b]:
            if a < d < b and status[(d, b)] is not Status.INDETERMINATE:
                checked += 1
                if status[(d, b)] is Status.NOT_MEMBER:
                    violations.append(("fixed_b", (a, b), (d, b)))
    return AuditReport(checked, tuple(sorted(violations)))


def default_workers() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)
