import csv
import io
from fractions import Fraction

import pytest

from lpclass.membership import GateFlags, MembershipVerdict, Status, default_qinf, necessary_bound_I, sufficient_bound_H
from lpclass.scan import (CSV_COLUMNS, BracketError, ScanRecord, critical_b, grid_values, monotonicity_audit,
                          records_csv, records_json, scan_grid)


@pytest.fixture(scope="module")
def qinf():
    return default_qinf()


@pytest.fixture(scope="module")
def mixed_grid(qinf):
    return scan_grid((Fraction("2.8"), Fraction("4.4")), (Fraction("3.0"), Fraction("5.6")), Fraction("0.4"), qinf=qinf)


def test_grid_values_exact():
    assert grid_values("3.2", "3.5", "0.1") == [Fraction(16, 5), Fraction(33, 10), Fraction(17, 5), Fraction(7, 2)]
    assert grid_values(1, 2, 3) == [1]
    with pytest.raises(ValueError):
        grid_values(1, 2, 0)


def test_row_major_and_skips_a_not_below_b(mixed_grid):
    keys = [(r.a, r.b) for r in mixed_grid]
    assert keys == sorted(keys)
    assert all(a < b for a, b in keys)
    assert (Fraction("4.4"), Fraction("4.2")) not in keys


def test_region_verdicts(mixed_grid):
    for r in mixed_grid:
        if r.a >= 4:
            assert r.status is Status.MEMBER
        elif r.a < 3:
            assert r.status is Status.NOT_MEMBER and not r.flags.lemmaF
        elif r.a < Fraction("3.2336"):
            assert r.status is Status.NOT_MEMBER and not r.flags.qinfGate


def test_gate_consistency(mixed_grid):
    for r in mixed_grid:
        if r.status is Status.MEMBER:
            assert r.flags.lemmaF and not r.flags.overI and r.flags.qinfGate
        if r.flags.underH and r.b >= 2:
            assert r.status is Status.MEMBER


def test_csv_columns(mixed_grid):
    rows = list(csv.DictReader(io.StringIO(records_csv(mixed_grid))))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == len(mixed_grid)
    member = next(row for row in rows if row["status"] == "Member")
    assert member["witness"] and member["min_phi_hi"]


def test_json_mirrors_csv(mixed_grid):
    import json

    rows = json.loads(records_json(mixed_grid))
    assert [set(r) for r in rows] == [set(CSV_COLUMNS)] * len(rows)


def test_scan_is_deterministic_across_workers(qinf):
    args = ((Fraction("3.4"), Fraction("4.2")), (Fraction("3.6"), Fraction("5.2")), Fraction("0.4"))
    serial = records_csv(scan_grid(*args, qinf=qinf))
    assert records_csv(scan_grid(*args, qinf=qinf)) == serial
    assert records_csv(scan_grid(*args, qinf=qinf, workers=2)) == serial


def test_axis_with_own_step(qinf):
    records = scan_grid((4, 5, 1), (5, 6, Fraction(1, 2)), qinf=qinf)
    assert [(r.a, r.b) for r in records] == [(4, 5), (4, Fraction(11, 2)), (4, 6), (5, Fraction(11, 2)), (5, 6)]


def test_critical_b_at_three_and_a_half(qinf):
    point = critical_b("3.5", tol=Fraction(1, 10**4), qinf=qinf)
    assert point.regime == "boundary"
    assert point.b_star.lower >= sufficient_bound_H("3.5").upper
    assert point.b_star.upper <= necessary_bound_I("3.5").lower
    assert point.b_star.upper - point.b_star.lower <= Fraction(1, 10**4)


def test_critical_b_regimes(qinf):
    assert critical_b(4, qinf=qinf).regime == "hutchinson"
    assert critical_b("4.5", qinf=qinf).b_star is None
    assert critical_b("3.1", qinf=qinf).regime == "below_qinf"


def test_critical_b_bracket_error(qinf):
    with pytest.raises(BracketError):
        critical_b("3.5", tol=Fraction(1, 100), qinf=qinf, hi="4.4")  # 4.4 is still Member


def test_monotonicity_on_scan(mixed_grid):
    report = monotonicity_audit(mixed_grid)
    assert report.ok and report.checked > 0


def test_contiguous_runs(qinf):
    column = scan_grid((Fraction("3.5"), Fraction("3.5"), 1), (Fraction("3.6"), Fraction("5.0"), Fraction("0.2")), qinf=qinf)
    statuses = [r.status is Status.MEMBER for r in column]
    assert statuses[0] and not statuses[-1]
    assert statuses == sorted(statuses, reverse=True)
    row = scan_grid((Fraction("3.3"), Fraction("4.3"), Fraction("0.2")), (Fraction("4.5"), Fraction("4.5"), 1), qinf=qinf)
    statuses = [r.status is Status.MEMBER for r in row]
    assert statuses == sorted(statuses) and statuses[-1]


def _record(a, b, status):
    verdict = MembershipVerdict(status, witness=Fraction(2) if status is Status.MEMBER else None)
    return ScanRecord(Fraction(a), Fraction(b), verdict, GateFlags(True, False, False, True))


def test_audit_flags_synthetic_violations():
    records = [_record(4, 5, Status.MEMBER), _record(4, 6, Status.NOT_MEMBER), _record(4, 7, Status.MEMBER),
               _record(5, 7, Status.NOT_MEMBER), _record(6, 7, Status.INDETERMINATE)]
    report = monotonicity_audit(records)
    rules = sorted(rule for rule, _, _ in report.violations)
    assert rules == ["fixed_a", "fixed_b"]
    assert report.to_json()["violations"][0]["member"] == ["4", "7"]


def test_audit_skips_indeterminate():
    records = [_record(4, 5, Status.INDETERMINATE), _record(4, 6, Status.MEMBER)]
    assert monotonicity_audit(records).ok
