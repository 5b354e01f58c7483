import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpclass.certificates import (UsageError, dominance_inequality, gblock_minimum, min_modulus_gblock,
                                  nu_inequality, proof_checks, quartic, quartic_unit_disk_count, r_radius, rho,
                                  sign_chain, winding_zero_count)
from lpclass.membership import classify
from lpclass.quotient import QuotientSpec
from lpclass.rigor import rv

from support import near

SPEC = QuotientSpec(4, 5)

# sign changes of phi on a 4000-point log grid (oracles.real_zeros_below), radii 0.5, rho_2, rho_4, rho_6
REAL_ZEROS_BELOW = {Fraction(1, 2): 0, 2: 2, 4: 4, 6: 6}
# 11 - 6 sqrt 3 and 22 - 8 sqrt 5 in mpmath
GBLOCK_3_3 = "0.6076951545867362388353219509647657983432"
GBLOCK_4_5 = "4.111456180001682428726610650149790116475"


def test_rho_examples():
    assert (rho(SPEC, 2) ** 2).contains(80)
    assert (rho(SPEC, 4) ** 2).contains(80 * 80 * 5)
    c = QuotientSpec(3, 3)
    for j in (2, 4, 6):
        assert (rho(c, j) ** 2).contains(Fraction(3) ** (2 * j - 1))


def test_rho_rejects_odd_index():
    with pytest.raises(UsageError):
        rho(SPEC, 3)


def test_r_radius_examples():
    assert r_radius(SPEC, 3, 2).contains(40)
    assert r_radius(SPEC, 5, 2).contains(800)
    with pytest.raises(UsageError):
        r_radius(SPEC, 3, 1)
    with pytest.raises(UsageError):
        r_radius(SPEC, 4, 2)


def test_radii_interlace_when_witness_is_a():
    radii = [rv(4)]
    for j in range(2, 11):
        radii.append(rho(SPEC, j) if j % 2 == 0 else r_radius(SPEC, j, 4))
    assert all(x.certainly_lt(y) for x, y in zip(radii, radii[1:]))


def test_sign_chain_depth_eight():
    z0 = classify(SPEC).witness
    cert = sign_chain(SPEC, z0, 8)
    assert [e.kind for e in cert.entries] == ["Rho", "R"] * 3 + ["Rho"]
    assert all(e.sign.ge_zero for e in cert.entries if e.kind == "Rho")
    assert all(e.sign.le_zero for e in cert.entries if e.kind == "R")
    assert cert.complete


@pytest.mark.parametrize("depth", [2, 3, 7])
def test_sign_chain_rejects_bad_depth(depth):
    with pytest.raises(UsageError):
        sign_chain(SPEC, 2, depth)


@pytest.mark.parametrize("j", [2, 4, 6])
def test_winding_counts_match_real_zero_oracle(j):
    assert winding_zero_count(SPEC, rho(SPEC, j)) == REAL_ZEROS_BELOW[j] == j


def test_winding_small_circle_has_no_zeros():
    assert winding_zero_count(SPEC, Fraction(1, 2)) == REAL_ZEROS_BELOW[Fraction(1, 2)]


@pytest.mark.parametrize("a, b", [(3, "3.5"), (4, 5)])
def test_dominance_holds(a, b):
    assert dominance_inequality(QuotientSpec(a, b))


def test_dominance_evaluates_outside_hypotheses():
    assert dominance_inequality(QuotientSpec("1.5", 2)) in (True, False)


def test_gblock_values():
    assert near(min_modulus_gblock(QuotientSpec(3, 3)), GBLOCK_3_3)
    assert near(min_modulus_gblock(SPEC), GBLOCK_4_5)


def test_gblock_scalar_minimum_is_exact():
    assert gblock_minimum() == (Fraction(3, 2), Fraction(5, 16))


@pytest.mark.parametrize("a, b", [(3, "3.1"), (3, 4), (4, 9)])
def test_nu_inequality(a, b):
    assert nu_inequality(QuotientSpec(a, b))


@pytest.mark.parametrize("a, b", [(4, 5), (3, "3.5")])
def test_quartic_count(a, b):
    assert quartic_unit_disk_count(QuotientSpec(a, b)) == 2


def test_quartic_is_self_reciprocal():
    c = quartic(SPEC).coefficients
    assert c[0].contains(1) and c[4].contains(1)
    assert c[1].lower == c[3].lower and c[1].upper == c[3].upper
    assert (c[1] * c[1]).contains(80) and c[1].upper < 0
    assert c[2].contains(20)


def test_certificate_json_is_canonical():
    cert = sign_chain(SPEC, classify(SPEC).witness, 4)
    text = cert.dumps()
    data = json.loads(text)
    assert text == json.dumps(data, sort_keys=True, indent=2, separators=(",", ": "))
    assert set(data) >= {"spec", "z0", "depth", "entries", "zero_counts", "checks"}
    assert set(data["checks"]) == {"esta", "nu", "quartic", "estg"}
    assert all({"dec", "lo", "hi", "prec"} <= set(e["radius"]) for e in data["entries"])
    assert sign_chain(SPEC, classify(SPEC).witness, 4).dumps() == text


def test_proof_checks_at_hutchinson_point():
    assert proof_checks(SPEC) == {"esta": True, "nu": True, "estg": True, "quartic": True}


# -- properties ----------------------------------------------------------------

members = st.tuples(st.fractions(min_value=Fraction(7, 2), max_value=6, max_denominator=8),
                    st.fractions(min_value=Fraction(1, 8), max_value=3, max_denominator=8))


@settings(max_examples=6, deadline=None)
@given(members)
def test_chain_properties_on_member_specs(params):
    a, gap = params
    spec = QuotientSpec(a, a + gap)
    verdict = classify(spec)
    if not verdict.is_member:
        return
    cert = sign_chain(spec, verdict.witness, 6)
    assert cert.increasing()
    assert all(e.ok for e in cert.entries)
    assert dict(cert.zero_counts) == {2: 2, 4: 4, 6: 6}
    assert cert.sign_alternations() >= cert.depth - 2


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=3, max_value=6, max_denominator=40),
       st.fractions(min_value=Fraction(1, 40), max_value=2, max_denominator=40))
def test_scalar_inequalities_hold_above_three(a, gap):
    spec = QuotientSpec(a, a + gap)
    assert dominance_inequality(spec)
    assert nu_inequality(spec)
    assert min_modulus_gblock(spec).lower > 0
    assert quartic_unit_disk_count(spec) == 2
