from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf

from cmray.apcomplex import ApComplex
from cmray.errors import ExceptionalField, NNotCoprimeTo6, RecognitionFailed
from cmray.fieldgen import (
    BRANCH_SCALE,
    certify,
    expand_orbit,
    j_orbit,
    j_orbit_degree,
    order_class_number,
    orbit_polynomial,
    recognize,
    relative_norm_orbit,
    verify_corollary_main,
    verify_theorem_relativenorm,
)
from cmray.qfield import AlgNum, embed, make_field, reduced_forms
from cmray.rayclass import RayClassGroup, make_modulus, ring_subgroup
from oracles import order_class_number_bruteforce

PREC = 256


@pytest.mark.parametrize("d,N,h", [(-7, 1, 1), (-7, 5, 6), (-15, 1, 2), (-11, 5, 4), (-15, 7, 16)])
def test_order_class_number(d, N, h):
    f = make_field(d)
    assert order_class_number(f, N) == h == order_class_number_bruteforce(d, N)


def test_reduced_forms_are_primitive():
    from math import gcd

    for a, b, c in reduced_forms(-175):
        assert gcd(gcd(a, b), c) == 1


# -- recognition --------------------------------------------------------------------------------


def test_single_value_polynomial():
    f = make_field(-7)
    coeffs = orbit_polynomial([ApComplex.exact(3)], f, PREC, strict=True)
    assert [c.value for c in coeffs] == [AlgNum(1, 0, -7), AlgNum(-3, 0, -7)]


def test_recognize_element_of_K():
    f = make_field(-7)
    x = AlgNum(Fraction(-17, 3), Fraction(5, 11), -7)
    with mp.workprec(PREC + 32):
        r = recognize(f, embed(f, x, PREC + 32), PREC)
    assert r.ok and r.value == x


def test_recognize_rejects_transcendental():
    f = make_field(-7)
    with mp.workprec(PREC + 32):
        r = recognize(f, ApComplex.rounded(mp.pi + 1j * mp.e), PREC)
    assert not r.ok


def test_strict_recognition_raises():
    f = make_field(-7)
    with mp.workprec(PREC + 32):
        v = ApComplex.rounded(mp.pi)
    with pytest.raises(RecognitionFailed):
        orbit_polynomial([v], f, PREC, strict=True)


def test_conjugate_closed_orbit_gives_real_coefficients():
    with mp.workprec(PREC + 32):
        vals = [ApComplex.rounded(mpc("1.3", "0.7")), ApComplex.rounded(mpc("1.3", "-0.7")),
                ApComplex.rounded(mpf("-2.1"))]
        for c in expand_orbit(vals, PREC):
            assert abs(c.im) <= c.err + mpf(2) ** (-PREC + 8)


def test_j_orbit_degree_minus7_5():
    f = make_field(-7)
    deg, coeffs = j_orbit_degree(f, 5, PREC)
    assert deg == 6
    assert all(c.ok for c in coeffs)
    assert all(c.value.b == 0 and c.value.a.denominator == 1 for c in coeffs)


def test_j_orbit_class_number_one():
    f = make_field(-11)
    (j,) = j_orbit(f, 1, PREC)
    assert abs(j.z + 32768) < mpf(2) ** -200


# -- certificates ---------------------------------------------------------------------------------


@pytest.mark.parametrize("d,N", [(-7, 5), (-11, 5), (-4, 5), (-3, 5)])
def test_corollary_certified(d, N):
    f = make_field(d)
    cert = verify_corollary_main(f, N, PREC)
    g = RayClassGroup(make_modulus(f, N))
    assert cert.verdict == "certified"
    assert cert.orbit_size == cert.expected_degree == g.order
    assert cert.margin_ratio > 1000


def test_corollary_escalates_when_needed():
    cert = verify_corollary_main(make_field(-15), 7, PREC)
    assert cert.verdict == "certified"
    assert cert.orbit_size == 48
    assert all(step["prec"] < cert.prec for step in cert.escalations)


def test_corollary_requires_N_prime_to_6():
    with pytest.raises(NNotCoprimeTo6):
        verify_corollary_main(make_field(-7), 4)


@pytest.mark.parametrize("d,N", [(-7, 5), (-11, 5)])
def test_theorem_certified(d, N):
    f = make_field(d)
    cert = verify_theorem_relativenorm(f, N, PREC)
    assert cert.verdict == "certified"
    assert cert.orbit_size == order_class_number(f, N)
    assert cert.margin_ratio > 1000


def test_theorem_excludes_exceptional():
    with pytest.raises(ExceptionalField):
        verify_theorem_relativenorm(make_field(-3), 5)


def test_relative_norm_orbit_size_matches_j_degree():
    f = make_field(-7)
    g = RayClassGroup(make_modulus(f, 5))
    orbit = relative_norm_orbit(g, PREC)
    assert len(orbit) == len(ring_subgroup(g).coset_reps()) == j_orbit_degree(f, 5, PREC)[0]


def test_certify_detects_collisions():
    f = make_field(-7)
    with mp.workprec(PREC + 32):
        a = ApComplex.rounded(mpf(2))
        vals = [a, a, ApComplex.rounded(mpf(5))]
    cert = certify("test", f, 5, vals, 3, PREC)
    assert cert.verdict == "failed"
    assert cert.orbit_size == 2


def test_certify_inconclusive_with_large_radius():
    f = make_field(-7)
    vals = [ApComplex(mpc(1), mpf("0.01")), ApComplex(mpc(2), mpf("0.01"))]
    cert = certify("test", f, 5, vals, 2, PREC)
    assert cert.verdict == "inconclusive"


def test_branch_scales_are_integers():
    assert all(isinstance(v, int) for v in BRANCH_SCALE.values())
