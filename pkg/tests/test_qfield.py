from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf, sqrt

from cmray.errors import NotADiscriminant, NotFundamental, NotImaginary
from cmray.qfield import (
    AlgNum,
    different_ideal,
    embed,
    factor_rational_prime,
    ideal,
    ideals_of_norm,
    is_principal,
    make_field,
    orientation,
    reduced_forms,
    splitting_type,
    zbasis_oriented,
)

DISCS = [-3, -4, -7, -8, -11, -15, -20, -23, -24, -39]


def brute_class_number(D):
    """Count reduced forms by scanning every (a, b) box directly."""
    count = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            count += 1
        a += 1
    return count


def lattice_index(f, I):
    """Index of an integral ideal in O_K from the determinant of its Z-basis."""
    w1, w2 = I.basis()
    return abs(w1.a * w2.b - w2.a * w1.b)


# -- make_field ----------------------------------------------------------------------


def test_make_field_minus7():
    f = make_field(-7)
    assert f.tau_min_poly == (7, 14)
    assert f.unit_count == 2


def test_tau_satisfies_min_poly():
    for d in DISCS:
        f = make_field(d)
        p1, p0 = f.tau_min_poly
        t = f.tau
        assert t * t + p1 * t + p0 == 0


def test_unit_counts():
    assert make_field(-4).unit_count == 4
    assert make_field(-3).unit_count == 6
    assert make_field(-23).unit_count == 2


def test_bad_discriminants():
    with pytest.raises(NotADiscriminant, match="not a fundamental discriminant"):
        make_field(-5)
    with pytest.raises(NotFundamental):
        make_field(-12)
    with pytest.raises(NotImaginary):
        make_field(5)


@pytest.mark.parametrize("d", DISCS)
def test_class_number_against_brute_force(d):
    assert make_field(d).class_number == brute_class_number(d)


def test_known_class_numbers():
    assert make_field(-7).class_number == 1
    assert make_field(-15).class_number == 2
    assert make_field(-23).class_number == 3


# -- ideals ----------------------------------------------------------------------------


def test_mul_by_unit_ideal():
    f = make_field(-7)
    for P, _ in factor_rational_prime(f, 2) + factor_rational_prime(f, 11):
        assert P * f.unit_ideal == P


def test_split_prime_product():
    f = make_field(-7)
    (P, e1), (Q, e2) = factor_rational_prime(f, 2)
    assert e1 == e2 == 1
    assert P != Q
    assert P * Q == ideal(f, 2)
    assert (P * P).norm() == 4
    assert lattice_index(f, P * P) == 4


def test_splitting_types():
    f = make_field(-7)
    assert splitting_type(f, 5) == "inert"
    assert factor_rational_prime(f, 5)[0][0].norm() == 25
    assert splitting_type(f, 7) == "ramified"
    fac = factor_rational_prime(f, 2)
    assert splitting_type(f, 2) == "split"
    assert [P.norm() for P, _ in fac] == [2, 2]


def test_splitting_matches_min_poly_roots():
    for d in (-7, -11, -15, -20):
        f = make_field(d)
        p1, p0 = f.tau_min_poly
        for p in (2, 3, 5, 7, 11, 13):
            roots = sum(1 for x in range(p) if (x * x + p1 * x + p0) % p == 0)
            kind = splitting_type(f, p)
            if d % p == 0:
                assert kind == "ramified"
            else:
                assert kind == {0: "inert", 2: "split"}[roots] if roots != 1 else kind == "ramified"


def test_is_principal():
    f = make_field(-7)
    assert is_principal(f, ideal(f, 3)) is not None
    P = factor_rational_prime(f, 2)[0][0]
    alpha = is_principal(f, P)
    assert alpha is not None and abs(alpha.norm()) == 2
    g = make_field(-15)
    P2 = factor_rational_prime(g, 2)[0][0]
    assert is_principal(g, P2) is None


def test_is_principal_via_norm_form_search():
    # independent oracle: an ideal of norm n is principal iff some element of
    # norm n lies in it
    f = make_field(-15)
    for n in (2, 3, 4, 5, 6, 8):
        for I in ideals_of_norm(f, n):
            w1, w2 = I.basis()
            found = any(
                (x * w1 + y * w2).norm() == n
                for x, y in product(range(-6, 7), repeat=2)
            )
            assert found == (is_principal(f, I) is not None)


def test_inverse_and_division():
    f = make_field(-15)
    for n in (2, 3, 5, 6):
        for I in ideals_of_norm(f, n):
            assert I * I.inverse() == f.unit_ideal


def test_zbasis_of_N_OK():
    f = make_field(-7)
    w1, w2 = zbasis_oriented(f, ideal(f, 5))
    assert (w1, w2) == (5 * f.tau, f.elt(5))
    assert orientation(w1, w2) > 0
    assert orientation(w2, w1) < 0


def test_zbasis_prime_index():
    f = make_field(-7)
    P = factor_rational_prime(f, 2)[0][0]
    w1, w2 = zbasis_oriented(f, P)
    assert orientation(w1, w2) > 0
    assert abs(w1.a * w2.b - w2.a * w1.b) == 2


def test_embed():
    with mp.workprec(300):
        f = make_field(-4)
        assert embed(f, f.one).z == 1
        assert embed(f, f.tau).z == mp.mpc(-2, 1)
        for d in DISCS:
            g = make_field(d)
            assert abs(embed(g, g.tau).im - sqrt(-d) / 2) < mpf(2) ** -250


def test_different_ideal():
    assert different_ideal(make_field(-7)).norm() == 7
    assert different_ideal(make_field(-4)).norm() == 4
    for d in DISCS:
        D = different_ideal(make_field(d))
        assert (D * D).norm() == d * d


# -- properties --------------------------------------------------------------------------

small = st.integers(-30, 30)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(DISCS), small, small, small, small)
def test_norm_multiplicative(d, a, b, c, e):
    x, y = AlgNum(a, b, d), AlgNum(c, e, d)
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()
    assert x.conj().trace() == x.trace()
    assert x * x.conj() == x.norm()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(DISCS), small, small, small, small)
def test_ideal_norm_multiplicative(d, a, b, c, e):
    f = make_field(d)
    if (a, b) == (0, 0) or (c, e) == (0, 0):
        return
    I, J = ideal(f, f.elt(a, b)), ideal(f, f.elt(c, e))
    assert (I * J).norm() == I.norm() * J.norm()
    assert I.norm() == abs(f.elt(a, b).norm())
    assert lattice_index(f, I) == I.norm()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(DISCS), small, small, st.integers(1, 9), st.integers(-9, 9))
def test_division_roundtrip(d, a, b, num, den):
    if (a, b) == (0, 0) or den == 0:
        return
    x = AlgNum(a, b, d)
    q = Fraction(num, den)
    assert (x * q) / x == q
    assert x / x == 1


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(DISCS), st.integers(2, 40))
def test_factorisation_reassembles(d, n):
    f = make_field(d)
    for I in ideals_of_norm(f, n):
        assert I.is_integral() and I.norm() == n


def test_reduced_forms_discriminant():
    for D in (-175, -15 * 49, -4 * 25):
        for a, b, c in reduced_forms(D):
            assert b * b - 4 * a * c == D
            assert abs(b) <= a <= c
