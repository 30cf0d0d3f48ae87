from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpc, mpf

from cmray.apcomplex import ApComplex
from cmray.errors import LabelsEquivalent, NotInUpperHalfPlane, PoleAtLatticePoint
from cmray.modfun import (
    bernoulli2,
    delta_eta_product,
    delta_residual,
    eval_g2g3_delta_j,
    fricke,
    j_invariant,
    label,
    siegel_log,
    siegel_pow,
    verify_fricke_siegel_identity,
    weber_branch,
    wp,
    wp_torsion,
)
from cmray.qfield import embed, make_field

PREC = 256
TOL = mpf(2) ** (-PREC + 16)


def tau_of(d):
    f = make_field(d)
    return embed(f, f.tau, PREC + 64)


def theta_wp(z, tau):
    """p(z; [tau, 1]) from Jacobi theta functions (mpmath), an oracle
    independent of the q-series used by the library."""
    q = mpmath.exp(1j * mp.pi * tau)
    t2 = mpmath.jtheta(2, 0, q)
    t3 = mpmath.jtheta(3, 0, q)
    w = mp.pi * z
    r = mp.pi * t2 * t3 * mpmath.jtheta(4, w, q) / mpmath.jtheta(1, w, q)
    return r**2 - mp.pi**2 / 3 * (t2**4 + t3**4)


def close(a, b, tol=TOL):
    a = a.z if isinstance(a, ApComplex) else a
    b = b.z if isinstance(b, ApComplex) else b
    return abs(a - b) <= tol * max(1, abs(b))


# -- j and Delta -------------------------------------------------------------------------


def test_j_exceptional_values():
    with mp.workprec(PREC + 32):
        assert close(j_invariant(tau_of(-4), PREC), 1728, mpf(2) ** (-PREC + 8))
        assert abs(j_invariant(tau_of(-3), PREC).z) < mpf(2) ** (-PREC + 8)


@pytest.mark.parametrize("d,j", [(-7, -3375), (-8, 8000), (-11, -32768), (-19, -884736),
                                 (-43, -884736000)])
def test_j_class_number_one(d, j):
    with mp.workprec(300):
        val = j_invariant(tau_of(d), 300)
        assert abs(val.z - j) < mpf(2) ** -200
        assert int(mpmath.nint(val.re)) == j


@pytest.mark.parametrize("tau", [mpc("0.3", "1.2"), mpc("-0.45", "0.9"), mpc("0.1", "2.5")])
def test_j_against_kleinj(tau):
    with mp.workprec(300):
        ours = j_invariant(tau, PREC)
        ref = 1728 * mpmath.kleinj(tau)
        assert close(ours, ref, mpf(2) ** -200)


@pytest.mark.parametrize("tau", [mpc("0.3", "1.2"), mpc(0, 1), mpc("-0.5", "0.8660254037844386")])
def test_delta_against_eta_product(tau):
    with mp.workprec(PREC + 32):
        assert delta_residual(tau, PREC) < mpf(2) ** -200
        mv = eval_g2g3_delta_j(tau, PREC)
        assert close(mv.delta, delta_eta_product(tau, PREC))


def test_upper_half_plane_required():
    with pytest.raises(NotInUpperHalfPlane):
        j_invariant(mpc(0.3, -1))


# -- Weierstrass p -------------------------------------------------------------------------


@pytest.mark.parametrize("z,tau", [
    (mpc("0.2", "0.1"), mpc("0.3", "1.2")),
    (mpc("0.41", "-0.3"), mpc(0, 1)),
    (mpc("0.13", "0.77"), mpc("-0.2", "1.05")),
])
def test_wp_against_theta_oracle(z, tau):
    with mp.workprec(PREC + 64):
        assert close(wp(z, tau, PREC), theta_wp(z, tau), mpf(2) ** -200)


def test_half_periods_sum_to_zero():
    with mp.workprec(PREC + 32):
        tau = mpc(0, 1)
        e = [wp(z, tau, PREC).z for z in (mpf(1) / 2, tau / 2, (1 + tau) / 2)]
        assert abs(e[0].imag) < mpf(2) ** -200
        assert abs(sum(e)) < mpf(2) ** -200
        # the cubic 4x^3 - g2 x - g3 has these roots
        mv = eval_g2g3_delta_j(tau, PREC)
        assert abs(2 * sum(x * x for x in e) - mv.g2.z) < mpf(2) ** -190


def test_wp_pole():
    with pytest.raises(PoleAtLatticePoint):
        wp(mpc(1, 0), mpc("0.3", "1.2"))


def test_wp_torsion_matches_wp():
    tau = mpc("0.3", "1.2")
    v = label(Fraction(2, 5), Fraction(3, 5))
    with mp.workprec(PREC + 32):
        z = mpf(2) / 5 * tau + mpf(3) / 5
        assert close(wp_torsion(v, tau, PREC), wp(z, tau, PREC))


zs = st.tuples(st.floats(0.05, 0.95), st.floats(0.05, 0.95))


@settings(max_examples=20, deadline=None)
@given(zs)
def test_wp_even_and_periodic(xy):
    tau = mpc("0.3", "1.2")
    with mp.workprec(PREC + 32):
        z = mpf(xy[0]) * tau + mpf(xy[1])
        a = wp(z, tau, PREC)
        assert close(a, wp(-z, tau, PREC))
        assert close(a, wp(z + tau, tau, PREC))
        assert close(a, wp(z + 1, tau, PREC))


# -- Fricke functions ------------------------------------------------------------------------


def test_fricke_sign_normalisation():
    tau = tau_of(-7)
    v = label(Fraction(1, 5), Fraction(2, 5))
    for k in (1, 2, 3):
        assert fricke(k, v, tau).z == fricke(k, -v, tau).z
        assert fricke(k, v, tau).z == fricke(k, v + (1, -3), tau).z


def test_fricke_finite_nonzero():
    val = fricke(1, label(0, Fraction(1, 5)), tau_of(-7))
    assert val.is_separated_from_zero()
    assert mpmath.isfinite(val.re)


def test_fricke_branches_consistent():
    tau = mpc("0.3", "1.2")
    v = label(Fraction(1, 7), Fraction(3, 7))
    with mp.workprec(PREC + 32):
        mv = eval_g2g3_delta_j(tau, PREC)
        p = wp_torsion(v, tau, PREC).z
        f1 = fricke(1, v, tau, PREC).z
        f2 = fricke(2, v, tau, PREC).z
        f3 = fricke(3, v, tau, PREC).z
        d, g2, g3 = mv.delta.z, mv.g2.z, mv.g3.z
        assert close(f1 * d / (g2 * g3), p)
        assert close(f2 * d / g2**2, p**2)
        assert close(f3 * d / g3, p**3)


def test_weber_branch_table():
    assert weber_branch(make_field(-7)) == 1
    assert weber_branch(make_field(-4)) == 2
    assert weber_branch(make_field(-3)) == 3


# -- Siegel functions ------------------------------------------------------------------------


def test_bernoulli():
    assert bernoulli2(Fraction(1, 5)) == Fraction(1, 150)
    assert bernoulli2(Fraction(0)) == Fraction(1, 6)


def test_siegel_modulus_against_product():
    # |g_v| from a direct truncated product at high precision
    tau = mpc("0.3", "1.2")
    with mp.workprec(400):
        r1, r2 = mpf(1) / 5, mpf(2) / 5
        q = mpmath.exp(2j * mp.pi * tau)
        z = mpmath.exp(2j * mp.pi * (r1 * tau + r2))
        prod = (1 - z) * mpmath.fprod((1 - q**n * z) * (1 - q**n / z) for n in range(1, 200))
        ref = abs(mpmath.exp(1j * mp.pi * tau * (r1 * r1 - r1 + mpf(1) / 6)) * prod)
        ours = siegel_log(label(Fraction(1, 5), Fraction(2, 5)), tau, PREC).re
        assert abs(ours - mpmath.log(ref)) < mpf(2) ** -200


labels7 = st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(lambda t: t != (0, 0))


@settings(max_examples=15, deadline=None)
@given(labels7, st.integers(-2, 2), st.integers(-2, 2))
def test_siegel_power_invariance(ab, m, n):
    N = 7
    tau = mpc("0.3", "1.2")
    v = label(Fraction(ab[0], N), Fraction(ab[1], N))
    with mp.workprec(PREC + 32):
        base = siegel_pow(v, 12 * N, tau, PREC)
        assert close(base, siegel_pow(-v, 12 * N, tau, PREC))
        assert close(base, siegel_pow(v + (m, n), 12 * N, tau, PREC))


def test_siegel_translation_factor():
    # g_{v+(1,0)} = -exp(-pi i r2) g_v, checked against an untruncated product
    tau = mpc("0.3", "1.2")
    v = label(Fraction(2, 5), Fraction(1, 5))
    with mp.workprec(PREC + 32):
        a = siegel_pow(v + (1, 0), 1, tau, PREC).z
        b = siegel_pow(v, 1, tau, PREC).z
        assert close(a, -mpmath.expjpi(-mpf(1) / 5) * b)


# -- Fricke/Siegel identity --------------------------------------------------------------------


@pytest.mark.parametrize("u,v,tau", [
    (label(0, Fraction(1, 5)), label(0, Fraction(2, 5)), mpc("0.3", "1.2")),
    (label(Fraction(1, 5), 0), label(0, Fraction(1, 5)), None),
    (label(Fraction(-3, 5), Fraction(7, 5)), label(Fraction(9, 5), Fraction(-1, 5)), mpc("0.3", "1.2")),
])
def test_fricke_siegel_identity(u, v, tau):
    tau = tau if tau is not None else tau_of(-7)
    assert verify_fricke_siegel_identity(u, v, tau, PREC) < TOL


def test_identity_rejects_equivalent_labels():
    with pytest.raises(LabelsEquivalent):
        verify_fricke_siegel_identity(label(0, Fraction(1, 5)), label(0, Fraction(4, 5)), tau_of(-7))


@pytest.mark.parametrize("d", [-4, -3])
def test_identity_refuses_degenerate_points(d):
    from cmray.errors import ExceptionalField

    with pytest.raises(ExceptionalField):
        verify_fricke_siegel_identity(label(0, Fraction(1, 5)), label(0, Fraction(2, 5)), tau_of(d))
