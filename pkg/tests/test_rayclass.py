import random

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from cmray.errors import ModulusTrivial, NotPrimeToModulus
from cmray.qfield import ideal, ideals_of_norm, make_field
from cmray.rayclass import (
    RayClassGroup,
    characters,
    conductor,
    find_character_C1C2C3,
    hilbert_subgroup,
    make_modulus,
    pullback,
    ring_subgroup,
)
from oracles import oracle_partition


def _group(d, N):
    return RayClassGroup(make_modulus(make_field(d), N))


@pytest.fixture(scope="module")
def g75():
    return _group(-7, 5)


@pytest.mark.parametrize("d,N,order", [(-7, 5, 12), (-11, 5, 8), (-15, 7, 48)])
def test_group_matches_bruteforce(d, N, order):
    g, keys, lib = oracle_partition(d, N)
    assert g.order == order
    assert len(keys) == order
    # the two partitions coincide: each oracle block maps to one library class
    # and distinct blocks to distinct classes
    images = [{lib[I] for I in block} for block in keys.values()]
    assert all(len(s) == 1 for s in images)
    assert len({next(iter(s)) for s in images}) == order


def test_order_minus7_5_is_cyclic(g75):
    assert g75.order == 12
    assert g75.structure == [12]


def test_order_minus4_5():
    # 5 splits in Q(i): (O/5)^x has order 16 and the four units act freely
    g = _group(-4, 5)
    _, keys, _ = oracle_partition(-4, 5)
    assert g.order == len(keys) == 4


def test_identity_classes(g75):
    f = g75.field
    assert g75.class_of(f.unit_ideal) == g75.identity
    assert g75.class_of(ideal(f, 1 + 5 * f.tau)) == g75.identity
    assert g75.class_of(ideal(f, f.elt(-4, 10))) == g75.identity


def test_not_prime_to_modulus(g75):
    with pytest.raises(NotPrimeToModulus):
        g75.class_of(ideal(g75.field, 5))


def test_trivial_modulus():
    f = make_field(-7)
    with pytest.raises(ModulusTrivial, match="modulus must be nontrivial"):
        make_modulus(f, 1)


def test_class_of_is_homomorphism(g75):
    f = g75.field
    rng = random.Random(7)
    pool = [I for n in range(1, 120) if n % 5 for I in ideals_of_norm(f, n)]
    for _ in range(50):
        I, J = rng.choice(pool), rng.choice(pool)
        assert g75.class_of(I * J) == g75.mul(g75.class_of(I), g75.class_of(J))


# -- subgroups ------------------------------------------------------------------------------


def test_ring_subgroup_orders(g75):
    R = ring_subgroup(g75)
    assert R.order == 2
    assert R.members == {g75.identity, g75.class_of(ideal(g75.field, 2))}
    assert ring_subgroup(_group(-7, 35)).order == 12


def test_ring_subgroup_closed(g75):
    R = ring_subgroup(g75)
    assert all(g75.mul(a, b) in R for a in R.members for b in R.members)


def test_hilbert_subgroup():
    g = _group(-7, 5)
    assert hilbert_subgroup(g).order == g.order
    g = _group(-15, 7)
    H = hilbert_subgroup(g)
    assert 2 * H.order == g.order
    assert ring_subgroup(g).members <= H.members


def test_coset_reps_partition(g75):
    R = ring_subgroup(g75)
    reps = R.coset_reps()
    assert len(reps) * R.order == g75.order
    covered = {g75.mul(c, s) for c in reps for s in R.members}
    assert covered == set(g75.elements)


# -- characters ------------------------------------------------------------------------------


def test_character_count_and_orthogonality(g75):
    chars = characters(g75)
    assert len(chars) == 12
    principal = [c for c in chars if c.is_principal()]
    assert len(principal) == 1
    assert all(principal[0](C) == 1 for C in g75.elements)
    for chi in chars:
        if chi.is_principal():
            continue
        with mp.workprec(200):
            s = mp.fsum(chi(C) for C in g75.elements)
            assert abs(s) < mpf(2) ** -180


def test_conductors(g75):
    for chi in characters(g75):
        if chi.is_principal():
            assert conductor(chi) is None
        else:
            assert conductor(chi).ideal == g75.modulus.ideal


def test_pullback_conductor(g75):
    big = _group(-7, 35)
    for chi in characters(g75):
        if chi.is_principal():
            continue
        up = pullback(chi, big)
        assert up.conductor.ideal == g75.modulus.ideal


def test_C1C2C3_character(g75):
    R = ring_subgroup(g75)
    Cp = g75.generators()[0]
    chi = find_character_C1C2C3(g75, R, Cp)
    assert chi.is_trivial_on(R.members)
    assert chi.order == 6
    assert chi.conductor.ideal == g75.modulus.ideal
    assert abs(chi(Cp) - 1) > 0.5


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 11), st.integers(0, 11), st.integers(0, 11))
def test_character_multiplicative(i, j, k):
    g = _group(-7, 5)
    chi = characters(g)[k]
    a, b = g.elements[i], g.elements[j]
    assert chi.phase(g.mul(a, b)) == (chi.phase(a) + chi.phase(b)) % 1
