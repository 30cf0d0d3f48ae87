"""Quadratic fields, ideals and ray class groups.

Run with ``python3 demos/01_fields_and_ray_classes.py``.
"""

from cmray.qfield import factor_rational_prime, is_principal, make_field, splitting_type
from cmray.rayclass import (
    RayClassGroup,
    characters,
    hilbert_subgroup,
    make_modulus,
    ring_subgroup,
)

# K = Q(sqrt(-7)).  Its ring of integers is Z[tau] with tau = (-7 + sqrt(-7))/2.
K = make_field(-7)
p1, p0 = K.tau_min_poly
print(f"d_K = {K.disc}: tau satisfies x^2 + {p1}x + {p0}, {K.unit_count} units, h_K = {K.class_number}")

# How small primes decompose.
for p in (2, 3, 5, 7, 11):
    kinds = [(str(P), e) for P, e in factor_rational_prime(K, p)]
    print(f"  p = {p:2d}: {splitting_type(K, p):8s} {kinds}")

# Q(sqrt(-15)) has class number 2, so a prime above 2 is not principal.
L = make_field(-15)
P2 = factor_rational_prime(L, 2)[0][0]
print(f"\nd_K = -15: h_K = {L.class_number}; {P2} principal? {is_principal(L, P2) is not None}")

# The ray class group modulo 5 O_K.  5 is inert in Q(sqrt(-7)), so
# (O_K / 5)^x is cyclic of order 24 and the units +-1 cut it to 12.
g = RayClassGroup(make_modulus(K, 5))
print(f"\nCl(5 O_K) for d_K = -7: order {g.order}, invariant factors {g.structure}")
print(f"  ring class subgroup {{[t O_K]}}: order {ring_subgroup(g).order}")
print(f"  classes of principal ideals:   order {hilbert_subgroup(g).order}")
print(f"  characters: {len(characters(g))}")
for C, rep in list(zip(g.elements, g.reps))[:5]:
    print(f"  class {C}: minimal representative {rep} of norm {rep.norm()}")

# Bigger moduli work the same way.
for d, N in [(-11, 5), (-15, 7), (-7, 35)]:
    h = RayClassGroup(make_modulus(make_field(d), N))
    print(f"Cl({N} O_K), d_K = {d}: order {h.order}, structure {h.structure}, "
          f"ring subgroup {ring_subgroup(h).order}")
