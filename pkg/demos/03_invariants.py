"""Fricke and Siegel-Ramachandra invariants of ray classes.

Run with ``python3 demos/03_invariants.py``.
"""

from mpmath import nstr

from cmray.invariants import (
    alternate_reps,
    fricke_invariant,
    lattice_data,
    norm_to_ring_class,
    well_definedness_spread,
    xi_N,
    xi_power_identity_check,
)
from cmray.qfield import make_field
from cmray.rayclass import RayClassGroup, make_modulus

PREC = 256
K = make_field(-7)
g = RayClassGroup(make_modulus(K, 5))

# For each class: pick an integral ideal c, write f c^-1 = [w1, w2] and
# 1 = r1 w1 + r2 w2; the invariant is f_[r1; r2](w1 / w2).
print("class    representative         label        value")
for C in g.elements:
    inv = fricke_invariant(g, C, "fricke", PREC)
    print(f"{str(C):8s} {str(g.rep(C)):22s} {str(inv.label):12s} {nstr(inv.value.z, 18)}")

# Different representatives of one class give the same value.
C = g.elements[4]
for c in alternate_reps(g, C):
    d = lattice_data(g, c)
    print(f"\nrep {c}: label {d.label}, omega = {d.omega}")
print(f"largest disagreement over three representatives: {nstr(well_definedness_spread(g, C), 3)}")

# xi_N = f_[0;2/N](tau_K) - f_[0;1/N](tau_K), its norm to the ring class field
# and the 12N-th power identity linking it to Siegel-Ramachandra invariants.
print(f"\nxi_5            = {nstr(xi_N(K, 5, PREC, g).z, 20)}")
print(f"norm to K_O     = {nstr(norm_to_ring_class(K, 5, PREC, g).z, 20)}")
print(f"xi^60 identity residual = {nstr(xi_power_identity_check(K, 5, PREC, g), 3)}")
