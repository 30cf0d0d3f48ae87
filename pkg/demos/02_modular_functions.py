"""j, Weierstrass p, Fricke and Siegel functions at high precision.

Run with ``python3 demos/02_modular_functions.py``.
"""

from fractions import Fraction

from mpmath import mp, mpc, nstr

from cmray.modfun import (
    fricke,
    j_invariant,
    label,
    siegel_pow,
    verify_fricke_siegel_identity,
    wp,
)
from cmray.qfield import embed, make_field

PREC = 256
mp.prec = PREC + 32


def tau_K(d):
    K = make_field(d)
    return embed(K, K.tau, PREC + 64)


# j at CM points: 1728 for Q(i), 0 for Q(sqrt(-3)) and rational integers for
# the other class-number-one fields.
for d in (-4, -3, -7, -8, -11, -19, -43, -67, -163):
    print(f"j(tau_K({d:4d})) = {nstr(j_invariant(tau_K(d), PREC).z, 25)}")

# p is even and doubly periodic.
tau = mpc("0.3", "1.2")
z = mpc("0.17", "0.31")
print(f"\np(z)      = {nstr(wp(z, tau).z, 20)}")
print(f"p(-z)     = {nstr(wp(-z, tau).z, 20)}")
print(f"p(z+tau)  = {nstr(wp(z + tau, tau).z, 20)}")

# Fricke functions only depend on +-v mod Z^2.
v = label(Fraction(1, 5), Fraction(2, 5))
print(f"\nf_v(tau)       = {nstr(fricke(1, v, tau).z, 20)}")
print(f"f_(-v+(1,1))   = {nstr(fricke(1, -v + (1, 1), tau).z, 20)}")

# Siegel functions do not: only their 12N-th powers are invariant.
N = 5
for w in (v, -v, v + (1, 0)):
    print(f"g_{w}^1  = {nstr(siegel_pow(w, 1, tau).z, 15):40s} g^60 = {nstr(siegel_pow(w, 12 * N, tau).z, 15)}")

# The sixth power of a difference of Fricke functions is a product of Siegel
# functions times a power of j.
for u, w in [(label(0, Fraction(1, 5)), label(0, Fraction(2, 5))),
             (label(Fraction(1, 7), Fraction(3, 7)), label(Fraction(2, 7), Fraction(-1, 7)))]:
    r = verify_fricke_siegel_identity(u, w, tau_K(-7), PREC)
    print(f"identity residual for {u}, {w} at tau_K(-7): {nstr(r, 3)}")
