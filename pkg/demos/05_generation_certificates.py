"""Numerical certificates that invariants generate class fields.

Run with ``python3 demos/05_generation_certificates.py``.
"""

from mpmath import nstr

from cmray.fieldgen import (
    j_orbit_degree,
    order_class_number,
    verify_corollary_main,
    verify_theorem_relativenorm,
)
from cmray.qfield import make_field

PREC = 256


def show(cert):
    print(f"  {cert.claim}: verdict {cert.verdict}, {cert.orbit_size} distinct values "
          f"(expected {cert.expected_degree}), gap/radius {nstr(cert.margin_ratio, 3)}, "
          f"precision {cert.prec} bits, escalations {[e['prec'] for e in cert.escalations]}")


for d, N in [(-7, 5), (-11, 5), (-4, 5), (-3, 5), (-15, 7)]:
    K = make_field(d)
    print(f"d_K = {d}, N = {N}")
    show(verify_corollary_main(K, N, PREC))
    if d not in (-3, -4):
        show(verify_theorem_relativenorm(K, N, PREC))

# The ring class field is also generated by j(N tau_K); its minimal polynomial
# has degree h(O) and integer coefficients.
K = make_field(-7)
deg, coeffs = j_orbit_degree(K, 5, PREC)
print(f"\nh(O) for conductor 5 in Q(sqrt(-7)): {order_class_number(K, 5)}")
print(f"minimal polynomial of j(5 tau_K), degree {deg}:")
for c in coeffs:
    print(f"  {c.value}")
