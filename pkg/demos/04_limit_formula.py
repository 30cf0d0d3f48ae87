"""Stickelberger elements, Hecke L-values and the second limit formula.

Run with ``python3 demos/04_limit_formula.py`` (about half a minute).
"""

from mpmath import nstr

from cmray.limitformula import AnalyticConfig, find_gamma, gauss_sum, kronecker_sides, stickelberger
from cmray.qfield import make_field
from cmray.rayclass import RayClassGroup, characters, make_modulus

K = make_field(-7)
g = RayClassGroup(make_modulus(K, 5))
cfg = AnalyticConfig(prec=256, B=100_000)
gamma = find_gamma(g.modulus)
print(f"gamma = {gamma}; gamma * d_K * f is an integral ideal prime to f")

seen = set()
for chi in characters(g):
    if chi.is_principal() or chi.exponents in seen:
        continue
    seen.update({chi.exponents, chi.conj().exponents})
    T = gauss_sum(g, chi, gamma)
    S = stickelberger(g, chi.conj())
    rep = kronecker_sides(g, chi, cfg, gamma=gamma)
    print(f"\nchi = {chi.exponents}, order {chi.order}")
    print(f"  |T_gamma| = {nstr(abs(T.z), 20)}  (sqrt N(f) = 5)")
    print(f"  S_f(conj chi) = {nstr(S.z, 15)}")
    print(f"  L-side  {rep.lhs:.10f}  (window error {rep.L.error:.1e})")
    print(f"  S-side  {rep.rhs:.10f}  relative residual {rep.residual:.2e}")

# An imprimitive character: pull back to modulus 35 and the Euler factor at
# the prime above 7 enters the L-side.
from cmray.rayclass import pullback  # noqa: E402

big = RayClassGroup(make_modulus(K, 35))
chi = pullback(next(c for c in characters(g) if c.exponents == (1,)), big)
rep = kronecker_sides(big, chi, cfg)
print(f"\nmodulus 35, conductor {rep.conductor.ideal}: Euler factor {rep.euler:.6f}, residual {rep.residual:.2e}")
