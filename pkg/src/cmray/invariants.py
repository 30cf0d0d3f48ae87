"""Fricke and Siegel-Ramachandra invariants of ray classes.

For a class ``C`` of ``Cl(f)`` pick an integral ``c`` in ``C`` prime to f,
write ``f c^-1 = [w1, w2]`` with ``w1/w2`` in the upper half plane and
``1 = r1*w1 + r2*w2``; the invariant is the level-N family member at label
``[r1; r2]`` evaluated at ``w1/w2``.  Everything before the final evaluation
is exact rational arithmetic.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional

import mpmath
from mpmath import mp, mpf

from .apcomplex import ApComplex
from .apcomplex import exp as ap_exp
from .errors import (
    DenominatorNotDividingN,
    ExceptionalField,
    NNotCoprimeTo6,
    NotPrimeToModulus,
    PathMismatch,
)
from .modfun import (
    DEFAULT_PREC,
    GUARD_BITS,
    FrickeLabel,
    eval_g2g3_delta_j,
    fricke,
    j_invariant,
    siegel_log,
    weber_branch,
    weber_value,
)
from .qfield import AlgNum, FieldParams, IdealHNF, embed, ideal, zbasis_oriented
from .rayclass import RayClass, RayClassGroup, make_modulus

Family = Literal["fricke", "siegel"]


@dataclass(frozen=True)
class InvariantValue:
    class_id: RayClass
    family: str
    value: ApComplex
    label: FrickeLabel
    omega: ApComplex


@dataclass(frozen=True)
class LatticeData:
    """Exact data extracted from ``f c^-1`` for one representative ``c``."""

    rep: IdealHNF
    w1: AlgNum
    w2: AlgNum
    label: FrickeLabel

    @property
    def omega(self) -> AlgNum:
        return self.w1 / self.w2


def reduce_basis(w1: AlgNum, w2: AlgNum) -> tuple[AlgNum, AlgNum]:
    """Move ``w1/w2`` into the standard fundamental domain by SL2(Z) steps.

    Both steps keep the lattice and the orientation: ``w1 -> w1 - n w2`` and
    ``(w1, w2) -> (-w2, w1)``.
    """
    while True:
        t = w1 / w2
        n = math.floor(t.real_part() + Fraction(1, 2))
        if n:
            w1 = w1 - n * w2
            t = w1 / w2
        if t.norm() < 1:
            w1, w2 = -w2, w1
            continue
        return w1, w2


Matrix = tuple[int, int, int, int]

# basis changes used when re-deriving an invariant from a different (w1, w2)
TWISTS: tuple[Matrix, ...] = ((1, 0, 0, 1), (1, 1, 0, 1), (1, 0, 1, 1))


def lattice_data(g: RayClassGroup, c: IdealHNF, reduce: bool = True,
                 twist: Matrix = (1, 0, 0, 1)) -> LatticeData:
    f = g.field
    N = g.modulus.N
    if not c.is_integral() or not g.is_coprime(c):
        raise NotPrimeToModulus(f"{c} is not an integral ideal prime to the modulus")
    w1, w2 = zbasis_oriented(f, g.modulus.ideal / c)
    if reduce:
        w1, w2 = reduce_basis(w1, w2)
    a, b, cc, d = twist
    if a * d - b * cc != 1:
        raise ValueError("twist must lie in SL2(Z)")
    w1, w2 = a * w1 + b * w2, cc * w1 + d * w2
    # 1 = r1*w1 + r2*w2, coordinates in the basis (1, tau)
    det = w1.a * w2.b - w2.a * w1.b
    r1 = w2.b / det
    r2 = -w1.b / det
    if (N * r1).denominator != 1 or (N * r2).denominator != 1:
        raise DenominatorNotDividingN(f"label ({r1}, {r2}) not in (1/{N})Z^2 for {c}")
    assert r1 * w1 + r2 * w2 == 1
    return LatticeData(c, w1, w2, FrickeLabel(r1, r2))


def _evaluate(g: RayClassGroup, data: LatticeData, family: Family, prec: int, k: Optional[int]):
    f = g.field
    omega = embed(f, data.omega, prec + GUARD_BITS)
    if family == "fricke":
        k = weber_branch(f) if k is None else k
        return fricke(k, data.label, omega, prec), omega
    if family == "siegel":
        lg = siegel_log(data.label, omega, prec)
        e = 12 * g.modulus.N
        with mp.workprec(prec + GUARD_BITS):
            return ap_exp(ApComplex(e * lg.z, e * lg.err)), omega
    raise ValueError(f"unknown family {family!r}")


def fricke_invariant(g: RayClassGroup, C: RayClass, family: Family = "fricke",
                     prec: int = DEFAULT_PREC, rep: Optional[IdealHNF] = None,
                     k: Optional[int] = None,
                     twist: Matrix = (1, 0, 0, 1)) -> InvariantValue:
    """``h_f(C)`` for the Fricke family (branch ``k``) or ``g^(12N)`` family.

    ``rep`` overrides the stored canonical representative of ``C``; ``twist``
    applies an SL2(Z) change to the reduced basis before evaluation.
    """
    if rep is None:
        rep = g.rep(C)
    elif g.class_of(rep) != C:
        raise ValueError(f"{rep} does not lie in class {C}")
    data = lattice_data(g, rep, twist=twist)
    value, omega = _evaluate(g, data, family, prec, k)
    return InvariantValue(C, family, value, data.label, omega)


def siegel_log_invariant(g: RayClassGroup, C: RayClass, prec: int = DEFAULT_PREC,
                         rep: Optional[IdealHNF] = None) -> ApComplex:
    """A logarithm of ``g_f(C)``, i.e. ``12N log g_label(omega)``.

    The real part ``ln|g_f(C)|`` is exact; the imaginary part is only
    meaningful modulo ``2 pi``.
    """
    data = lattice_data(g, g.rep(C) if rep is None else rep)
    omega = embed(g.field, data.omega, prec + GUARD_BITS)
    lg = siegel_log(data.label, omega, prec)
    e = 12 * g.modulus.N
    with mp.workprec(prec + GUARD_BITS):
        return ApComplex(e * lg.z, e * lg.err)


_tables: "weakref.WeakKeyDictionary[RayClassGroup, dict]" = weakref.WeakKeyDictionary()


def invariant_table(g: RayClassGroup, family: Family = "fricke", prec: int = DEFAULT_PREC,
                    k: Optional[int] = None) -> dict[RayClass, ApComplex]:
    """``{C: h_f(C)}`` over all classes, cached per group."""
    cache = _tables.setdefault(g, {})
    key = (family, prec, k)
    if key not in cache:
        cache[key] = {C: fricke_invariant(g, C, family, prec, k=k).value for C in g.elements}
    return cache[key]


def log_abs_siegel_table(g: RayClassGroup, prec: int = DEFAULT_PREC) -> dict[RayClass, ApComplex]:
    """``{C: ln|g_f(C)|}`` as real ApComplex values, cached per group."""
    cache = _tables.setdefault(g, {})
    key = ("lnabs", prec)
    if key not in cache:
        out = {}
        for C in g.elements:
            lg = siegel_log_invariant(g, C, prec)
            out[C] = ApComplex(lg.re, lg.err)
        cache[key] = out
    return cache[key]


def galois_translate(g: RayClassGroup, C: RayClass, Cp: RayClass, family: Family = "fricke",
                     prec: int = DEFAULT_PREC) -> ApComplex:
    """``h_f(C)^sigma(C')``, which is ``h_f(C C')`` by the transformation formula."""
    return invariant_table(g, family, prec)[g.mul(C, Cp)]


def alternate_reps(g: RayClassGroup, C: RayClass, count: int = 3) -> list[IdealHNF]:
    """``count`` distinct integral ideals in ``C``: the stored representative,
    then ``c*(alpha)`` for small ``alpha = 1 mod f``, then other ideals of the class."""
    c = g.rep(C)
    f = g.field
    out = [c]
    N = g.modulus.N
    for alpha in (f.elt(1 + N, 0), f.elt(1, N), f.elt(1 - N, N)):
        if len(out) >= count:
            break
        x = c * alpha
        if g.class_of(x) == C and x not in out:
            out.append(x)
    return out[:count]


def well_definedness_spread(g: RayClassGroup, C: RayClass, family: Family = "fricke",
                           prec: int = DEFAULT_PREC) -> mpf:
    """Largest relative disagreement of ``h_f(C)`` over three choices of
    representative and basis (one basis twist per representative)."""
    vals = [
        fricke_invariant(g, C, family, prec, rep=r, twist=t).value
        for r, t in zip(alternate_reps(g, C), TWISTS)
    ]
    with mp.workprec(prec + GUARD_BITS):
        scale = max(1, *(abs(v.z) for v in vals))
        return max(abs(a.z - b.z) for a in vals for b in vals) / scale


def _agree(a: ApComplex, b: ApComplex, prec: int, slack_bits: int = 16) -> bool:
    with mp.workprec(prec + GUARD_BITS):
        return _agree_inner(a, b, prec, slack_bits)


def _agree_inner(a, b, prec, slack_bits):
    tol = mpf(2) ** (-prec + slack_bits) * max(1, abs(a.z), abs(b.z))
    return abs(a.z - b.z) <= tol + a.err + b.err


def _check_N(f: FieldParams, N: int, exceptional_ok: bool = True):
    if N <= 1:
        raise ValueError("N must exceed 1")
    if math.gcd(N, 6) != 1:
        raise NNotCoprimeTo6(f"N = {N} must be prime to 6")
    if not exceptional_ok and f.disc in (-3, -4):
        raise ExceptionalField(f"K = Q(sqrt({f.disc})) is excluded")


def _rational_class(g: RayClassGroup, t: int) -> RayClass:
    return g.class_of(ideal(g.field, t))


def xi_N(f: FieldParams, N: int, prec: int = DEFAULT_PREC,
         group: Optional[RayClassGroup] = None) -> ApComplex:
    """``h_E(phi_E(2/N)) - h_E(phi_E(1/N))``, cross-checked against
    ``f_f([2 O_K]) - f_f([O_K])``."""
    _check_N(f, N)
    g = group or RayClassGroup(make_modulus(f, N))
    w2 = weber_value(f, FrickeLabel(0, Fraction(2, N)), prec)
    w1 = weber_value(f, FrickeLabel(0, Fraction(1, N)), prec)
    table = invariant_table(g, "fricke", prec)
    with mp.workprec(prec + GUARD_BITS):
        weber = w2 - w1
        inv = table[_rational_class(g, 2)] - table[g.identity]
    if not _agree(weber, inv, prec):
        raise PathMismatch(f"xi_N routes disagree: {weber} vs {inv}")
    return weber


def ring_class_ts(N: int) -> list[int]:
    """Representatives of ``(Z/N)^x / {+-1}``."""
    return [t for t in range(1, (N + 1) // 2) if math.gcd(t, N) == 1]


def norm_product(g: RayClassGroup, E: RayClass, prec: int = DEFAULT_PREC) -> ApComplex:
    """``prod_t (f_f([2t O_K] E) - f_f([t O_K] E))`` over ``(Z/N)^x/{+-1}``."""
    table = invariant_table(g, "fricke", prec)
    out = ApComplex.exact(1)
    with mp.workprec(prec + GUARD_BITS):
        for t in ring_class_ts(g.modulus.N):
            a = table[g.mul(_rational_class(g, 2 * t), E)]
            b = table[g.mul(_rational_class(g, t), E)]
            out = out * (a - b)
    return out


def norm_to_ring_class(f: FieldParams, N: int, prec: int = DEFAULT_PREC,
                       group: Optional[RayClassGroup] = None) -> ApComplex:
    """The relative norm of ``xi_N`` down to the ring class field, evaluated
    through invariants and checked against the Weber labels ``[0; t/N]``."""
    _check_N(f, N, exceptional_ok=False)
    g = group or RayClassGroup(make_modulus(f, N))
    inv = norm_product(g, g.identity, prec)
    weber = ApComplex.exact(1)
    for t in ring_class_ts(N):
        a = weber_value(f, FrickeLabel(0, Fraction(2 * t, N)), prec)
        b = weber_value(f, FrickeLabel(0, Fraction(t, N)), prec)
        with mp.workprec(prec + GUARD_BITS):
            weber = weber * (a - b)
    if not _agree(weber, inv, prec):
        raise PathMismatch(f"norm routes disagree: {weber} vs {inv}")
    return inv


def _wrap_phase(z):
    """Reduce the imaginary part of a logarithm into ``(-pi, pi]``."""
    k = mpmath.nint(z.imag / (2 * mp.pi))
    return z - 2j * mp.pi * k


def xi_power_identity_check(f: FieldParams, N: int, prec: int = DEFAULT_PREC,
                            group: Optional[RayClassGroup] = None) -> mpf:
    """Relative residual of ``xi_N^(12N)`` against the Siegel-Ramachandra side
    ``(j^2 (j-1728)^3 / 2^30 3^24)^(2N) g_f(C3) / (g_f(C2)^2 g_f(C0))``.

    Both sides are compared as logarithms, so the huge powers never form.
    """
    _check_N(f, N, exceptional_ok=False)
    g = group or RayClassGroup(make_modulus(f, N))
    xi = xi_N(f, N, prec, g)
    tau = embed(f, f.tau, prec + GUARD_BITS)
    j = j_invariant(tau, prec)
    l0 = siegel_log_invariant(g, g.identity, prec)
    l2 = siegel_log_invariant(g, _rational_class(g, 2), prec)
    l3 = siegel_log_invariant(g, _rational_class(g, 3), prec)
    with mp.workprec(prec + GUARD_BITS):
        jz = j.z
        base = jz**2 * (jz - 1728) ** 3 / (mpf(2) ** 30 * mpf(3) ** 24)
        if base == 0:
            raise ExceptionalField("j(tau_K) is 0 or 1728")
        lhs = 12 * N * mpmath.log(xi.z)
        rhs = 2 * N * mpmath.log(base) + l3.z - 2 * l2.z - l0.z
        d = _wrap_phase(lhs - rhs)
        return abs(mpmath.expm1(d))


def modular_values_at_tau(f: FieldParams, prec: int = DEFAULT_PREC):
    return eval_g2g3_delta_j(embed(f, f.tau, prec + GUARD_BITS), prec)
