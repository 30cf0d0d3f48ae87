"""Analytic side: Stickelberger elements, Hecke L-values at s = 1, Gauss sums
and the second limit formula relating them.

L-values are computed in double precision from the Dirichlet series over
integral ideals of norm <= B.  The series converges only conditionally at
s = 1, so the reported value is the mean of the last W partial sums (taken
once per norm) and the error estimate is the spread of that window.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np
from mpmath import mp, mpf
from sympy import divisors, primerange

from .apcomplex import ApComplex
from .errors import (
    GammaInvalid,
    PrincipalCharacter,
    RHSZero,
    SearchExhausted,
    TruncationTooSmall,
)
from .invariants import log_abs_siegel_table
from .modfun import DEFAULT_PREC, GUARD_BITS
from .qfield import AlgNum, IdealHNF, different_ideal, factor_rational_prime
from .rayclass import (
    Modulus,
    RayCharacter,
    RayClassGroup,
    primitive_character,
)

GAMMA_SEARCH_LIMIT = 10_000


@dataclass(frozen=True)
class AnalyticConfig:
    prec: int = DEFAULT_PREC
    B: int = 100_000
    W: Optional[int] = None

    def __post_init__(self):
        if self.W is None:
            object.__setattr__(self, "W", max(10, self.B // 20))
        if self.B < 1000:
            raise ValueError("norm bound B must be at least 1000")
        if self.W < 10 or self.W >= self.B / 10:
            raise ValueError("window W must satisfy 10 <= W < B/10")


@dataclass(frozen=True)
class LValue:
    value: complex
    error: float
    B: int
    W: int

    def as_ap(self) -> ApComplex:
        return ApComplex(mpmath.mpc(self.value), mpf(self.error))


def _phase_to_complex(ph: Fraction) -> complex:
    return complex(np.exp(2j * np.pi * ph.numerator / ph.denominator))


def _char_value(chi: RayCharacter, C) -> complex:
    return _phase_to_complex(chi.phase(C))


# -- Stickelberger elements ------------------------------------------------------------


def stickelberger(g: RayClassGroup, chi: RayCharacter, prec: int = DEFAULT_PREC) -> ApComplex:
    """``S_f(chi) = sum_C chi(C) ln|g_f(C)|``."""
    if chi.group is not g:
        raise ValueError("character belongs to a different group")
    if chi.is_principal():
        raise PrincipalCharacter("the Stickelberger element needs a nonprincipal character")
    logs = log_abs_siegel_table(g, prec)
    with mp.workprec(prec + GUARD_BITS):
        total = ApComplex.exact(0)
        for C in g.elements:
            total = total + logs[C] * ApComplex.rounded(chi(C))
        return total


# -- L-series ------------------------------------------------------------------------


def _local_coefficients(vals: list[complex], kind: str, kmax: int) -> np.ndarray:
    """``a(p^k)`` for k = 0..kmax from the character values at primes above p."""
    out = np.zeros(kmax + 1, dtype=complex)
    out[0] = 1
    if kind == "split":
        x, y = vals
        for k in range(1, kmax + 1):
            out[k] = sum(x**i * y ** (k - i) for i in range(k + 1))
    elif kind == "ramified":
        (x,) = vals
        out[1:] = [x**k for k in range(1, kmax + 1)]
    else:
        (x,) = vals
        for k in range(2, kmax + 1, 2):
            out[k] = x ** (k // 2)
    return out


_prime_tables: "weakref.WeakKeyDictionary[RayClassGroup, dict]" = weakref.WeakKeyDictionary()


def prime_classes(g: RayClassGroup, p: int) -> tuple[str, list]:
    """Splitting kind of ``p`` and the classes of the primes above it
    (``None`` for primes dividing the modulus); cached per group."""
    cache = _prime_tables.setdefault(g, {})
    if p not in cache:
        fac = factor_rational_prime(g.field, p)
        classes = [g.class_of(P) if g.is_coprime(P) else None for P, _ in fac]
        if len(fac) == 2:
            kind = "split"
        elif fac[0][1] == 2:
            kind = "ramified"
        else:
            kind = "inert"
        cache[p] = (kind, classes)
    return cache[p]


def dirichlet_coefficients(g: RayClassGroup, chi: RayCharacter, B: int) -> np.ndarray:
    """``a[n] = sum over integral ideals of norm n of chi([a])`` for n <= B
    (zero on ideals not prime to the modulus)."""
    a = np.ones(B + 1, dtype=complex)
    a[0] = 0
    for p in primerange(2, B + 1):
        kind, classes = prime_classes(g, p)
        vals = [0j if C is None else _char_value(chi, C) for C in classes]
        kmax = int(math.log(B) / math.log(p)) + 1
        while p**kmax > B:
            kmax -= 1
        loc = _local_coefficients(vals, kind, kmax)
        idx = np.arange(p, B + 1, p)
        if kmax == 1:
            a[idx] *= loc[1]
            continue
        v = np.ones(len(idx), dtype=np.int64)
        pk = p * p
        while pk <= B:
            v[(idx % pk) == 0] += 1
            pk *= p
        a[idx] *= loc[v]
    return a


def hecke_L_at_1(g: RayClassGroup, chi0: RayCharacter, cfg: AnalyticConfig,
                 tol: Optional[float] = None) -> LValue:
    """``L(1, chi0) = sum_a chi0([a]) / N(a)`` truncated at norm B, smoothed
    over the last W partial sums."""
    if chi0.group is not g:
        raise ValueError("character belongs to a different group")
    if chi0.is_principal():
        raise PrincipalCharacter("L(s, chi0) has a pole at s = 1 for the principal character")
    a = dirichlet_coefficients(g, chi0, cfg.B)
    n = np.arange(cfg.B + 1, dtype=float)
    n[0] = 1
    partial = np.cumsum(a / n)
    window = partial[cfg.B - cfg.W + 1:]
    value = complex(window.mean())
    spread = float(max(np.ptp(window.real), np.ptp(window.imag)))
    if tol is not None and spread > tol:
        raise TruncationTooSmall(f"window spread {spread:.3g} exceeds tolerance {tol:.3g}")
    return LValue(value, spread, cfg.B, cfg.W)


# -- Gauss sums ------------------------------------------------------------------------


def _gamma_ideal(m: Modulus, gamma: AlgNum) -> IdealHNF:
    return different_ideal(m.field) * m.ideal * gamma


def gamma_is_valid(m: Modulus, gamma: AlgNum) -> bool:
    if gamma == 0:
        return False
    I = _gamma_ideal(m, gamma)
    return I.is_integral() and I.is_coprime(m.ideal)


def gauss_sum(g: RayClassGroup, chi0: RayCharacter, gamma: AlgNum,
              prec: int = DEFAULT_PREC) -> ApComplex:
    """``T_gamma(conj chi0) = sum_x conj(chi0)([x O_K]) e^(2 pi i Tr(x gamma))``
    over ``x`` in ``(O_K/f_chi)^x``."""
    m = g.modulus
    if not gamma_is_valid(m, gamma):
        raise GammaInvalid(f"gamma*d_K*f_chi is not an integral ideal prime to f_chi for {gamma}")
    d = m.field.disc
    with mp.workprec(prec + GUARD_BITS):
        total = ApComplex.exact(0)
        for x, y in g.residues():
            ph = -chi0.phase(g.class_of_residue((x, y)))
            tr = (AlgNum(x, y, d) * gamma).trace()
            ph += tr - math.floor(tr)
            ph -= math.floor(ph)
            total = total + ApComplex.rounded(mpmath.expjpi(2 * mpf(ph.numerator) / ph.denominator))
        return total


def find_gamma(m: Modulus, skip: int = 0) -> AlgNum:
    """Smallest-height ``gamma = beta / (delta M)`` with ``gamma d_K f_chi`` a
    proper integral ideal prime to ``f_chi``; ``delta = 2 tau - d`` generates
    the different.  ``skip`` returns a later valid candidate instead."""
    f = m.field
    if m.ideal.norm() == 1:
        raise ValueError("f_chi must be nontrivial")
    delta = 2 * f.tau - f.disc
    Ms = sorted(divisors(m.N), reverse=True)
    tried = 0
    H = 0
    while tried < GAMMA_SEARCH_LIMIT:
        H += 1
        shell = [(a, b) for b in range(-H, H + 1) for a in range(-H, H + 1) if max(abs(a), abs(b)) == H]
        for a, b in shell:
            beta = f.elt(a, b)
            for M in Ms:
                tried += 1
                if tried > GAMMA_SEARCH_LIMIT:
                    break
                gamma = beta / (delta * M)
                I = m.ideal * (beta / M)
                if I.is_integral() and I.norm() > 1 and I.is_coprime(m.ideal):
                    if skip == 0:
                        return gamma
                    skip -= 1
    raise SearchExhausted(f"no valid gamma among {GAMMA_SEARCH_LIMIT} candidates")


# -- Euler factor and the limit formula --------------------------------------------------


def euler_factor(g: RayClassGroup, g0: RayClassGroup, chi0: RayCharacter) -> complex:
    """``prod (1 - conj chi0([p]))`` over primes dividing f but not f_chi."""
    fchi = g0.modulus.ideal
    if not fchi.divides(g.modulus.ideal):
        raise ValueError("f_chi must divide f")
    out = 1 + 0j
    for P in g._primes:
        if not P.divides(fchi):
            out *= 1 - _char_value(chi0, g0.class_of(P)).conjugate()
    return out


@dataclass
class KroneckerReport:
    residual: float
    lhs: complex
    rhs: complex
    L: LValue
    euler: complex
    gamma: AlgNum
    gauss: complex
    stickelberger_conj: complex
    omega: int
    N_fchi: int
    N_f: int
    conductor: Modulus
    details: dict = field(default_factory=dict)


def conductor_group(g: RayClassGroup, chi: RayCharacter) -> RayClassGroup:
    cond = chi.conductor
    if cond is None:
        raise ValueError("character has trivial conductor")
    if cond.ideal == g.modulus.ideal:
        return g
    return RayClassGroup(cond)


def kronecker_sides(g: RayClassGroup, chi: RayCharacter, cfg: AnalyticConfig,
                    gamma: Optional[AlgNum] = None, g0: Optional[RayClassGroup] = None) -> KroneckerReport:
    if chi.is_principal():
        raise PrincipalCharacter("the limit formula needs a nonprincipal character")
    if chi.conductor is None:
        raise ValueError("f_chi = O_K is excluded")
    g0 = g0 or conductor_group(g, chi)
    chi0 = chi if g0 is g else primitive_character(chi, g0)
    m0 = g0.modulus
    f = g.field
    L = hecke_L_at_1(g0, chi0, cfg)
    E = euler_factor(g, g0, chi0)
    gamma = gamma if gamma is not None else find_gamma(m0)
    T = complex(gauss_sum(g0, chi0, gamma, cfg.prec).z)
    S = complex(stickelberger(g, chi.conj(), cfg.prec).z)
    chi_g = _char_value(chi0, g0.class_of(_gamma_ideal(m0, gamma)))
    w = g0.unit_count_congruent_one()
    # S_f is built from g^(12 N(f)), so the normalising integer is N(f); it
    # equals N(f_chi) for primitive chi
    Nf = g.modulus.N
    lhs = L.value * E
    rhs = -math.pi * chi_g * S / (3 * Nf * math.sqrt(-f.disc) * w * T)
    if abs(rhs) == 0:
        raise RHSZero("the Stickelberger side vanished")
    return KroneckerReport(
        residual=abs(lhs - rhs) / abs(rhs),
        lhs=lhs, rhs=rhs, L=L, euler=E, gamma=gamma, gauss=T,
        stickelberger_conj=S, omega=w, N_fchi=m0.N, N_f=Nf, conductor=m0,
    )


def kronecker_check(g: RayClassGroup, chi: RayCharacter, cfg: AnalyticConfig) -> float:
    """``|LHS - RHS| / |RHS|`` for the second limit formula at ``chi``."""
    return kronecker_sides(g, chi, cfg).residual
