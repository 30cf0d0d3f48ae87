"""Exact arithmetic in an imaginary quadratic field and its fractional ideals.

Elements are written in the integral basis ``O_K = Z[tau]`` with
``tau = (d + sqrt(d)) / 2``; ideals are oriented rank-2 lattices kept in a
unique Hermite normal form, so ideal equality is plain dataclass equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from typing import Iterator, Optional

import mpmath
from mpmath import mp, mpc, mpf
from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from .apcomplex import ApComplex
from .errors import NotADiscriminant, NotFundamental, NotImaginary, NotPrime

GUARD_BITS = 32


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


@dataclass(frozen=True)
class FieldParams:
    """An imaginary quadratic field ``K`` of fundamental discriminant ``disc``.

    ``tau_min_poly = (p1, p0)`` encodes ``x^2 + p1 x + p0``, the minimal
    polynomial of ``tau``.
    """

    disc: int
    tau_min_poly: tuple[int, int]
    unit_count: int

    @property
    def tau(self) -> "AlgNum":
        return AlgNum(0, 1, self.disc)

    @property
    def one(self) -> "AlgNum":
        return AlgNum(1, 0, self.disc)

    def elt(self, a, b=0) -> "AlgNum":
        return AlgNum(a, b, self.disc)

    @cached_property
    def units(self) -> tuple["AlgNum", ...]:
        d, p0 = self.disc, self.tau_min_poly[1]
        found = [
            AlgNum(a, b, d)
            for b in range(-2, 3)
            for a in range(-4, 5)
            if a * a + d * a * b + p0 * b * b == 1
        ]
        assert len(found) == self.unit_count
        return tuple(found)

    @cached_property
    def class_number(self) -> int:
        return len(reduced_forms(self.disc))

    @property
    def unit_ideal(self) -> "IdealHNF":
        return IdealHNF(Fraction(1), 1, 0, 1, self.disc)

    def principal(self, alpha) -> "IdealHNF":
        return ideal(self, alpha)


def make_field(disc: int) -> FieldParams:
    if disc >= 0:
        raise NotImaginary(f"{disc} is not negative")
    if disc % 4 not in (0, 1):
        raise NotADiscriminant(f"{disc} is not a fundamental discriminant (not 0 or 1 mod 4)")
    if disc % 4 == 1:
        fundamental = _squarefree(disc)
    else:
        m = disc // 4
        fundamental = m % 4 in (2, 3) and _squarefree(m)
    if not fundamental:
        raise NotFundamental(f"{disc} is not a fundamental discriminant")
    units = {-4: 4, -3: 6}.get(disc, 2)
    return FieldParams(disc, (-disc, (disc * disc - disc) // 4), units)


class AlgNum:
    """The element ``a + b*tau`` of K, with rational ``a`` and ``b``."""

    __slots__ = ("a", "b", "disc")

    def __init__(self, a, b, disc: int):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.disc = disc

    def _wrap(self, other) -> "AlgNum":
        if isinstance(other, AlgNum):
            if other.disc != self.disc:
                raise ValueError("elements of different fields")
            return other
        return AlgNum(other, 0, self.disc)

    @property
    def _p0(self) -> int:
        d = self.disc
        return (d * d - d) // 4

    def __add__(self, other):
        o = self._wrap(other)
        return AlgNum(self.a + o.a, self.b + o.b, self.disc)

    __radd__ = __add__

    def __neg__(self):
        return AlgNum(-self.a, -self.b, self.disc)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        o = self._wrap(other)
        # tau^2 = d*tau - p0
        be = self.b * o.b
        return AlgNum(
            self.a * o.a - self._p0 * be,
            self.a * o.b + self.b * o.a + self.disc * be,
            self.disc,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in K")
        c = self * o.conj()
        return AlgNum(c.a / n, c.b / n, self.disc)

    def __rtruediv__(self, other):
        return self._wrap(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return AlgNum(1, 0, self.disc) / self ** (-n)
        result = AlgNum(1, 0, self.disc)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgNum(other, 0, self.disc)
        if not isinstance(other, AlgNum):
            return NotImplemented
        return (self.a, self.b, self.disc) == (other.a, other.b, other.disc)

    def __hash__(self):
        return hash((self.a, self.b, self.disc))

    def __repr__(self):
        return f"AlgNum({self.a}, {self.b}; d={self.disc})"

    def conj(self) -> "AlgNum":
        return AlgNum(self.a + self.b * self.disc, -self.b, self.disc)

    def norm(self) -> Fraction:
        return self.a * self.a + self.disc * self.a * self.b + self._p0 * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a + self.disc * self.b

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def real_part(self) -> Fraction:
        return self.a + self.b * Fraction(self.disc, 2)

    def imag_coeff(self) -> Fraction:
        """Imaginary part divided by ``sqrt(|d|)``."""
        return self.b / 2


# -- lattices -----------------------------------------------------------------


def _hnf_int(vectors) -> tuple[int, int, int]:
    """HNF ``(A, B, C)`` of the integer lattice spanned by ``vectors``.

    Vectors are ``(x, y)`` meaning ``x + y*tau``; the result is the basis
    ``{A, B + C*tau}`` with ``A, C > 0`` and ``0 <= B < A``.
    """
    v = None
    xs: list[int] = []
    for x, y in vectors:
        if y == 0:
            if x:
                xs.append(x)
            continue
        if v is None:
            v = (x, y)
            continue
        g, s, t = _egcd(v[1], y)
        other = (y // g) * v[0] - (v[1] // g) * x
        if other:
            xs.append(other)
        v = (s * v[0] + t * x, g)
    if v is None or not xs:
        raise ValueError("vectors do not span a rank-2 lattice")
    if v[1] < 0:
        v = (-v[0], -v[1])
    A = reduce(math.gcd, (abs(x) for x in xs))
    return A, v[0] % A, v[1]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class IdealHNF:
    """The lattice ``scale * [a, b + c*tau]`` (a fractional O_K-ideal).

    ``scale = 1/D`` where ``D`` is the least positive integer making the
    lattice integral, so integral ideals have ``scale == 1``.
    """

    scale: Fraction
    a: int
    b: int
    c: int
    disc: int

    @classmethod
    def from_lattice(cls, disc: int, vectors) -> "IdealHNF":
        vecs = [(Fraction(x), Fraction(y)) for x, y in vectors]
        M = reduce(math.lcm, (q.denominator for v in vecs for q in v), 1)
        A, B, C = _hnf_int((int(x * M), int(y * M)) for x, y in vecs)
        rat = (Fraction(A, M), Fraction(B, M), Fraction(C, M))
        D = reduce(math.lcm, (q.denominator for q in rat), 1)
        a, b, c = (int(q * D) for q in rat)
        return cls(Fraction(1, D), a, b, c, disc)

    # basic data
    def basis(self) -> tuple[AlgNum, AlgNum]:
        s = self.scale
        return AlgNum(s * self.a, 0, self.disc), AlgNum(s * self.b, s * self.c, self.disc)

    def norm(self) -> Fraction:
        return self.scale * self.scale * self.a * self.c

    def is_integral(self) -> bool:
        return self.scale == 1

    @property
    def denominator(self) -> int:
        return self.scale.denominator

    def smallest_integer(self) -> Fraction:
        """Least positive rational integer multiple of 1 in the lattice."""
        return self.scale * self.a

    def key(self) -> tuple:
        return (self.norm(), self.scale, self.a, self.b, self.c)

    # arithmetic
    def __mul__(self, other: "IdealHNF") -> "IdealHNF":
        if isinstance(other, AlgNum):
            other = ideal_from_disc(self.disc, other)
        d = self.disc
        p0 = (d * d - d) // 4
        # products of Z-bases span the product ideal; multiply integer parts
        u = ((self.a, 0), (self.b, self.c))
        w = ((other.a, 0), (other.b, other.c))
        vecs = [
            (x1 * x2 - p0 * y1 * y2, x1 * y2 + x2 * y1 + d * y1 * y2)
            for x1, y1 in u
            for x2, y2 in w
        ]
        A, B, C = _hnf_int(vecs)
        s = self.scale * other.scale
        if s == 1:
            return IdealHNF(s, A, B, C, d)
        return IdealHNF.from_lattice(d, [(s * A, 0), (s * B, s * C)])

    def __pow__(self, n: int) -> "IdealHNF":
        if n < 0:
            return self.inverse() ** (-n)
        result = IdealHNF(Fraction(1), 1, 0, 1, self.disc)
        for _ in range(n):
            result = result * self
        return result

    def __add__(self, other: "IdealHNF") -> "IdealHNF":
        vecs = [(w.a, w.b) for w in self.basis() + other.basis()]
        return IdealHNF.from_lattice(self.disc, vecs)

    def conj(self) -> "IdealHNF":
        vecs = [(w.a, w.b) for w in (x.conj() for x in self.basis())]
        return IdealHNF.from_lattice(self.disc, vecs)

    def inverse(self) -> "IdealHNF":
        n = self.norm()
        vecs = [(w.a / n, w.b / n) for w in (x.conj() for x in self.basis())]
        return IdealHNF.from_lattice(self.disc, vecs)

    def __truediv__(self, other: "IdealHNF") -> "IdealHNF":
        return self * other.inverse()

    def scaled(self, q) -> "IdealHNF":
        """The ideal ``q * self`` for a nonzero rational ``q``."""
        q = Fraction(q)
        vecs = [(w.a * q, w.b * q) for w in self.basis()]
        return IdealHNF.from_lattice(self.disc, vecs)

    def contains(self, x: AlgNum) -> bool:
        s = self.scale
        y = x.b / (s * self.c)
        if y.denominator != 1:
            return False
        rest = x.a - y * s * self.b
        return (rest / (s * self.a)).denominator == 1

    def __contains__(self, x) -> bool:
        if not isinstance(x, AlgNum):
            x = AlgNum(x, 0, self.disc)
        return self.contains(x)

    def divides(self, other: "IdealHNF") -> bool:
        """``self | other``, i.e. ``other`` is contained in ``self``."""
        return all(self.contains(w) for w in other.basis())

    def is_coprime(self, other: "IdealHNF") -> bool:
        return (self + other).norm() == 1

    def is_ok_module(self) -> bool:
        tau = AlgNum(0, 1, self.disc)
        return all(self.contains(w * tau) for w in self.basis())

    def reduce(self, x: AlgNum) -> tuple[int, int]:
        """Canonical residue of an integral ``x`` modulo this integral ideal."""
        return reduce_mod(self.a, self.b, self.c, int(x.a), int(x.b))

    def __repr__(self):
        s = "" if self.scale == 1 else f"{self.scale}*"
        return f"IdealHNF({s}[{self.a}, {self.b}+{self.c}t]; d={self.disc})"


def reduce_mod(A: int, B: int, C: int, x: int, y: int) -> tuple[int, int]:
    """Reduce ``x + y*tau`` modulo the integral lattice ``[A, B + C*tau]``."""
    k, y2 = divmod(y, C)
    return (x - k * B) % A, y2


def _ideal_from_gens(disc: int, gens) -> IdealHNF:
    vecs = []
    for g in gens:
        gt = g * AlgNum(0, 1, disc)
        vecs.append((g.a, g.b))
        vecs.append((gt.a, gt.b))
    return IdealHNF.from_lattice(disc, vecs)


def ideal_from_disc(disc: int, *gens) -> IdealHNF:
    gens = [g if isinstance(g, AlgNum) else AlgNum(g, 0, disc) for g in gens]
    return _ideal_from_gens(disc, gens)


def ideal(f: FieldParams, *gens) -> IdealHNF:
    """The O_K-ideal generated by ``gens`` (elements, ints or Fractions)."""
    return ideal_from_disc(f.disc, *gens)


def ideal_mul(f: FieldParams, x: IdealHNF, y: IdealHNF) -> IdealHNF:
    return x * y


def norm_form(disc: int, x: int, y: int) -> int:
    """``N(x + y*tau)`` for integers x, y."""
    return x * x + disc * x * y + ((disc * disc - disc) // 4) * y * y


def _bilinear2(disc: int, p0: int, v, w) -> int:
    return 2 * v[0] * w[0] + disc * (v[0] * w[1] + v[1] * w[0]) + 2 * p0 * v[1] * w[1]


def lagrange_reduce(disc: int, v1, v2):
    """Lagrange-Gauss reduction of an integer basis under the norm form."""
    p0 = (disc * disc - disc) // 4
    q1 = norm_form(disc, *v1)
    q2 = norm_form(disc, *v2)
    if q2 < q1:
        v1, v2, q1, q2 = v2, v1, q2, q1
    while True:
        mu = (_bilinear2(disc, p0, v1, v2) + q1) // (2 * q1)
        if mu:
            v2 = (v2[0] - mu * v1[0], v2[1] - mu * v1[1])
            q2 = norm_form(disc, *v2)
        if q2 < q1:
            v1, v2, q1, q2 = v2, v1, q2, q1
        else:
            return v1, v2


def _shortest_integral(disc: int, a: int, b: int, c: int):
    v1, _ = lagrange_reduce(disc, (a, 0), (b, c))
    return v1


def is_principal(f: FieldParams, x: IdealHNF) -> Optional[AlgNum]:
    """A generator of ``x`` if it is principal, else ``None``.

    A nonzero ideal is principal iff it contains an element whose norm
    equals the ideal norm; the lattice minimum is found exactly by
    Lagrange reduction of the integer norm form.
    """
    D = x.denominator
    v = _shortest_integral(f.disc, x.a, x.b, x.c)
    if norm_form(f.disc, *v) != x.a * x.c:
        return None
    return AlgNum(Fraction(v[0], D), Fraction(v[1], D), f.disc)


def zbasis_oriented(f: FieldParams, x: IdealHNF) -> tuple[AlgNum, AlgNum]:
    """A Z-basis ``(w1, w2)`` of ``x`` with ``Im(w1/w2) > 0``."""
    s = x.scale
    w1 = AlgNum(s * x.b, s * x.c, f.disc)
    w2 = AlgNum(s * x.a, 0, f.disc)
    assert orientation(w1, w2) > 0
    return w1, w2


def orientation(w1: AlgNum, w2: AlgNum) -> Fraction:
    """``Im(w1 * conj(w2)) / Im(tau)``; its sign is that of ``Im(w1/w2)``."""
    return w1.b * w2.a - w1.a * w2.b


def embed(f: FieldParams, x: AlgNum, prec: int = 256) -> ApComplex:
    if prec < 64:
        raise ValueError("prec must be at least 64 bits")
    with mp.workprec(prec + GUARD_BITS):
        re = mpf(x.real_part().numerator) / x.real_part().denominator
        im_c = x.imag_coeff()
        if im_c == 0:
            return ApComplex.exact(re)
        im = mpf(im_c.numerator) / im_c.denominator * mpmath.sqrt(-f.disc)
        z = mpc(re, im)
        return ApComplex(z, abs(z) * mpf(2) ** (-prec - GUARD_BITS + 2))


def different_ideal(f: FieldParams) -> IdealHNF:
    return ideal(f, 2 * f.tau - f.disc)


# -- primes and ideal enumeration ----------------------------------------------


def splitting_roots(f: FieldParams, p: int) -> list[int]:
    """Roots mod ``p`` of the minimal polynomial of tau (with multiplicity 1)."""
    d = f.disc
    p1, p0 = f.tau_min_poly
    if p < 50:
        return [r for r in range(p) if (r * r + p1 * r + p0) % p == 0]
    if d % p == 0:
        return [(d * pow(2, -1, p)) % p]
    s = sqrt_mod(d % p, p)
    if s is None:
        return []
    inv2 = pow(2, -1, p)
    return sorted({(d + s) * inv2 % p, (d - s) * inv2 % p})


def splitting_type(f: FieldParams, p: int) -> str:
    if f.disc % p == 0:
        return "ramified"
    return "split" if len(splitting_roots(f, p)) == 2 else "inert"


def prime_above(f: FieldParams, p: int, r: int) -> IdealHNF:
    """The prime ``[p, tau - r]`` for a root ``r`` of tau's polynomial mod p."""
    return IdealHNF(Fraction(1), p, (-r) % p, 1, f.disc)


def factor_rational_prime(f: FieldParams, p: int) -> list[tuple[IdealHNF, int]]:
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    roots = splitting_roots(f, p)
    if f.disc % p == 0:
        return [(prime_above(f, p, roots[0]), 2)]
    if len(roots) == 2:
        return [(prime_above(f, p, r), 1) for r in roots]
    return [(IdealHNF(Fraction(1), p, 0, p, f.disc), 1)]


def factor_ideal(f: FieldParams, x: IdealHNF) -> list[tuple[IdealHNF, int]]:
    """Prime factorization of an integral ideal, via the primes of its norm."""
    if not x.is_integral():
        raise ValueError("factor_ideal expects an integral ideal")
    out = []
    for p in sorted(factorint(int(x.norm()))):
        for P, _ in factor_rational_prime(f, p):
            e, y = 0, x
            while P.divides(y):
                y = y / P
                e += 1
            if e:
                out.append((P, e))
    return out


@lru_cache(maxsize=4096)
def _prime_power_ideals(f: FieldParams, p: int, e: int) -> tuple[IdealHNF, ...]:
    return tuple(_prime_power_ideals_uncached(f, p, e))


def _prime_power_ideals_uncached(f: FieldParams, p: int, e: int) -> list[IdealHNF]:
    fac = factor_rational_prime(f, p)
    if len(fac) == 2:
        P, Q = fac[0][0], fac[1][0]
        return [P**i * Q ** (e - i) for i in range(e + 1)]
    P, ram = fac[0]
    if ram == 2:
        return [P**e]
    if e % 2:
        return []
    return [P ** (e // 2)]


def ideals_of_norm(f: FieldParams, n: int) -> list[IdealHNF]:
    """All integral ideals of norm ``n``, sorted by HNF key."""
    result = [f.unit_ideal]
    for p, e in factorint(n).items():
        local = _prime_power_ideals(f, p, e)
        result = [x * y for x in result for y in local]
    return sorted(result, key=IdealHNF.key)


def integral_ideals(f: FieldParams, start: int = 1) -> Iterator[IdealHNF]:
    """All integral ideals ordered by norm, then HNF key."""
    n = start
    while True:
        yield from ideals_of_norm(f, n)
        n += 1


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """Reduced primitive positive definite forms ``(a, b, c)`` of discriminant D."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("D must be a negative discriminant")
    forms = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            forms.append((a, b, c))
        a += 1
    return forms
