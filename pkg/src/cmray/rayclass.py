"""Ray class groups ``Cl(f)`` of imaginary quadratic fields, their characters,
conductors, and the subgroups attached to the ring and Hilbert class fields.

A class is identified internally by a *key* ``(i, r)``: ``i`` indexes a
class-group representative ``R_i`` and ``r`` is the residue modulo ``f``
(up to units) of an ``alpha`` with ``x = alpha * R_i``.  That map is a
bijection onto ``Cl(f)``; the group law and invariant-factor coordinates
are then read off from products of representatives.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional

import mpmath

from ._snf import smith_normal_form
from .errors import (
    ModulusNotRational,
    ModulusTrivial,
    NoSuchCharacter,
    NotPrimeToModulus,
)
from .qfield import (
    AlgNum,
    FieldParams,
    IdealHNF,
    factor_ideal,
    ideal,
    integral_ideals,
    is_principal,
    lagrange_reduce,
    norm_form,
    reduce_mod,
)

RayClass = tuple  # exponent vector over the invariant factors


@dataclass(frozen=True)
class Modulus:
    field: FieldParams
    ideal: IdealHNF
    N: int

    def __repr__(self):
        return f"Modulus(d={self.field.disc}, {self.ideal}, N={self.N})"


def make_modulus(f: FieldParams, m) -> Modulus:
    """A modulus from an integer ``N`` (meaning ``N*O_K``) or an integral ideal."""
    I = ideal(f, m) if isinstance(m, int) else m
    if not I.is_integral() or I.norm() == 0:
        raise ValueError("a modulus must be a nonzero integral ideal")
    if I.norm() == 1:
        raise ModulusTrivial("modulus must be nontrivial")
    return Modulus(f, I, int(I.smallest_integer()))


def ideal_divisors(f: FieldParams, I: IdealHNF) -> list[IdealHNF]:
    """All integral divisors of ``I``, sorted by norm then HNF."""
    out = [f.unit_ideal]
    for P, e in factor_ideal(f, I):
        out = [x * P**k for x in out for k in range(e + 1)]
    return sorted(out, key=IdealHNF.key)


class RayClassGroup:
    """``Cl(f) = I_K(f) / P_{K,1}(f)`` with representatives and discrete logs.

    Attributes
    ----------
    structure : list of int
        Invariant factors ``n_1 | n_2 | ...`` (all > 1).
    elements : list of RayClass
        Every class, ordered by its representative.
    reps : list of IdealHNF
        ``reps[i]`` is the minimal-norm integral representative of
        ``elements[i]`` (ties broken by HNF).
    """

    def __init__(self, m: Modulus):
        if m.ideal.norm() == 1:
            raise ModulusTrivial("modulus must be nontrivial")
        self.modulus = m
        self.field = f = m.field
        self._M = (m.ideal.a, m.ideal.b, m.ideal.c)
        self._primes = [P for P, _ in factor_ideal(f, m.ideal)]
        self._prime_hnf = [(P.a, P.b, P.c) for P in self._primes]
        self._units = [self._red(int(u.a), int(u.b)) for u in f.units]
        self._kernel_cache: dict[IdealHNF, frozenset] = {}
        self._prime_class_cache: dict[tuple[int, int], Optional[RayClass]] = {}
        self._build()

    # -- residues mod f -------------------------------------------------------------

    def _red(self, x: int, y: int) -> tuple[int, int]:
        return reduce_mod(*self._M, x, y)

    def _resmul(self, r, s) -> tuple[int, int]:
        d = self.field.disc
        p0 = self.field.tau_min_poly[1]
        be = r[1] * s[1]
        return self._red(r[0] * s[0] - p0 * be, r[0] * s[1] + r[1] * s[0] + d * be)

    def _canon(self, r) -> tuple[int, int]:
        return min(self._resmul(u, r) for u in self._units)

    def _res_coprime(self, x: int, y: int) -> bool:
        return all(reduce_mod(*P, x, y) != (0, 0) for P in self._prime_hnf)

    def residues(self) -> list[tuple[int, int]]:
        """Representatives ``(x, y)`` of ``(O_K/f)^x``, meaning ``x + y*tau``."""
        A, _, C = self._M
        return [(x, y) for y in range(C) for x in range(A) if self._res_coprime(x, y)]

    def is_coprime(self, x: IdealHNF) -> bool:
        if x.scale == 1:
            # integral x lies in P iff both HNF basis vectors reduce to 0 mod P
            return not any(
                reduce_mod(*P, x.a, 0) == (0, 0) and reduce_mod(*P, x.b, x.c) == (0, 0)
                for P in self._prime_hnf
            )
        return not any(P.divides(x) for P in self._primes)

    # -- keys -------------------------------------------------------------------------

    def _collect_class_group_reps(self):
        f = self.field
        h = f.class_number
        reps = []
        for x in integral_ideals(f):
            n = int(x.norm())
            if math.gcd(n, self.modulus.N) != 1:
                continue
            if all(is_principal(f, x * R.conj()) is None for R, _ in reps):
                reps.append((x, pow(n, -1, self.modulus.N)))
                if len(reps) == h:
                    return reps

    def _key_integral(self, x: IdealHNF):
        d = self.field.disc
        for i, (R, ninv) in enumerate(self._cl_reps):
            y = x if i == 0 else x * R.conj()
            v, _ = lagrange_reduce(d, (y.a, 0), (y.b, y.c))
            if norm_form(d, *v) == y.a * y.c:
                r = self._red(v[0] * ninv, v[1] * ninv)
                return (i, self._canon(r))
        raise AssertionError("ideal matched no class-group representative")

    def _key(self, x: IdealHNF):
        if x.is_integral():
            if not self.is_coprime(x):
                raise NotPrimeToModulus(f"{x} is not prime to {self.modulus.ideal}")
            return self._key_integral(x)
        J = (x + self.field.unit_ideal).inverse()
        I = x * J
        return self._mulkey(self._key(I), self._invkey(self._key(J)))

    def _mulkey(self, k1, k2):
        return self._key_integral(self._rep_of_key[k1] * self._rep_of_key[k2])

    def _invkey(self, k):
        return self._key_of_class[self.inv(self._log[k])]

    # -- construction -----------------------------------------------------------------

    def _build(self):
        f = self.field
        self._cl_reps = self._collect_class_group_reps()
        canon_res = {self._canon(r) for r in self.residues()}
        total = len(self._cl_reps) * len(canon_res)
        self._rep_of_key: dict = {}
        order: list = []
        for x in integral_ideals(f):
            if len(order) == total:
                break
            if not self.is_coprime(x):
                continue
            k = self._key_integral(x)
            if k not in self._rep_of_key:
                self._rep_of_key[k] = x
                order.append(k)
        identity_key = order[0]

        # generators and relations, by successive extension
        coords = {identity_key: ()}
        gens: list = []
        rels: list[list[int]] = []
        for k in order:
            if k in coords:
                continue
            gens.append(k)
            old = {h: c + (0,) for h, c in coords.items()}
            powers = [identity_key, k]
            while powers[-1] not in old:
                powers.append(self._mulkey(powers[-1], k))
            m = len(powers) - 1
            rel = [-c for c in old[powers[-1]]]
            rel[-1] += m
            rels.append(rel)
            for r in rels[:-1]:
                r.append(0)
            new = dict(old)
            for h, c in old.items():
                for j in range(1, m):
                    new[self._mulkey(h, powers[j])] = c[:-1] + (j,)
            coords = new
        assert len(coords) == total, "ray class group enumeration is inconsistent"

        if gens:
            D, _, V = smith_normal_form(rels)
            diag = [D[i][i] for i in range(len(gens))]
        else:
            diag, V = [], []
        keep = [i for i, n in enumerate(diag) if n > 1]
        self.structure = [diag[i] for i in keep]
        self._log = {}
        for k, c in coords.items():
            y = [sum(c[r] * V[r][col] for r in range(len(c))) for col in keep]
            self._log[k] = tuple(v % n for v, n in zip(y, self.structure))
        self._key_of_class = {v: k for k, v in self._log.items()}
        self.elements = [self._log[k] for k in order]
        self.reps = [self._rep_of_key[k] for k in order]
        self._rep_of_class = dict(zip(self.elements, self.reps))
        self.identity = self._log[identity_key]
        assert all(v == 0 for v in self.identity)

    # -- group interface ----------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def log_table(self) -> dict:
        return dict(self._log)

    def mul(self, a: RayClass, b: RayClass) -> RayClass:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.structure))

    def inv(self, a: RayClass) -> RayClass:
        return tuple((-x) % n for x, n in zip(a, self.structure))

    def pow(self, a: RayClass, e: int) -> RayClass:
        return tuple((x * e) % n for x, n in zip(a, self.structure))

    def rep(self, C: RayClass) -> IdealHNF:
        return self._rep_of_class[C]

    def key(self, C: RayClass):
        return self._key_of_class[C]

    def class_group_index(self, C: RayClass) -> int:
        """Index of the image of ``C`` in ``Cl(O_K)`` (0 for the trivial class)."""
        return self._key_of_class[C][0]

    def class_of(self, x: IdealHNF) -> RayClass:
        return self._log[self._key(x)]

    def class_of_element(self, alpha) -> RayClass:
        """Class of the principal ideal ``(alpha)``, ``alpha`` integral and prime to f."""
        if not isinstance(alpha, AlgNum):
            alpha = AlgNum(alpha, 0, self.field.disc)
        x, y = int(alpha.a), int(alpha.b)
        if not self._res_coprime(x, y):
            raise NotPrimeToModulus(f"{alpha} is not prime to the modulus")
        return self._log[(0, self._canon(self._red(x, y)))]

    def class_of_residue(self, r: tuple[int, int]) -> RayClass:
        return self._log[(0, self._canon(self._red(*r)))]

    def generators(self) -> list[RayClass]:
        """Classes with unit exponent vectors (the invariant-factor basis)."""
        k = len(self.structure)
        return [tuple(int(i == j) for j in range(k)) for i in range(k)]

    def kernel_to(self, D: IdealHNF) -> frozenset:
        """Classes of ``(alpha)``, ``alpha = 1 mod D`` prime to f: the kernel of
        ``Cl(f) -> Cl(D)`` for a divisor ``D`` of the modulus."""
        if D not in self._kernel_cache:
            A, B, C = D.a, D.b, D.c
            self._kernel_cache[D] = frozenset(
                self.class_of_residue(r)
                for r in self.residues()
                if reduce_mod(A, B, C, r[0] - 1, r[1]) == (0, 0)
            )
        return self._kernel_cache[D]

    def unit_count_congruent_one(self) -> int:
        """``omega(f) = #{units = 1 mod f}``."""
        one = self._red(1, 0)
        return sum(1 for u in self._units if u == one)

    def find_ideal_in_class(self, C: RayClass, avoid: Iterable[IdealHNF] = ()) -> IdealHNF:
        """Smallest integral ideal in class ``C`` coprime to every ideal in ``avoid``."""
        avoid = list(avoid)
        if not avoid:
            return self.rep(C)
        for x in integral_ideals(self.field):
            if self.is_coprime(x) and all(x.is_coprime(a) for a in avoid):
                if self.class_of(x) == C:
                    return x

    def __repr__(self):
        return f"RayClassGroup({self.modulus}, structure={self.structure})"


def ray_class_group(m: Modulus) -> RayClassGroup:
    return RayClassGroup(m)


def class_of(g: RayClassGroup, x: IdealHNF) -> RayClass:
    return g.class_of(x)


# -- subgroups ------------------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupView:
    group: RayClassGroup
    members: frozenset
    kind: str  # "ring" or "hilbert"

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, C) -> bool:
        return C in self.members

    @property
    def member_flags(self) -> dict:
        return {C: C in self.members for C in self.group.elements}

    def coset_reps(self) -> list[RayClass]:
        """First class (in group order) of each coset of this subgroup."""
        seen: set = set()
        reps = []
        for C in self.group.elements:
            if C in seen:
                continue
            reps.append(C)
            seen.update(self.group.mul(C, S) for S in self.members)
        return reps


def _require_rational(g: RayClassGroup) -> int:
    m = g.modulus
    if ideal(m.field, m.N) != m.ideal:
        raise ModulusNotRational(f"{m.ideal} is not of the form N*O_K")
    return m.N


def ring_subgroup(g: RayClassGroup) -> SubgroupView:
    """``Cl(K_f/K_O) = {[t O_K] : t in (Z/NZ)^x}``."""
    N = _require_rational(g)
    members = frozenset(g.class_of_element(t) for t in range(1, N) if math.gcd(t, N) == 1)
    return SubgroupView(g, members, "ring")


def hilbert_subgroup(g: RayClassGroup) -> SubgroupView:
    """``Cl(K_f/H_K)``: classes of principal ideals prime to f."""
    members = frozenset(C for C in g.elements if g.class_group_index(C) == 0)
    return SubgroupView(g, members, "hilbert")


# -- characters -------------------------------------------------------------------------


class RayCharacter:
    """``chi(C) = exp(2 pi i sum_k e_k v_k(C) / n_k)``."""

    def __init__(self, group: RayClassGroup, exponents):
        self.group = group
        self.exponents = tuple(int(e) % n for e, n in zip(exponents, group.structure))

    def phase(self, C: RayClass) -> Fraction:
        s = sum(Fraction(e * c, n) for e, c, n in zip(self.exponents, C, self.group.structure))
        return s - math.floor(s)

    def __call__(self, C: RayClass):
        return mpmath.expjpi(2 * mpmath.mpf(self.phase(C).numerator) / self.phase(C).denominator)

    def on_ideal(self, x: IdealHNF):
        return self(self.group.class_of(x))

    def is_principal(self) -> bool:
        return not any(self.exponents)

    def conj(self) -> "RayCharacter":
        return RayCharacter(self.group, [-e for e in self.exponents])

    @property
    def order(self) -> int:
        return math.lcm(1, *(n // math.gcd(e, n) for e, n in zip(self.exponents, self.group.structure)))

    def is_trivial_on(self, classes: Iterable[RayClass]) -> bool:
        return all(self.phase(C) == 0 for C in classes)

    @cached_property
    def conductor(self) -> Optional[Modulus]:
        return conductor(self)

    def __eq__(self, other):
        return (
            isinstance(other, RayCharacter)
            and self.group is other.group
            and self.exponents == other.exponents
        )

    def __hash__(self):
        return hash((id(self.group), self.exponents))

    def __repr__(self):
        return f"RayCharacter({self.exponents} on {self.group.structure})"


def characters(g: RayClassGroup) -> list[RayCharacter]:
    """All characters of ``g``, exponent vectors in lexicographic order."""
    return [RayCharacter(g, e) for e in itertools.product(*(range(n) for n in g.structure))]


def conductor(chi: RayCharacter) -> Optional[Modulus]:
    """The conductor of ``chi``; ``None`` when it factors through ``Cl(O_K)``."""
    g = chi.group
    f = g.field
    for D in ideal_divisors(f, g.modulus.ideal):
        if chi.is_trivial_on(g.kernel_to(D)):
            return None if D.norm() == 1 else make_modulus(f, D)
    raise AssertionError("the modulus itself must pass the conductor test")


def character_from_values(g: RayClassGroup, phase_of) -> RayCharacter:
    """Character of ``g`` whose phase on each generator is ``phase_of(generator)``."""
    exps = []
    for gen, n in zip(g.generators(), g.structure):
        e = phase_of(gen) * n
        if e.denominator != 1:
            raise ValueError("phase incompatible with the generator order")
        exps.append(int(e))
    return RayCharacter(g, exps)


def pullback(chi: RayCharacter, big: RayClassGroup) -> RayCharacter:
    """Inflate ``chi`` on ``Cl(f')`` to ``Cl(f)`` for a multiple ``f`` of ``f'``."""
    small = chi.group
    return character_from_values(big, lambda C: chi.phase(small.class_of(big.rep(C))))


def primitive_character(chi: RayCharacter, cond_group: RayClassGroup) -> RayCharacter:
    """The primitive character on ``Cl(f_chi)`` (``cond_group``) inducing ``chi``."""
    big = chi.group
    avoid = [big.modulus.ideal]
    return character_from_values(
        cond_group,
        lambda C: chi.phase(big.class_of(cond_group.find_ideal_in_class(C, avoid))),
    )


def find_character_C1C2C3(g: RayClassGroup, ring: SubgroupView, C_prime: RayClass) -> RayCharacter:
    """First character (lexicographic) trivial on ``ring``, nontrivial at
    ``C_prime`` and whose conductor is divisible by every prime of f."""
    f = g.field
    N = _require_rational(g)
    if math.gcd(N, 6) != 1 or f.disc in (-3, -4):
        raise NoSuchCharacter("requires gcd(N, 6) = 1 and K not Q(i), Q(sqrt(-3))")
    if C_prime in ring:
        raise NoSuchCharacter("C' lies in the ring class subgroup")
    for chi in characters(g):
        if not chi.is_trivial_on(ring.members) or chi.phase(C_prime) == 0:
            continue
        cond = chi.conductor
        if cond is not None and all(P.divides(cond.ideal) for P in g._primes):
            return chi
    raise NoSuchCharacter(f"no character satisfies C1-C3 for C' = {C_prime}")
