"""Field-generation certificates built from Galois orbits of invariants.

A value generates a class field over K exactly when its orbit under the Galois
group has trivial stabilizer, i.e. when the orbit values are pairwise
distinct.  Certificates report the smallest gap between orbit values against
the largest error radius, plus how well the orbit polynomial's coefficients
are recognized as elements of K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath import mp, mpc, mpf

from .apcomplex import ApComplex
from .errors import RecognitionFailed
from .invariants import _check_N, invariant_table, norm_product, ring_class_ts
from .modfun import DEFAULT_PREC, GUARD_BITS, j_invariant, weber_branch
from .qfield import AlgNum, FieldParams, embed, reduced_forms
from .rayclass import RayClassGroup, make_modulus, ring_subgroup

MARGIN = 1000
MAX_PREC = 1024

# scalings that make the Weber values of each branch algebraic integers in
# the cases we handle; recognition works on the scaled orbit
BRANCH_SCALE = {1: -(2**7) * 3**5, 2: 2**10 * 3**4, 3: -(2**9) * 3**6}


def order_class_number(f: FieldParams, N: int) -> int:
    """``h(O)`` for the order of conductor N, by reduced-form enumeration."""
    if N < 1:
        raise ValueError("N must be positive")
    return len(reduced_forms(N * N * f.disc))


@dataclass(frozen=True)
class RecognizedCoeff:
    approx: ApComplex
    value: AlgNum
    residual: mpf
    threshold: mpf

    @property
    def ok(self) -> bool:
        return self.residual < self.threshold


def _to_fraction(x: mpf) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    return (-1) ** sign * Fraction(int(man)) * Fraction(2) ** exp


def recognize(f: FieldParams, c: ApComplex, prec: int) -> RecognizedCoeff:
    """Best ``a + b*tau`` with denominators at most ``2^(prec/4)``.

    The residual is ``|c - rec| * q^2`` with ``q`` the common denominator.
    Continued fractions approximate any real to within ``1/q^2``, so an
    unscaled residual would accept noise; after scaling, a false match
    needs a ``2^(prec/4)`` coincidence.  Absolute (not relative) distance is
    used so that large coefficients whose fractional part was never
    resolved are rejected.
    """
    bound = 2 ** (prec // 4)
    with mp.workprec(prec + GUARD_BITS):
        tau = embed(f, f.tau, prec + GUARD_BITS).z
        b = c.im / tau.imag
        a = c.re - b * tau.real
        fa = _to_fraction(a).limit_denominator(bound)
        fb = _to_fraction(b).limit_denominator(bound)
        rec = AlgNum(fa, fb, f.disc)
        q = math.lcm(fa.denominator, fb.denominator)
        resid = abs(c.z - embed(f, rec, prec + GUARD_BITS).z) * q * q
        return RecognizedCoeff(c, rec, resid, mpf(2) ** (-(prec // 4)))


def expand_orbit(values: Sequence[ApComplex], prec: int) -> list[ApComplex]:
    """Coefficients of ``prod (X - v)``, leading coefficient first."""
    if not values:
        raise ValueError("need at least one value")
    with mp.workprec(prec + GUARD_BITS):
        coeffs = [ApComplex.exact(1)]
        for v in values:
            nxt = coeffs + [ApComplex.exact(0)]
            for i in range(1, len(nxt)):
                nxt[i] = nxt[i] - v * coeffs[i - 1]
            coeffs = nxt
        return coeffs


def orbit_polynomial(values: Sequence[ApComplex], f: FieldParams, prec: int = DEFAULT_PREC,
                     strict: bool = False) -> list[RecognizedCoeff]:
    """Expand the orbit polynomial and recognize each coefficient in K."""
    out = [recognize(f, c, prec) for c in expand_orbit(values, prec)]
    if strict:
        bad = [i for i, r in enumerate(out) if not r.ok]
        if bad:
            raise RecognitionFailed(f"coefficients {bad} not recognized at {prec} bits")
    return out


@dataclass
class GenerationCertificate:
    claim: str
    field_disc: int
    N: int
    orbit_size: int
    expected_degree: int
    min_pairwise_gap: mpf
    max_error_radius: mpf
    coeff_recognition_residual: mpf
    verdict: str
    prec: int = DEFAULT_PREC
    escalations: list = field(default_factory=list)
    coefficients: list = field(default_factory=list)

    @property
    def margin_ratio(self) -> mpf:
        if self.max_error_radius == 0:
            return mpf("inf")
        return self.min_pairwise_gap / self.max_error_radius


def _distinct_count(values: Sequence[ApComplex]) -> int:
    """Number of clusters, merging values whose discs overlap."""
    reps: list[ApComplex] = []
    for v in values:
        if not any(abs(v.z - r.z) <= v.err + r.err for r in reps):
            reps.append(v)
    return len(reps)


def certify(claim: str, f: FieldParams, N: int, values: Sequence[ApComplex],
            expected: int, prec: int, scale: int = 1) -> GenerationCertificate:
    with mp.workprec(prec + GUARD_BITS):
        gaps = [abs(a.z - b.z) for i, a in enumerate(values) for b in values[i + 1:]]
        gap = min(gaps) if gaps else mpf("inf")
        radius = max(v.err for v in values)
        scaled = [v * scale for v in values]
    coeffs = orbit_polynomial(scaled, f, prec)
    resid = max(c.residual for c in coeffs)
    size = _distinct_count(values)
    threshold = mpf(2) ** (-(prec // 4))
    if size != len(values) or size != expected:
        verdict = "failed"
    elif gap > MARGIN * radius and resid < threshold:
        verdict = "certified"
    else:
        verdict = "inconclusive"
    return GenerationCertificate(
        claim, f.disc, N, size, expected, gap, radius, resid, verdict, prec,
        coefficients=[c.value for c in coeffs] if resid < threshold else [],
    )


def _escalate(run, prec: int, max_prec: int) -> GenerationCertificate:
    history = []
    while True:
        cert = run(prec)
        if cert.verdict != "inconclusive" or prec * 2 > max_prec:
            cert.escalations = history
            return cert
        history.append({"prec": prec, "margin_ratio": cert.margin_ratio,
                        "coeff_recognition_residual": cert.coeff_recognition_residual})
        prec *= 2


def verify_corollary_main(f: FieldParams, N: int, prec: int = DEFAULT_PREC,
                          max_prec: int = MAX_PREC,
                          group: Optional[RayClassGroup] = None) -> GenerationCertificate:
    """Certify that ``h_E(phi_E(1/N))`` generates ``K_f`` over ``K``: its orbit
    ``{f_f(C)}`` must have ``|Cl(f)|`` pairwise distinct members."""
    _check_N(f, N)
    g = group or RayClassGroup(make_modulus(f, N))
    scale = BRANCH_SCALE[weber_branch(f)]

    def run(p):
        values = [invariant_table(g, "fricke", p)[C] for C in g.elements]
        return certify("corollary_main", f, N, values, g.order, p, scale)

    return _escalate(run, prec, max_prec)


def relative_norm_orbit(g: RayClassGroup, prec: int) -> list[ApComplex]:
    """The norm product conjugated by each coset of the ring class subgroup."""
    ring = ring_subgroup(g)
    return [norm_product(g, E, prec) for E in ring.coset_reps()]


def verify_theorem_relativenorm(f: FieldParams, N: int, prec: int = DEFAULT_PREC,
                                max_prec: int = MAX_PREC,
                                group: Optional[RayClassGroup] = None) -> GenerationCertificate:
    """Certify that the relative norm of ``xi_N`` generates the ring class
    field: its conjugates over the cosets of the ring subgroup must be
    ``h(O)`` pairwise distinct values."""
    _check_N(f, N, exceptional_ok=False)
    g = group or RayClassGroup(make_modulus(f, N))
    expected = order_class_number(f, N)
    scale = BRANCH_SCALE[1] ** len(ring_class_ts(N))

    def run(p):
        return certify("theorem_relativenorm", f, N, relative_norm_orbit(g, p), expected, p, scale)

    return _escalate(run, prec, max_prec)


def j_orbit(f: FieldParams, N: int, prec: int = DEFAULT_PREC) -> list[ApComplex]:
    """``j`` at the CM points of the reduced forms of discriminant ``N^2 d_K``;
    these are the conjugates of ``j(N tau_K)`` over K."""
    D = N * N * f.disc
    out = []
    for a, b, _ in reduced_forms(D):
        with mp.workprec(prec + GUARD_BITS):
            tau = mpc(-b, mpmath.sqrt(-D)) / (2 * a)
        out.append(j_invariant(ApComplex(tau, abs(tau) * mpf(2) ** (-prec - GUARD_BITS)), prec))
    return out


def j_orbit_degree(f: FieldParams, N: int, prec: int = DEFAULT_PREC,
                   max_prec: int = MAX_PREC) -> tuple[int, list[RecognizedCoeff]]:
    """Degree and recognized coefficients of the minimal polynomial of
    ``j(N tau_K)``, doubling precision until every coefficient is recognized."""
    while True:
        coeffs = orbit_polynomial(j_orbit(f, N, prec), f, prec)
        if all(c.ok for c in coeffs) or prec * 2 > max_prec:
            return len(coeffs) - 1, coeffs
        prec *= 2
