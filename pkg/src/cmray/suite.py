"""Verification suites and the JSON report document they produce."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import mpmath
from mpmath import mp, mpc, mpf

from .errors import NNotCoprimeTo6
from .fieldgen import j_orbit_degree, order_class_number, verify_corollary_main, verify_theorem_relativenorm
from .invariants import (
    norm_to_ring_class,
    well_definedness_spread,
    xi_N,
    xi_power_identity_check,
)
from .limitformula import AnalyticConfig, gauss_sum, find_gamma, kronecker_sides, stickelberger
from .modfun import (
    GUARD_BITS,
    FrickeLabel,
    delta_residual,
    siegel_log,
    verify_fricke_siegel_identity,
    wp,
)
from .qfield import FieldParams, embed, make_field
from .rayclass import (
    RayClassGroup,
    characters,
    find_character_C1C2C3,
    make_modulus,
    ring_subgroup,
)

SCHEMA_VERSION = "1"
SUITES = ("identities", "kronecker", "generation", "all")

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "field_disc", "modulus_N", "prec_bits", "checks", "timings_ms"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "field_disc": {"type": "integer"},
        "modulus_N": {"type": "integer"},
        "prec_bits": {"type": "integer"},
        "suite": {"enum": list(SUITES)},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "residual", "margin", "details"],
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "inconclusive"]},
                    "residual": {"type": "string"},
                    "margin": {"type": "string"},
                    "details": {"type": "object"},
                },
                "additionalProperties": False,
            },
        },
        "skipped": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "reason"],
                "properties": {"name": {"type": "string"}, "reason": {"type": "string"}},
            },
        },
        "timings_ms": {"type": "object", "additionalProperties": {"type": "number"}},
    },
    "additionalProperties": False,
}


def dec(x, digits: int = 6) -> str:
    """Deterministic decimal string for mpf, float or int."""
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return str(x)
    x = mpf(x)
    if mpmath.isinf(x):
        return "inf"
    return mpmath.nstr(x, digits, min_fixed=-4, max_fixed=6)


@dataclass
class Check:
    name: str
    status: str
    residual: object
    margin: object
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "residual": dec(self.residual),
            "margin": dec(self.margin),
            "details": {k: v if isinstance(v, (str, int, bool, list)) else dec(v) for k, v in self.details.items()},
        }


def _bounded(name: str, residual, tol, **details) -> Check:
    """Pass iff ``residual < tol``; margin is ``tol / residual``."""
    residual = mpf(residual)
    tol = mpf(tol)
    margin = tol / residual if residual > 0 else mpf("inf")
    details = {"tolerance": tol, **details}
    return Check(name, "pass" if residual < tol else "fail", residual, margin, details)


@dataclass
class Context:
    field: FieldParams
    N: int
    prec: int
    B: int
    tol: float
    _group: Optional[RayClassGroup] = None
    _cond_groups: dict = field(default_factory=dict)

    @property
    def group(self) -> RayClassGroup:
        if self._group is None:
            self._group = RayClassGroup(make_modulus(self.field, self.N))
        return self._group

    def cond_group(self, cond) -> RayClassGroup:
        if cond.ideal == self.group.modulus.ideal:
            return self.group
        if cond.ideal not in self._cond_groups:
            self._cond_groups[cond.ideal] = RayClassGroup(cond)
        return self._cond_groups[cond.ideal]

    @property
    def coprime6(self) -> bool:
        return math.gcd(self.N, 6) == 1

    @property
    def exceptional(self) -> bool:
        return self.field.disc in (-3, -4)

    @property
    def tau(self):
        return embed(self.field, self.field.tau, self.prec + GUARD_BITS)

    def ident_tol(self) -> mpf:
        return mpf(2) ** (-(self.prec - 56))


def _labels(N: int) -> list[FrickeLabel]:
    return [
        FrickeLabel(Fraction(a, N), Fraction(b, N))
        for a, b in [(0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 3)]
        if (a % N, b % N) != (0, 0)
    ]


# -- identities -----------------------------------------------------------------------


GENERIC_TAU = mpc("0.3", "1.2")


def check_fricke_siegel(ctx: Context) -> Check:
    # at tau_K with j in {0, 1728} both sides vanish, so use a generic point
    tau = GENERIC_TAU if ctx.exceptional else ctx.tau
    labels = _labels(ctx.N)
    worst, count = mpf(0), 0
    for i, u in enumerate(labels):
        for v in labels[i + 1:]:
            if u.equivalent(v):
                continue
            worst = max(worst, verify_fricke_siegel_identity(u, v, tau, ctx.prec))
            count += 1
    where = "0.3+1.2i" if ctx.exceptional else "tau_K"
    return _bounded("fricke_siegel_identity", worst, ctx.ident_tol(), pairs=count, tau=where)


def _points(ctx: Context):
    t = ctx.tau.z
    return [t * mpf("0.23") + mpf("0.11"), t * mpf("0.41") - mpf("0.37"), t * mpf("0.07") + mpf("0.5")]


def check_wp_even(ctx: Context) -> Check:
    worst = mpf(0)
    with mp.workprec(ctx.prec + GUARD_BITS):
        for z in _points(ctx):
            a, b = wp(z, ctx.tau, ctx.prec).z, wp(-z, ctx.tau, ctx.prec).z
            worst = max(worst, abs(a - b) / abs(a))
    return _bounded("wp_even", worst, ctx.ident_tol())


def check_wp_periodic(ctx: Context) -> Check:
    worst = mpf(0)
    with mp.workprec(ctx.prec + GUARD_BITS):
        t = ctx.tau.z
        for z in _points(ctx):
            a = wp(z, ctx.tau, ctx.prec).z
            for w in (1, t, t - 2):
                b = wp(z + w, ctx.tau, ctx.prec).z
                worst = max(worst, abs(a - b) / abs(a))
    return _bounded("wp_periodic", worst, ctx.ident_tol())


def check_siegel_symmetry(ctx: Context) -> Check:
    e = 12 * ctx.N
    worst = mpf(0)
    with mp.workprec(ctx.prec + GUARD_BITS):
        for v in _labels(ctx.N):
            base = siegel_log(v, ctx.tau, ctx.prec).z * e
            for w in (-v, v + (0, 1), v + (1, 0), v + (-1, 2)):
                other = siegel_log(w, ctx.tau, ctx.prec).z * e
                d = other - base
                d -= 2j * mp.pi * mpmath.nint(d.imag / (2 * mp.pi))
                worst = max(worst, abs(mpmath.expm1(d)))
    return _bounded("siegel_power_symmetry", worst, ctx.ident_tol())


def check_delta(ctx: Context) -> Check:
    return _bounded("delta_discriminant", delta_residual(ctx.tau, ctx.prec), ctx.ident_tol())


def check_well_defined(ctx: Context) -> Check:
    g = ctx.group
    worst = max(well_definedness_spread(g, C, "fricke", ctx.prec) for C in g.elements)
    return _bounded("fricke_well_defined", worst, mpf(2) ** (-ctx.prec + 16), classes=g.order)


def check_xi_paths(ctx: Context) -> Check:
    xi = xi_N(ctx.field, ctx.N, ctx.prec, ctx.group)
    return Check("xi_two_paths", "pass", xi.err, mpf(1) / max(xi.err, mpf(2) ** -ctx.prec),
                 {"xi": mpmath.nstr(xi.z, 15), "nonzero": bool(xi.is_separated_from_zero())})


def check_norm_paths(ctx: Context) -> Check:
    v = norm_to_ring_class(ctx.field, ctx.N, ctx.prec, ctx.group)
    return Check("norm_two_paths", "pass", v.err, mpf(1) / max(v.err, mpf(2) ** -ctx.prec),
                 {"norm": mpmath.nstr(v.z, 15)})


def check_xi_power(ctx: Context) -> Check:
    r = xi_power_identity_check(ctx.field, ctx.N, ctx.prec, ctx.group)
    return _bounded("xi_power_identity", r, mpf(2) ** (-(ctx.prec - 76)))


# -- kronecker ------------------------------------------------------------------------


def _conj_classes(chars):
    seen, out = set(), []
    for chi in chars:
        if chi.exponents in seen:
            continue
        seen.add(chi.exponents)
        seen.add(chi.conj().exponents)
        out.append(chi)
    return out


def check_gauss(ctx: Context) -> Check:
    g = ctx.group
    prim = [chi for chi in characters(g) if not chi.is_principal() and chi.conductor is not None
            and chi.conductor.ideal == g.modulus.ideal]
    if not prim:
        return Check("gauss_sum_modulus", "pass", 0, "inf", {"characters": 0})
    gamma = find_gamma(g.modulus)
    target = mpmath.sqrt(g.modulus.ideal.norm())
    worst = mpf(0)
    with mp.workprec(ctx.prec + GUARD_BITS):
        for chi in prim:
            T = gauss_sum(g, chi, gamma, ctx.prec)
            worst = max(worst, abs(abs(T.z) - target))
    return _bounded("gauss_sum_modulus", worst, mpf(2) ** (-ctx.prec + 12), characters=len(prim),
                    gamma=str(gamma))


def check_kronecker(ctx: Context) -> Check:
    g = ctx.group
    cfg = AnalyticConfig(prec=ctx.prec, B=ctx.B)
    chars = [chi for chi in characters(g) if not chi.is_principal() and chi.conductor is not None]
    worst, count = mpf(0), 0
    for chi in _conj_classes(chars):
        g0 = ctx.cond_group(chi.conductor)
        rep = kronecker_sides(g, chi, cfg, g0=g0)
        worst = max(worst, mpf(rep.residual))
        count += 1
    return _bounded("kronecker_limit_formula", worst, ctx.tol, characters=count, B=ctx.B)


def check_stickelberger(ctx: Context) -> Check:
    g = ctx.group
    ring = ring_subgroup(g)
    smallest = mpf("inf")
    chars = []
    for Cp in ring.coset_reps():
        if Cp in ring:
            continue
        chi = find_character_C1C2C3(g, ring, Cp)
        chars.append(chi)
        smallest = min(smallest, abs(stickelberger(g, chi.conj(), ctx.prec).z))
    floor = mpf("1e-6")
    if not chars:
        return Check("stickelberger_nonvanishing", "pass", 0, "inf", {"characters": 0})
    status = "pass" if smallest > floor else "fail"
    return Check("stickelberger_nonvanishing", status, smallest, smallest / floor,
                 {"characters": len(set(c.exponents for c in chars)), "floor": floor})


# -- generation -----------------------------------------------------------------------


def _certificate_check(name: str, cert) -> Check:
    status = {"certified": "pass", "failed": "fail"}.get(cert.verdict, "inconclusive")
    return Check(name, status, cert.coeff_recognition_residual, cert.margin_ratio, {
        "verdict": cert.verdict,
        "orbit_size": cert.orbit_size,
        "expected_degree": cert.expected_degree,
        "min_pairwise_gap": cert.min_pairwise_gap,
        "max_error_radius": cert.max_error_radius,
        "prec_used": cert.prec,
        "escalations": [e["prec"] for e in cert.escalations],
    })


def check_corollary(ctx: Context) -> Check:
    return _certificate_check("corollary_main", verify_corollary_main(ctx.field, ctx.N, ctx.prec, group=ctx.group))


def check_theorem(ctx: Context) -> Check:
    return _certificate_check(
        "theorem_relativenorm", verify_theorem_relativenorm(ctx.field, ctx.N, ctx.prec, group=ctx.group)
    )


def check_ring_degree(ctx: Context) -> Check:
    h = order_class_number(ctx.field, ctx.N)
    deg, coeffs = j_orbit_degree(ctx.field, ctx.N, ctx.prec)
    resid = max(c.residual for c in coeffs)
    ok = deg == h and all(c.ok for c in coeffs)
    return Check("ring_class_degree", "pass" if ok else "fail", resid, h, {
        "degree": deg, "h_O": h, "recognized": all(c.ok for c in coeffs)})


# -- orchestration --------------------------------------------------------------------

Plan = list[tuple[str, Callable[[Context], Check], Optional[str]]]


def plan(ctx: Context, suite: str) -> Plan:
    """Checks of ``suite`` as ``(name, fn, skip_reason)``."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if suite in ("generation", "all") and not ctx.coprime6:
        raise NNotCoprimeTo6(f"N must be prime to 6 for the generation suite (N = {ctx.N})")
    need6 = None if ctx.coprime6 else "N must be prime to 6"
    nonexc = need6 or ("excluded for Q(i) and Q(sqrt(-3))" if ctx.exceptional else None)
    out: Plan = []
    if suite in ("identities", "all"):
        out += [
            ("fricke_siegel_identity", check_fricke_siegel, None),
            ("wp_even", check_wp_even, None),
            ("wp_periodic", check_wp_periodic, None),
            ("siegel_power_symmetry", check_siegel_symmetry, None),
            ("delta_discriminant", check_delta, None),
            ("fricke_well_defined", check_well_defined, None),
            ("xi_two_paths", check_xi_paths, need6),
            ("norm_two_paths", check_norm_paths, nonexc),
            ("xi_power_identity", check_xi_power, nonexc),
        ]
    if suite in ("kronecker", "all"):
        out += [
            ("gauss_sum_modulus", check_gauss, None),
            ("kronecker_limit_formula", check_kronecker, None),
            ("stickelberger_nonvanishing", check_stickelberger, nonexc),
        ]
    if suite in ("generation", "all"):
        out += [
            ("corollary_main", check_corollary, None),
            ("theorem_relativenorm", check_theorem, nonexc),
            ("ring_class_degree", check_ring_degree, nonexc),
        ]
    return out


def run_suite(disc: int, N: int, suite: str = "all", prec: int = 256, B: int = 100_000,
              tol: float = 1e-3) -> dict:
    """Run ``suite`` and return the report document (a JSON-ready dict)."""
    f = make_field(disc)
    make_modulus(f, N)
    ctx = Context(f, N, prec, B, tol)
    checks, skipped, timings = [], [], {}
    old = mp.prec
    try:
        mp.prec = prec + GUARD_BITS
        for name, fn, reason in plan(ctx, suite):
            if reason:
                skipped.append({"name": name, "reason": reason})
                continue
            t0 = time.perf_counter()
            checks.append(fn(ctx).as_dict())
            timings[name] = round((time.perf_counter() - t0) * 1000, 1)
    finally:
        mp.prec = old
    return {
        "schema_version": SCHEMA_VERSION,
        "field_disc": disc,
        "modulus_N": N,
        "prec_bits": prec,
        "suite": suite,
        "checks": checks,
        "skipped": skipped,
        "timings_ms": timings,
    }


def report_passed(report: dict) -> bool:
    return all(c["status"] == "pass" for c in report["checks"])
