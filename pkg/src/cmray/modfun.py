"""q-series evaluation of g2, g3, Delta, j, the Weierstrass function and the
Fricke and Siegel functions of level N.

Every evaluation runs at ``prec + GUARD_BITS`` bits, plus extra bits when
``Im(tau)`` is large enough that ``Delta = g2^3 - 27 g3^2`` cancels; the
returned :class:`ApComplex` values carry truncation and rounding radii.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp, mpc, mpf

from .apcomplex import ApComplex, exp as ap_exp
from .errors import (
    ExceptionalField,
    LabelsEquivalent,
    NotInUpperHalfPlane,
    PoleAtLatticePoint,
    PrecisionUnattainable,
)
from .qfield import FieldParams, embed

GUARD_BITS = 32
MAX_TERMS = 20000
DEFAULT_PREC = 256

TauLike = Union[ApComplex, complex, "mpc"]


# -- labels ---------------------------------------------------------------------


def _frac_part(x: Fraction) -> Fraction:
    return x - math.floor(x)


@dataclass(frozen=True)
class FrickeLabel:
    """A torsion label ``[r1; r2]`` in ``Q^2 \\ Z^2``.

    The raw coordinates are kept: Siegel functions are evaluated at them,
    while Fricke functions only see :meth:`normalized`.
    """

    r1: Fraction
    r2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r1", Fraction(self.r1))
        object.__setattr__(self, "r2", Fraction(self.r2))
        if self.r1.denominator == 1 and self.r2.denominator == 1:
            raise ValueError("a Fricke label must not lie in Z^2")

    @property
    def N(self) -> int:
        """Primitive denominator."""
        return math.lcm(self.r1.denominator, self.r2.denominator)

    def normalized(self) -> "FrickeLabel":
        """Canonical representative of ``+-v mod Z^2`` in ``[0,1)^2``."""
        a = (_frac_part(self.r1), _frac_part(self.r2))
        b = (_frac_part(-self.r1), _frac_part(-self.r2))
        return FrickeLabel(*min(a, b))

    def equivalent(self, other: "FrickeLabel") -> bool:
        return self.normalized() == other.normalized()

    def __neg__(self) -> "FrickeLabel":
        return FrickeLabel(-self.r1, -self.r2)

    def __add__(self, other) -> "FrickeLabel":
        o1, o2 = (other.r1, other.r2) if isinstance(other, FrickeLabel) else other
        return FrickeLabel(self.r1 + o1, self.r2 + o2)

    def __sub__(self, other) -> "FrickeLabel":
        o1, o2 = (other.r1, other.r2) if isinstance(other, FrickeLabel) else other
        return FrickeLabel(self.r1 - o1, self.r2 - o2)

    def __repr__(self):
        return f"[{self.r1}; {self.r2}]"


def label(r1, r2) -> FrickeLabel:
    return FrickeLabel(Fraction(r1), Fraction(r2))


def bernoulli2(x: Fraction) -> Fraction:
    return x * x - x + Fraction(1, 6)


# -- helpers --------------------------------------------------------------------


def _as_tau(tau: TauLike) -> ApComplex:
    if not isinstance(tau, ApComplex):
        tau = ApComplex.exact(tau)
    if tau.im <= tau.err:
        raise NotInUpperHalfPlane(f"Im(tau) = {mpmath.nstr(tau.im, 5)} is not positive")
    return tau


def _extra_bits(tau: ApComplex) -> int:
    # |g2^3 / Delta| ~ |q|^-1 / 1700: bits lost in g2^3 - 27 g3^2
    return max(0, int(2 * math.pi * float(tau.im) * math.log2(math.e)) - 10)


def working_prec(tau: TauLike, prec: int) -> int:
    return prec + GUARD_BITS + _extra_bits(_as_tau(tau))


def _rad(x) -> mpf:
    return mpf(2) ** (-x)


def _fmpf(x: Fraction) -> mpf:
    return mpf(x.numerator) / x.denominator


def _check_terms(n: int):
    if n > MAX_TERMS:
        raise PrecisionUnattainable("Im(tau) too small for the q-series truncation limit")


# -- g2, g3, Delta, j ---------------------------------------------------------------


@dataclass(frozen=True)
class ModularValues:
    g2: ApComplex
    g3: ApComplex
    delta: ApComplex
    j: ApComplex


def _lambert(q: mpc, k: int, eps: mpf) -> tuple[mpc, mpf]:
    """``sum n^k q^n / (1 - q^n)`` with a bound on truncation plus rounding."""
    aq = abs(q)
    s = mpc(0)
    abs_sum = mpf(0)
    qn = mpc(1)
    n = 0
    while True:
        n += 1
        _check_terms(n)
        qn *= q
        term = mpf(n) ** k * qn / (1 - qn)
        s += term
        abs_sum += abs(term)
        # tail from n+1 on: geometric with ratio ((n+2)/(n+1))^k |q|
        m = n + 1
        rho = (mpf(m + 1) / m) ** k * aq
        if rho < 1:
            tail = mpf(m) ** k * aq**m / ((1 - aq) * (1 - rho))
            if tail < eps:
                return s, tail + n * abs_sum * _rad(mp.prec - 1)


def eval_g2g3_delta_j(tau: TauLike, prec: int = DEFAULT_PREC) -> ModularValues:
    """g2, g3, Delta and j of the lattice ``[tau, 1]``."""
    tau = _as_tau(tau)
    wp = working_prec(tau, prec)
    with mp.workprec(wp):
        q = mpmath.exp(2j * mp.pi * tau.z)
        eps = _rad(wp)
        s3, e3 = _lambert(q, 3, eps)
        s5, e5 = _lambert(q, 5, eps)
        E4 = ApComplex(1 + 240 * s3, 240 * e3)
        E6 = ApComplex(1 - 504 * s5, 504 * e5)
        pi = mp.pi
        g2 = ApComplex.rounded(4 * pi**4 / 3) * E4
        g3 = ApComplex.rounded(8 * pi**6 / 27) * E6
        # tau itself carries an error: d/dtau of g2, g3 are O(|q|) small but
        # not negligible for inexact tau.
        if tau.err:
            g2 = ApComplex(g2.z, g2.err + 2 * pi * 240 * 4 * abs(q) * tau.err * abs(g2.z))
            g3 = ApComplex(g3.z, g3.err + 2 * pi * 504 * 4 * abs(q) * tau.err * abs(g3.z))
        delta = g2**3 - 27 * g3**2
        if not delta.is_separated_from_zero():
            raise PrecisionUnattainable("Delta is not separated from zero")
        j = 1728 * g2**3 / delta
        return ModularValues(g2, g3, delta, j)


def delta_eta_product(tau: TauLike, prec: int = DEFAULT_PREC) -> ApComplex:
    """``(2 pi)^12 q prod (1 - q^n)^24``, an independent route to Delta."""
    tau = _as_tau(tau)
    wp = working_prec(tau, prec)
    with mp.workprec(wp):
        q = mpmath.exp(2j * mp.pi * tau.z)
        aq = abs(q)
        prod = mpc(1)
        qn = mpc(1)
        n = 0
        while True:
            n += 1
            _check_terms(n)
            qn *= q
            prod *= 1 - qn
            # log-tail: sum_{m>n} |q|^m / (1 - |q|^m) <= |q|^(n+1) / (1-|q|)^2
            tail = 24 * aq ** (n + 1) / (1 - aq) ** 2
            if tail < _rad(wp):
                break
        val = (2 * mp.pi) ** 12 * q * prod**24
        return ApComplex(val, abs(val) * (2 * tail + n * _rad(wp - 6)))


def delta_residual(tau: TauLike, prec: int = DEFAULT_PREC) -> mpf:
    """Relative gap between ``g2^3 - 27 g3^2`` and the eta product."""
    mv = eval_g2g3_delta_j(tau, prec)
    eta = delta_eta_product(tau, prec)
    with mp.workprec(working_prec(tau, prec)):
        return abs(mv.delta.z - eta.z) / abs(eta.z)


def j_invariant(tau: TauLike, prec: int = DEFAULT_PREC) -> ApComplex:
    return eval_g2g3_delta_j(tau, prec).j


# -- Weierstrass p ----------------------------------------------------------------


def _wp_series(r1, r2, tau: ApComplex, wp: int) -> ApComplex:
    """``p(r1*tau + r2; [tau, 1])`` for real ``0 <= r1 <= 1/2``."""
    q = mpmath.exp(2j * mp.pi * tau.z)
    u = mpmath.exp(2j * mp.pi * (r1 * tau.z + r2))
    aq = abs(q)
    au = abs(u)
    big = max(au, 1 / au)
    one_minus_u = 1 - u
    s = mpf(1) / 12 + u / one_minus_u**2
    abs_sum = abs(s)
    uinv = 1 / u
    qm = mpc(1)
    eps = _rad(wp)
    m = 0
    while True:
        m += 1
        _check_terms(m)
        qm *= q
        a = qm * u
        b = qm * uinv
        term = a / (1 - a) ** 2 + b / (1 - b) ** 2 - 2 * m * qm / (1 - qm)
        s += term
        abs_sum += abs(term)
        # tail over m' > m
        x = aq ** (m + 1) * big
        rho = (mpf(m + 2) / (m + 1)) * aq
        if x < 1 and rho < 1:
            tail = 2 * x / ((1 - x) ** 2 * (1 - aq)) + 2 * (m + 1) * aq ** (m + 1) / (
                (1 - aq) * (1 - rho)
            )
            if tail < eps:
                break
    scale = -4 * mp.pi**2
    val = scale * s
    err = 4 * mp.pi**2 * (tail + m * abs_sum * _rad(wp - 2))
    # crude |dp/dtau| bound for inexact tau
    if tau.err:
        err += tau.err * 64 * mp.pi**3 * (abs_sum + 1 / abs(one_minus_u) ** 3)
    return ApComplex(val, err + abs(val) * _rad(wp - 1))


def wp_torsion(lab: FrickeLabel, tau: TauLike, prec: int = DEFAULT_PREC) -> ApComplex:
    """``p(r1*tau + r2; [tau, 1])`` at a rational torsion point."""
    tau = _as_tau(tau)
    n = lab.normalized()
    r1, r2 = n.r1, n.r2
    if r1 > Fraction(1, 2):
        r1, r2 = 1 - r1, _frac_part(-r2)
    wp = working_prec(tau, prec)
    with mp.workprec(wp):
        return _wp_series(_fmpf(r1), _fmpf(r2), tau, wp)


def wp(z: TauLike, tau: TauLike, prec: int = DEFAULT_PREC) -> ApComplex:
    """Weierstrass ``p(z; [tau, 1])`` for arbitrary complex ``z``."""
    tau = _as_tau(tau)
    z = z if isinstance(z, ApComplex) else ApComplex.exact(z)
    wp_bits = working_prec(tau, prec)
    with mp.workprec(wp_bits):
        x = z.im / tau.im
        y = z.re - x * tau.re
        x -= mpmath.floor(x)
        y -= mpmath.floor(y)
        if x > 0.5:
            x, y = 1 - x, 1 - y
            y -= mpmath.floor(y)
        # distance from the reduced point to the nearest lattice point
        zr = x * tau.z + y
        dist = min(abs(zr - c) for c in (0, 1, tau.z, tau.z + 1, tau.z - 1))
        if dist <= z.err + _rad(wp_bits - 16):
            raise PoleAtLatticePoint("z lies on the lattice [tau, 1]")
        val = _wp_series(x, y, tau, wp_bits)
        if z.err:
            # |p'(z)| <= ~ 2/dist^3 + |p|: crude Lipschitz bound near the point
            slope = 2 / dist**3 + 64 * mp.pi**3
            val = ApComplex(val.z, val.err + slope * z.err)
        return val


# -- Fricke and Siegel functions ---------------------------------------------------------


def fricke(k: int, v: FrickeLabel, tau: TauLike, prec: int = DEFAULT_PREC,
           mv: ModularValues | None = None) -> ApComplex:
    """The k-th Fricke function ``f^(k)_v(tau)``, k in {1, 2, 3}."""
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    tau = _as_tau(tau)
    if mv is None:
        mv = eval_g2g3_delta_j(tau, prec)
    p = wp_torsion(v, tau, prec)
    with mp.workprec(working_prec(tau, prec)):
        if k == 1:
            return mv.g2 * mv.g3 / mv.delta * p
        if k == 2:
            return mv.g2**2 / mv.delta * p**2
        return mv.g3 / mv.delta * p**3


def _siegel_log(v: FrickeLabel, tau: ApComplex, wp: int) -> ApComplex:
    # the product is evaluated at r1 mod 1; each unit shift of r1 multiplies
    # g by -exp(-pi i r2)
    shift = math.floor(v.r1)
    r1 = v.r1 - shift
    r2 = v.r2
    q = mpmath.exp(2j * mp.pi * tau.z)
    aq = abs(q)
    zeta = mpmath.expjpi(2 * _fmpf(_frac_part(r2)))
    qr = mpmath.exp(2j * mp.pi * _fmpf(r1) * tau.z)  # q^r1
    w0 = qr * zeta
    prod = 1 - w0
    wa = w0  # q^(n+r1) zeta
    wb = 1 / w0  # q^(n-r1) / zeta
    r1f = _fmpf(r1)
    eps = _rad(wp)
    n = 0
    while True:
        n += 1
        _check_terms(n)
        wa *= q
        wb *= q
        prod *= (1 - wa) * (1 - wb)
        x = aq ** (n + 1 - r1f)
        if x < 1:
            tail = 2 * x / ((1 - x) * (1 - aq))
            if tail < eps:
                break
    lead = mpc(0, 1) * mp.pi * (1 + _fmpf(r2) * (r1f - 1)) + mpc(0, 1) * mp.pi * tau.z * _fmpf(
        bernoulli2(r1)
    )
    lead += mpc(0, 1) * mp.pi * shift * (1 - _fmpf(r2))
    val = lead + mpmath.log(prod)
    err = tail + n * 4 * _rad(wp - 1)
    if tau.err:
        # d/dtau of the log: pi*B2 + O(sum n |q^(n-r1)|)
        err += tau.err * mp.pi * (abs(_fmpf(bernoulli2(r1))) + 4 * n / (1 - aq ** (1 - r1f)) ** 2)
    return ApComplex(val, err)


def siegel_log(v: FrickeLabel, tau: TauLike, prec: int = DEFAULT_PREC) -> ApComplex:
    """A logarithm of ``g_v(tau)`` (branch unspecified, real part exact)."""
    tau = _as_tau(tau)
    with mp.workprec(working_prec(tau, prec)):
        return _siegel_log(v, tau, mp.prec)


def siegel(v: FrickeLabel, tau: TauLike, prec: int = DEFAULT_PREC) -> ApComplex:
    """The Siegel function ``g_v(tau)`` for the exact label ``v``."""
    tau = _as_tau(tau)
    with mp.workprec(working_prec(tau, prec)):
        return ap_exp(_siegel_log(v, tau, mp.prec))


def siegel_pow(v: FrickeLabel, e: int, tau: TauLike, prec: int = DEFAULT_PREC) -> ApComplex:
    """``g_v(tau)^e`` computed as ``exp(e * log g_v)``."""
    tau = _as_tau(tau)
    with mp.workprec(working_prec(tau, prec)):
        lg = _siegel_log(v, tau, mp.prec)
        return ap_exp(ApComplex(e * lg.z, abs(e) * lg.err))


def verify_fricke_siegel_identity(u: FrickeLabel, v: FrickeLabel, tau: TauLike,
                                  prec: int = DEFAULT_PREC) -> mpf:
    """Relative residual of ``(f_u - f_v)^6`` against the Siegel-product side."""
    if u.equivalent(v):
        raise LabelsEquivalent(f"{u} and {v} agree up to sign mod Z^2")
    tau = _as_tau(tau)
    mv = eval_g2g3_delta_j(tau, prec)
    fu = fricke(1, u, tau, prec, mv)
    fv = fricke(1, v, tau, prec, mv)
    with mp.workprec(working_prec(tau, prec)):
        lhs = (fu - fv) ** 6
        wpb = mp.prec
        logs = (
            6 * _siegel_log(u + v, tau, wpb).z
            + 6 * _siegel_log(u - v, tau, wpb).z
            - 12 * _siegel_log(u, tau, wpb).z
            - 12 * _siegel_log(v, tau, wpb).z
        )
        j = mv.j.z
        if min(abs(j), abs(j - 1728)) < mpf(2) ** (-(prec // 2)) * 1728:
            raise ExceptionalField("both sides vanish identically where j is 0 or 1728")
        rhs = j**2 * (j - 1728) ** 3 / (mpf(2) ** 30 * mpf(3) ** 24) * mpmath.exp(logs)
        return abs(lhs.z - rhs) / abs(rhs)


def weber_branch(f: FieldParams) -> int:
    return {-4: 2, -3: 3}.get(f.disc, 1)


def weber_value(f: FieldParams, v: FrickeLabel, prec: int = DEFAULT_PREC) -> ApComplex:
    """``h_E(phi_E(r1*tau_K + r2)) = f^(k)_v(tau_K)`` with the Weber branch of K."""
    tau = embed(f, f.tau, prec + GUARD_BITS)
    return fricke(weber_branch(f), v, tau, prec)
