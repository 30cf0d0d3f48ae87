"""Complex numbers at arbitrary precision carrying a scalar error radius.

The radius is propagated conservatively through ``+ - * /`` and integer
powers; each operation also charges one rounding unit at the current mpmath
working precision.  This is not interval arithmetic: it is a bookkeeping
device good enough to compare distinctness gaps against noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import mpmath
from mpmath import mp, mpc, mpf

Number = Union[int, float, complex, "mpf", "mpc"]


def _ulp(x) -> mpf:
    return abs(x) * mpf(2) ** (1 - mp.prec)


@dataclass(frozen=True)
class ApComplex:
    """A value ``z`` known to lie within distance ``err`` of the truth."""

    z: mpc
    err: mpf

    def __post_init__(self):
        # converting an existing mpc/mpf would round it to the ambient precision
        if not isinstance(self.z, mpc):
            object.__setattr__(self, "z", mpc(self.z))
        err = self.err if isinstance(self.err, mpf) else mpf(self.err)
        object.__setattr__(self, "err", abs(err))

    @classmethod
    def exact(cls, value: Number) -> "ApComplex":
        return cls(mpc(value), mpf(0))

    @classmethod
    def rounded(cls, value: Number) -> "ApComplex":
        """Wrap a freshly computed value, charging one rounding unit."""
        z = mpc(value)
        return cls(z, _ulp(z))

    @property
    def re(self) -> mpf:
        return self.z.real

    @property
    def im(self) -> mpf:
        return self.z.imag

    def __abs__(self) -> mpf:
        return abs(self.z)

    def conjugate(self) -> "ApComplex":
        return ApComplex(mpmath.conj(self.z), self.err)

    def __neg__(self) -> "ApComplex":
        return ApComplex(-self.z, self.err)

    def __add__(self, other) -> "ApComplex":
        other = _coerce(other)
        z = self.z + other.z
        return ApComplex(z, self.err + other.err + _ulp(z))

    __radd__ = __add__

    def __sub__(self, other) -> "ApComplex":
        other = _coerce(other)
        z = self.z - other.z
        return ApComplex(z, self.err + other.err + _ulp(z))

    def __rsub__(self, other) -> "ApComplex":
        return _coerce(other) - self

    def __mul__(self, other) -> "ApComplex":
        other = _coerce(other)
        z = self.z * other.z
        err = abs(self.z) * other.err + abs(other.z) * self.err + self.err * other.err
        return ApComplex(z, err + _ulp(z))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ApComplex":
        other = _coerce(other)
        den = abs(other.z)
        if den <= other.err:
            raise ZeroDivisionError("divisor is not separated from zero by its error radius")
        z = self.z / other.z
        err = (self.err + abs(z) * other.err) / (den - other.err)
        return ApComplex(z, err + _ulp(z))

    def __rtruediv__(self, other) -> "ApComplex":
        return _coerce(other) / self

    def __pow__(self, n: int) -> "ApComplex":
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return ApComplex.exact(1) / (self ** (-n))
        result = ApComplex.exact(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_separated_from_zero(self) -> bool:
        return abs(self.z) > self.err

    def contains(self, value: Number, slack: Number = 0) -> bool:
        return abs(self.z - mpc(value)) <= self.err + mpf(slack)

    def __repr__(self) -> str:
        return f"ApComplex({mpmath.nstr(self.z, 20)} ± {mpmath.nstr(self.err, 3)})"


def _coerce(x) -> ApComplex:
    if isinstance(x, ApComplex):
        return x
    return ApComplex.exact(x)


def exp(x: ApComplex) -> ApComplex:
    z = mpmath.exp(x.z)
    # |e^(z+h) - e^z| <= |e^z| (e^|h| - 1)
    return ApComplex(z, abs(z) * mpmath.expm1(x.err) + _ulp(z))


def relative_residual(a: ApComplex, b: ApComplex) -> mpf:
    """``|a - b| / |b|`` as a plain mpf."""
    return abs(a.z - b.z) / abs(b.z)
