"""Fixed-precision elements of Q_p stored as p^exp times a unit mantissa."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from ..errors import PrecisionExhausted

INF = 1 << 60


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


Number = Union[int, Fraction, "PadicScalar"]


class PadicScalar:
    """Element of Q_p with relative precision capped at ``N`` digits.

    ``prec`` is the absolute precision: the value is known modulo p^prec.
    Exact zero carries ``prec = INF``.
    """

    __slots__ = ("p", "N", "exp", "unit", "prec")

    def __init__(self, p: int, N: int, exp: int, unit: int, prec: int):
        self.p = p
        self.N = N
        if prec >= INF // 2:
            prec = INF
        rel = prec - exp
        if unit == 0 or rel <= 0:
            self.exp, self.unit, self.prec = 0, 0, prec
            return
        while unit % p == 0:
            unit //= p
            exp += 1
            rel -= 1
            if rel <= 0:
                self.exp, self.unit, self.prec = 0, 0, prec
                return
        if rel > N:
            rel = N
            prec = exp + N
        self.exp = exp
        self.unit = unit % p**rel
        self.prec = prec

    # constructors

    @classmethod
    def zero(cls, p: int, N: int, prec: int = INF) -> "PadicScalar":
        return cls(p, N, 0, 0, prec)

    @classmethod
    def from_int(cls, p: int, n: int, N: int) -> "PadicScalar":
        if n == 0:
            return cls.zero(p, N)
        v = vp(n, p)
        return cls(p, N, v, n // p**v, v + N)

    @classmethod
    def from_fraction(cls, p: int, x: Fraction | int, N: int) -> "PadicScalar":
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, N)
        a, b = x.numerator, x.denominator
        va, vb = vp(a, p), vp(b, p)
        a //= p**va
        b //= p**vb
        mod = p**N
        return cls(p, N, va - vb, a * pow(b, -1, mod) % mod, va - vb + N)

    def _coerce(self, other: Number) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise ValueError("mixing scalars over different primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicScalar.from_fraction(self.p, other, self.N)
        return NotImplemented

    # predicates

    def is_zero(self) -> bool:
        return self.unit == 0

    def valuation(self) -> int:
        if self.unit == 0:
            raise PrecisionExhausted(f"scalar is zero to precision p^{self.prec}")
        return self.exp

    def lower_bound_valuation(self) -> int:
        return self.prec if self.unit == 0 else self.exp

    def is_unit(self) -> bool:
        return self.unit != 0 and self.exp == 0

    def is_integral(self) -> bool:
        return self.unit == 0 or self.exp >= 0

    def residue(self) -> int:
        """Image in F_p; requires integrality."""
        if self.unit == 0 or self.exp > 0:
            return 0
        if self.exp < 0:
            raise ValueError("residue of a non-integral scalar")
        return self.unit % self.p

    def lift(self) -> int:
        """An integer representative; only for integral values."""
        if self.unit == 0:
            return 0
        if self.exp < 0:
            raise ValueError("non-integral scalar has no integer lift")
        return self.unit * self.p**self.exp

    def to_fraction(self) -> Fraction:
        """A rational representative (p^exp times the stored mantissa)."""
        return Fraction(self.unit) * Fraction(self.p) ** self.exp if self.unit else Fraction(0)

    # arithmetic

    def __neg__(self) -> "PadicScalar":
        return PadicScalar(self.p, self.N, self.exp, -self.unit, self.prec)

    def __add__(self, other: Number) -> "PadicScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec, other.prec)
        if self.unit == 0:
            return PadicScalar(self.p, self.N, other.exp, other.unit, prec)
        if other.unit == 0:
            return PadicScalar(self.p, self.N, self.exp, self.unit, prec)
        e = min(self.exp, other.exp)
        if prec - e <= 0:
            return PadicScalar.zero(self.p, self.N, prec)
        mant = self.unit * self.p ** (self.exp - e) + other.unit * self.p ** (other.exp - e)
        return PadicScalar(self.p, self.N, e, mant % self.p ** (prec - e), prec)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "PadicScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Number) -> "PadicScalar":
        return (-self) + other

    def __mul__(self, other: Number) -> "PadicScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        vx = self.lower_bound_valuation()
        vy = other.lower_bound_valuation()
        prec = min(self.prec + vy, other.prec + vx)
        if self.unit == 0 or other.unit == 0:
            return PadicScalar.zero(self.p, self.N, prec)
        return PadicScalar(self.p, self.N, self.exp + other.exp, self.unit * other.unit, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicScalar":
        if self.unit == 0:
            raise PrecisionExhausted("inverse of a scalar that is zero at precision")
        rel = self.prec - self.exp
        return PadicScalar(self.p, self.N, -self.exp, pow(self.unit, -1, self.p**rel), rel - self.exp)

    def __truediv__(self, other: Number) -> "PadicScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other: Number) -> "PadicScalar":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "PadicScalar":
        if n < 0:
            return self.inverse() ** (-n)
        result = PadicScalar.from_int(self.p, 1, self.N)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (PadicScalar, int, Fraction)):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if self.unit == 0:
            return "0" if self.prec >= INF else f"O({self.p}^{self.prec})"
        head = f"{self.unit}" if self.exp == 0 else f"{self.p}^{self.exp}*{self.unit}"
        return f"{head} + O({self.p}^{self.prec})"
