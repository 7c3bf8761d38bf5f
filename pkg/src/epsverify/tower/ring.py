"""Unramified extensions of Z_p, optionally with the cyclotomic layer Q_p(zeta_{p^k}) on top.

Elements are stored in the integral basis alpha^i * pi^j, where alpha generates the
unramified layer (root of the lifted residue modulus) and pi = 1 - zeta_{p^k} is a
uniformizer of the cyclotomic layer.  A nonzero element is p^exp times a mantissa whose
coefficients are not all divisible by p.  Precision is tracked as an absolute pi-adic
exponent ``prec``: the element is known modulo pi^prec.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from ..errors import InvalidParameters, PrecisionExhausted, RingTooSmall
from .residue import Elt, ResidueField, is_irreducible
from .scalar import INF, PadicScalar, vp

Coercible = Union[int, Fraction, PadicScalar, "TowerElement"]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _eisenstein(p: int, level: int) -> tuple[int, ...]:
    """Coefficients of the monic polynomial Phi_{p^level}(1 - X), lowest first."""
    # (1 - X)^n as a coefficient list
    def one_minus_x_pow(n: int) -> list[int]:
        out = [1]
        for _ in range(n):
            nxt = [0] * (len(out) + 1)
            for i, c in enumerate(out):
                nxt[i] += c
                nxt[i + 1] -= c
            out = nxt
        return out

    step = p ** (level - 1)
    total = [0] * ((p - 1) * step + 1)
    for i in range(p):
        for k, c in enumerate(one_minus_x_pow(i * step)):
            total[k] += c
    assert total[-1] == 1
    return tuple(total)


class TowerRing:
    """Z_p[alpha][zeta_{p^level}] truncated to ``N`` p-adic digits of relative precision.

    ``level`` 0 gives the unramified ring of degree ``f``; level 1 adjoins zeta_p and
    level 2 adjoins zeta_{p^2}.
    """

    def __init__(self, p: int, f: int, level: int = 0, N: int = 20, modulus: Sequence[int] | None = None):
        if p % 2 == 0 or not _is_prime(p):
            raise InvalidParameters(f"p must be an odd prime, got {p}")
        if f < 1 or N < 1 or level not in (0, 1, 2):
            raise InvalidParameters(f"bad ring parameters f={f}, level={level}, N={N}")
        self.p, self.f, self.level, self.N = p, f, level, N
        self.residue = ResidueField(p, f, modulus)
        if modulus is not None and not is_irreducible(modulus, p):
            from ..errors import ModulusNotIrreducible

            raise ModulusNotIrreducible(f"modulus {tuple(modulus)} is reducible mod {p}")
        self.modulus = self.residue.modulus
        self._g_terms = [(t, c) for t, c in enumerate(self.modulus[:-1]) if c]
        self.e = 1 if level == 0 else p ** (level - 1) * (p - 1)
        if level:
            eis = _eisenstein(p, level)
            self._eis_terms = [(t, c) for t, c in enumerate(eis[:-1]) if c]
        else:
            self._eis_terms = []
        self.degree = f * self.e
        self._moduli_cache: dict[int, tuple[int, ...]] = {}
        self._frob_cache: dict[int, tuple[tuple[int, ...], ...]] = {}
        self._teich_cache: dict[Elt, TowerElement] = {}
        self._base: TowerRing | None = None

    def __repr__(self) -> str:
        return f"TowerRing(p={self.p}, f={self.f}, level={self.level}, N={self.N})"

    def same_as(self, other: "TowerRing") -> bool:
        return (
            self is other
            or (self.p, self.f, self.level, self.N, self.modulus)
            == (other.p, other.f, other.level, other.N, other.modulus)
        )

    @property
    def base(self) -> "TowerRing":
        """The unramified layer as a ring of its own."""
        if self.level == 0:
            return self
        if self._base is None:
            self._base = TowerRing(self.p, self.f, 0, self.N, self.modulus)
        return self._base

    # ---- low-level mantissa arithmetic ----

    def _moduli(self, R: int) -> tuple[int, ...]:
        """Per-coefficient moduli for a mantissa known modulo pi^R."""
        mods = self._moduli_cache.get(R)
        if mods is None:
            e, p = self.e, self.p
            per_slot = []
            for j in range(e):
                k = -(-(R - j) // e)
                per_slot.append(p**k if k > 0 else 1)
            mods = tuple(m for m in per_slot for _ in range(self.f))
            self._moduli_cache[R] = mods
        return mods

    def _reduce(self, coeffs: Sequence[int], R: int) -> list[int]:
        return [c % m for c, m in zip(coeffs, self._moduli(R))]

    def _mul_mant(self, a: Sequence[int], b: Sequence[int], R: int) -> list[int]:
        """Product of two reduced (nonnegative) mantissas, reduced modulo pi^R."""
        f, e = self.f, self.e
        if f == 1 and e == 1:
            return [a[0] * b[0] % self._moduli(R)[0]]
        width = 2 * max(max(a).bit_length(), max(b).bit_length(), 1) + (f * e).bit_length() + 1
        nbytes = (width + 7) // 8
        stride = 2 * f - 1
        npos = e * stride

        def pack(v: Sequence[int]) -> int:
            buf = bytearray(npos * nbytes)
            for j in range(e):
                base = j * stride
                for i in range(f):
                    c = v[j * f + i]
                    if c:
                        off = (base + i) * nbytes
                        buf[off : off + nbytes] = c.to_bytes(nbytes, "little")
            return int.from_bytes(buf, "little")

        prod = pack(a) * pack(b)
        total = (2 * e - 1) * stride
        raw = prod.to_bytes(total * nbytes, "little")
        rows = []
        for j in range(2 * e - 1):
            row = [
                int.from_bytes(raw[(j * stride + i) * nbytes : (j * stride + i + 1) * nbytes], "little")
                for i in range(stride)
            ]
            # reduce alpha-degree modulo the monic modulus
            for deg in range(stride - 1, f - 1, -1):
                c = row[deg]
                if c:
                    shift = deg - f
                    for t, gt in self._g_terms:
                        row[shift + t] -= c * gt
            rows.append(row[:f])
        # reduce pi-degree using pi^e = -sum E_t pi^t
        for j in range(2 * e - 2, e - 1, -1):
            row = rows[j]
            if any(row):
                shift = j - e
                for t, et in self._eis_terms:
                    target = rows[shift + t]
                    for i in range(f):
                        target[i] -= et * row[i]
        flat = [c for j in range(e) for c in rows[j]]
        return self._reduce(flat, R)

    # ---- element construction ----

    def _make(self, exp: int, coeffs: Sequence[int], prec: int) -> "TowerElement":
        e, p = self.e, self.p
        if prec >= INF // 2:
            prec = INF
        R = prec - e * exp
        if R <= 0:
            return TowerElement(self, 0, (0,) * self.degree, prec)
        if R > 3 * e * self.N:
            # exact inputs: only the capped relative window matters
            R = 3 * e * self.N
        red = self._reduce(coeffs, R)
        if not any(red):
            return TowerElement(self, 0, (0,) * self.degree, prec)
        k = min(vp(c, p) for c in red if c)
        if k:
            pk = p**k
            red = [c // pk for c in red]
            exp += k
            R -= e * k
        if R > e * self.N or prec == INF:
            R = min(R, e * self.N)
            prec = e * exp + R
            red = self._reduce(red, R)
        return TowerElement(self, exp, tuple(red), prec)

    def zero(self, prec: int = INF) -> "TowerElement":
        return TowerElement(self, 0, (0,) * self.degree, prec)

    def one(self) -> "TowerElement":
        return self.from_int(1)

    def from_int(self, n: int) -> "TowerElement":
        if n == 0:
            return self.zero()
        v = vp(n, self.p)
        coeffs = [0] * self.degree
        coeffs[0] = n // self.p**v
        return self._make(v, coeffs, INF)

    def from_fraction(self, x: Fraction | int) -> "TowerElement":
        x = Fraction(x)
        if x.denominator == 1:
            return self.from_int(x.numerator)
        return self.from_scalar(PadicScalar.from_fraction(self.p, x, self.N))

    def from_scalar(self, s: PadicScalar) -> "TowerElement":
        if s.p != self.p:
            raise ValueError("prime mismatch")
        prec = INF if s.prec >= INF else self.e * s.prec
        if s.unit == 0:
            return self.zero(prec)
        coeffs = [0] * self.degree
        coeffs[0] = s.unit
        return self._make(s.exp, coeffs, prec)

    def from_coefficients(self, coeffs: Sequence[int], exp: int = 0, prec: int | None = None) -> "TowerElement":
        """Element p^exp * sum coeffs[j*f+i] alpha^i pi^j, known to relative precision N by default."""
        coeffs = list(coeffs) + [0] * (self.degree - len(coeffs))
        if prec is None:
            prec = self.e * (exp + self.N)
        return self._make(exp, coeffs, prec)

    def from_residue(self, r: Elt) -> "TowerElement":
        """The lift of a residue element with coefficients in [0, p)."""
        return self.from_coefficients(list(r))

    def coerce(self, x: Coercible) -> "TowerElement":
        if isinstance(x, TowerElement):
            if x.ring is self or x.ring.same_as(self):
                return x
            raise ValueError(f"cannot mix elements of {x.ring} and {self}")
        if isinstance(x, PadicScalar):
            return self.from_scalar(x)
        if isinstance(x, (int, Fraction)):
            return self.from_fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def alpha(self) -> "TowerElement":
        if self.f == 1:
            # degree-one modulus x + c has root -c
            return self.from_int(-self.modulus[0])
        return self.from_coefficients([0, 1])

    def pi(self) -> "TowerElement":
        """The uniformizer (p itself at level 0, 1 - zeta_{p^level} otherwise)."""
        if self.level == 0:
            return self.from_int(self.p)
        coeffs = [0] * self.degree
        coeffs[self.f] = 1
        return self._make(0, coeffs, self.e * self.N)

    def zeta_pk(self, k: int | None = None) -> "TowerElement":
        """The chosen primitive p^k-th root of unity, compatible under p-th powers."""
        k = self.level if k is None else k
        if k > self.level or k < 0:
            raise RingTooSmall(f"ring of level {self.level} has no primitive {self.p}^{k}-th root of unity")
        if k == 0:
            return self.one()
        z = self.one() - self.pi()
        return z ** (self.p ** (self.level - k))

    def zeta_p(self) -> "TowerElement":
        return self.zeta_pk(1)

    def random_element(self, rng: random.Random, exp: int = 0) -> "TowerElement":
        mods = self._moduli(self.e * self.N)
        return self._make(exp, [rng.randrange(m) for m in mods], self.e * (exp + self.N))

    def random_unit(self, rng: random.Random) -> "TowerElement":
        while True:
            x = self.random_element(rng)
            if x.is_unit():
                return x

    def random_unramified_unit(self, rng: random.Random) -> "TowerElement":
        """A unit with zero coefficients on every pi^j, j > 0."""
        while True:
            c = [rng.randrange(self.p**self.N) for _ in range(self.f)]
            if any(x % self.p for x in c):
                return self.from_coefficients(c)

    def embed(self, x: "TowerElement") -> "TowerElement":
        """Image of an element of the unramified layer (or of a ring with the same layer)."""
        if x.ring.same_as(self):
            return x
        if x.ring.f != self.f or x.ring.modulus != self.modulus:
            raise ValueError("embedding needs the same unramified layer")
        if x.ring.level != 0:
            raise ValueError("only unramified elements can be embedded")
        prec = INF if x.prec >= INF else x.prec * self.e
        coeffs = list(x.coeffs) + [0] * (self.degree - self.f)
        return self._make(x.exp, coeffs, prec)

    # ---- Frobenius ----

    def _frobenius_matrix(self, k: int) -> tuple[tuple[int, ...], ...]:
        k %= self.f
        mat = self._frob_cache.get(k)
        if mat is not None:
            return mat
        f, p, mod = self.f, self.p, self.p**self.N
        if k == 0:
            mat = tuple(tuple(int(i == j) for j in range(f)) for i in range(f))
        elif k == 1:
            mat = self._compute_frobenius_matrix()
        else:
            one = self._frobenius_matrix(1)
            prev = self._frobenius_matrix(k - 1)
            mat = tuple(
                tuple(sum(one[r][t] * prev[t][c] for t in range(f)) % mod for c in range(f)) for r in range(f)
            )
        self._frob_cache[k] = mat
        return mat

    def _compute_frobenius_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Rows indexed by output coordinate, columns by the input power alpha^c."""
        base = self.base
        if base is not self:
            return base._frobenius_matrix(1)
        f, p, mod = self.f, self.p, self.p**self.N
        if f == 1:
            return ((1,),)
        alpha = self.alpha()
        g = [self.from_int(c) for c in self.modulus]

        def g_eval(x, coeffs):
            acc = self.zero()
            for c in reversed(coeffs):
                acc = acc * x + c
            return acc

        dg = [g[i] * i for i in range(1, len(g))]
        beta = alpha**p
        for _ in range(self.N.bit_length() + 2):
            beta = beta - g_eval(beta, g) / g_eval(beta, dg)
        if not g_eval(beta, g).is_zero():
            raise PrecisionExhausted("Hensel lift of the Frobenius image did not converge")
        cols = []
        power = self.one()
        for _ in range(f):
            cols.append([c * p**power.exp % mod for c in power.coeffs] if not power.is_zero() else [0] * f)
            power = power * beta
        return tuple(tuple(cols[c][r] for c in range(f)) for r in range(f))

    def frobenius(self, x: "TowerElement", k: int = 1) -> "TowerElement":
        if k % self.f == 0 or x.is_zero():
            return x
        mat = self._frobenius_matrix(k)
        f = self.f
        out = []
        for j in range(self.e):
            col = x.coeffs[j * f : (j + 1) * f]
            if any(col):
                out.extend(sum(mat[r][c] * col[c] for c in range(f)) for r in range(f))
            else:
                out.extend([0] * f)
        return self._make(x.exp, out, x.prec)

    # ---- Teichmueller lifts and roots of unity ----

    def teichmuller(self, r: Elt) -> "TowerElement":
        r = tuple(r)
        if not any(r):
            return self.zero()
        cached = self._teich_cache.get(r)
        if cached is not None:
            return cached
        if self.base is not self:
            value = self.embed(self.base.teichmuller(r))
        else:
            q = self.residue.q
            x = self.from_residue(r)
            # Newton on h(x) = x^q - x, whose derivative is a unit
            for _ in range(self.N.bit_length() + 3):
                xq = x**q
                delta = (xq - x) / (xq / x * q - 1)
                if delta.is_zero():
                    break
                x = x - delta
            value = x
        self._teich_cache[r] = value
        return value

    def root_of_unity(self, n: int) -> "TowerElement":
        """A fixed primitive n-th root of unity, for n prime to p dividing q - 1."""
        if n == 1:
            return self.one()
        q = self.residue.q
        if n % self.p == 0 or (q - 1) % n:
            raise RingTooSmall(f"F_{q} has no primitive {n}-th root of unity")
        gen = self.residue.primitive_element()
        return self.teichmuller(self.residue.pow(gen, (q - 1) // n))


class TowerElement:
    __slots__ = ("ring", "exp", "coeffs", "prec")

    def __init__(self, ring: TowerRing, exp: int, coeffs: tuple[int, ...], prec: int):
        self.ring = ring
        self.exp = exp
        self.coeffs = coeffs
        self.prec = prec

    # ---- predicates ----

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _mantissa_pi_valuation(self) -> int:
        f, p = self.ring.f, self.ring.p
        for j in range(self.ring.e):
            if any(c % p for c in self.coeffs[j * f : (j + 1) * f]):
                return j
        raise AssertionError("mantissa not normalized")

    def pi_valuation(self) -> int:
        """Valuation in units of the uniformizer."""
        if self.is_zero():
            raise PrecisionExhausted(f"element is zero modulo pi^{self.prec}")
        return self.ring.e * self.exp + self._mantissa_pi_valuation()

    def valuation(self) -> Fraction:
        """Normalized valuation with v(p) = 1."""
        return Fraction(self.pi_valuation(), self.ring.e)

    def _vbound(self) -> int:
        return self.prec if self.is_zero() else self.pi_valuation()

    def is_unit(self) -> bool:
        return not self.is_zero() and self.pi_valuation() == 0

    def is_integral(self) -> bool:
        """True when the valuation is nonnegative; raises when the element is zero at a negative precision."""
        if self.is_zero():
            if self.prec < 0:
                raise PrecisionExhausted("element is zero only modulo a negative power of pi")
            return True
        return self.pi_valuation() >= 0

    def residue(self) -> Elt:
        res = self.ring.residue
        if self.is_zero() or self.pi_valuation() > 0:
            if self.is_zero() and self.prec < 1:
                raise PrecisionExhausted("residue undetermined at this precision")
            return res.zero
        if self.exp < 0:
            raise ValueError("residue of a non-integral element")
        return tuple(c % self.ring.p for c in self.coeffs[: self.ring.f])

    def relative_precision(self) -> int:
        return self.prec - self._vbound()

    # ---- arithmetic ----

    def _co(self, other: Coercible) -> "TowerElement":
        return self.ring.coerce(other)

    def __neg__(self) -> "TowerElement":
        return self.ring._make(self.exp, [-c for c in self.coeffs], self.prec)

    def __add__(self, other: Coercible) -> "TowerElement":
        try:
            other = self._co(other)
        except TypeError:
            return NotImplemented
        ring = self.ring
        prec = min(self.prec, other.prec)
        if other.is_zero():
            return ring._make(self.exp, self.coeffs, prec)
        if self.is_zero():
            return ring._make(other.exp, other.coeffs, prec)
        e = min(self.exp, other.exp)
        p = ring.p
        sa = p ** (self.exp - e)
        sb = p ** (other.exp - e)
        if prec - ring.e * e <= 0:
            return ring.zero(prec)
        mods = ring._moduli(prec - ring.e * e)
        coeffs = [(x * sa + y * sb) % m for x, y, m in zip(self.coeffs, other.coeffs, mods)]
        return ring._make(e, coeffs, prec)

    __radd__ = __add__

    def __sub__(self, other: Coercible) -> "TowerElement":
        try:
            other = self._co(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Coercible) -> "TowerElement":
        return (-self) + other

    def __mul__(self, other: Coercible) -> "TowerElement":
        try:
            other = self._co(other)
        except TypeError:
            return NotImplemented
        ring = self.ring
        prec = min(self.prec + other._vbound(), other.prec + self._vbound())
        if self.is_zero() or other.is_zero():
            return ring.zero(prec)
        exp = self.exp + other.exp
        R = prec - ring.e * exp
        if R <= 0:
            return ring.zero(prec)
        return ring._make(exp, ring._mul_mant(self.coeffs, other.coeffs, R), prec)

    __rmul__ = __mul__

    def _inverse_unit_mantissa(self, R: int) -> list[int]:
        ring = self.ring
        res = ring.residue
        f = ring.f
        c0 = tuple(c % ring.p for c in self.coeffs[:f])
        y = list(res.inv(c0)) + [0] * (ring.degree - f)
        r = 1
        while r < R:
            r = min(2 * r, R)
            m = ring._reduce(self.coeffs, r)
            my = ring._mul_mant(m, ring._reduce(y, r), r)
            t = [-c for c in my]
            t[0] += 2
            y = ring._mul_mant(ring._reduce(y, r), ring._reduce(t, r), r)
        return ring._reduce(y, R)

    def inverse(self) -> "TowerElement":
        if self.is_zero():
            raise PrecisionExhausted(f"cannot invert an element that is zero modulo pi^{self.prec}")
        ring = self.ring
        e = ring.e
        R = self.prec - e * self.exp
        s = self._mantissa_pi_valuation()
        if s == 0:
            return ring._make(-self.exp, self._inverse_unit_mantissa(R), R - e * self.exp)
        # mantissa m has pi-valuation s: w = m * pi^(e-s) / p is a unit
        mant = ring._make(0, self.coeffs, R)
        shift = ring.pi() ** (e - s)
        w = mant * shift
        w = ring._make(w.exp - 1, w.coeffs, w.prec - e)
        winv = w.inverse()
        out = winv * shift
        return ring._make(out.exp - self.exp - 1, out.coeffs, out.prec - e * (self.exp + 1))

    def __truediv__(self, other: Coercible) -> "TowerElement":
        try:
            other = self._co(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Coercible) -> "TowerElement":
        return self._co(other) * self.inverse()

    def __pow__(self, n: int) -> "TowerElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self, k: int = 1) -> "TowerElement":
        return self.ring.frobenius(self, k)

    def scale_by_p(self, k: int) -> "TowerElement":
        """Multiply by p^k exactly."""
        if self.is_zero():
            return self.ring.zero(self.prec + self.ring.e * k if self.prec < INF else INF)
        return TowerElement(self.ring, self.exp + k, self.coeffs, self.prec + self.ring.e * k)

    # ---- comparison ----

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (TowerElement, int, Fraction, PadicScalar)):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def agrees_with(self, other: Coercible, min_prec: int | None = None) -> bool:
        """Equality at the joint precision, which must reach ``min_prec`` (in pi-units)."""
        diff = self - other
        if not diff.is_zero():
            return False
        return min_prec is None or diff.prec >= min_prec

    def congruent(self, other: Coercible, modulus_valuation: Fraction | int) -> bool:
        """Whether v(self - other) >= modulus_valuation; raises if precision cannot decide."""
        diff = self - other
        target = Fraction(modulus_valuation) * self.ring.e
        if diff.is_zero():
            if diff.prec < target:
                raise PrecisionExhausted("congruence undecidable at this precision")
            return True
        return diff.pi_valuation() >= target

    def unramified_part(self) -> list[int]:
        """Integer coordinates on alpha^i of an integral element (slot pi^0 only)."""
        p = self.ring.p
        return [c * p**self.exp for c in self.coeffs[: self.ring.f]]

    def __repr__(self) -> str:
        if self.is_zero():
            return "0" if self.prec >= INF else f"O(pi^{self.prec})"
        terms = []
        f = self.ring.f
        for idx, c in enumerate(self.coeffs):
            if c:
                j, i = divmod(idx, f)
                mono = "".join(
                    part for part in (f"*a^{i}" if i else "", f"*pi^{j}" if j else "")
                )
                terms.append(f"{c}{mono}")
        body = " + ".join(terms)
        scale = f"{self.ring.p}^{self.exp}*" if self.exp else ""
        return f"{scale}({body}) + O(pi^{self.prec})"

    def short(self) -> str:
        """Compact textual form for reports."""
        if self.is_zero():
            return f"O(pi^{self.prec})"
        return f"v={self.valuation()} " + repr(self)


@lru_cache(maxsize=64)
def make_tower(p: int, f: int, with_zeta_p: bool | int = False, N: int = 20) -> TowerRing:
    """Cached constructor; ``with_zeta_p`` may also be the cyclotomic level (0, 1 or 2)."""
    level = int(with_zeta_p)
    return TowerRing(p, f, level, N)
