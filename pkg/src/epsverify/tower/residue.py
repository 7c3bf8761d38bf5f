"""Finite fields F_{p^f} as F_p[x]/(g), with elements stored as coefficient tuples."""

from __future__ import annotations

import math
import random
from functools import lru_cache
from typing import Iterator, Sequence

Poly = list[int]


def _trim(a: Poly) -> Poly:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def poly_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[Poly, Poly]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv_lead % p
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return _trim(q), a


def poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    return poly_divmod(a, b, p)[1]


def poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def poly_powmod(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> Poly:
    result: Poly = [1]
    b = poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, b, p), mod, p)
        e >>= 1
        if e:
            b = poly_mod(poly_mul(b, b, p), mod, p)
    return result


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(g: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    g = _trim([c % p for c in g])
    f = len(g) - 1
    if f < 1:
        return False
    if f == 1:
        return True
    x = [0, 1]

    def frob_power(k: int) -> Poly:
        return poly_powmod(x, p**k, g, p)

    diff = _trim([(c - d) % p for c, d in _zip_pad(frob_power(f), x)])
    if diff:
        return False
    for r in prime_factors(f):
        h = _trim([(c - d) % p for c, d in _zip_pad(frob_power(f // r), x)])
        if len(poly_gcd(g, h, p)) != 1:
            return False
    return True


def _zip_pad(a: Sequence[int], b: Sequence[int]):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


@lru_cache(maxsize=None)
def first_irreducible(p: int, f: int) -> tuple[int, ...]:
    """First monic irreducible of degree f, enumerating low coefficients base p.

    The enumeration puts c_0 in the least significant digit, so sparse
    polynomials like x^f + x + c tend to come first.
    """
    if f == 1:
        return (0, 1)
    for idx in range(p**f):
        coeffs = []
        n = idx
        for _ in range(f):
            coeffs.append(n % p)
            n //= p
        if coeffs[0] == 0:
            continue
        g = coeffs + [1]
        if is_irreducible(g, p):
            return tuple(g)
    raise RuntimeError(f"no irreducible polynomial of degree {f} over F_{p}")


Elt = tuple[int, ...]


class ResidueField:
    """F_q with q = p^f, elements are length-f coefficient tuples in the basis 1, x, ..., x^{f-1}."""

    def __init__(self, p: int, f: int, modulus: Sequence[int] | None = None):
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = tuple(modulus) if modulus is not None else first_irreducible(p, f)
        self._primitive: Elt | None = None
        self._bsgs: tuple[dict, Elt, int] | None = None

    def __repr__(self) -> str:
        return f"ResidueField(p={self.p}, f={self.f})"

    def _pad(self, a: Sequence[int]) -> Elt:
        a = list(a)[: self.f]
        return tuple([c % self.p for c in a] + [0] * (self.f - len(a)))

    def element(self, coeffs: Sequence[int]) -> Elt:
        return self._pad(poly_mod(list(coeffs), self.modulus, self.p))

    @property
    def zero(self) -> Elt:
        return (0,) * self.f

    @property
    def one(self) -> Elt:
        return self.from_int(1)

    def from_int(self, n: int) -> Elt:
        return self._pad([n % self.p])

    def gen(self) -> Elt:
        """The class of x (the ring generator alpha reduced mod p)."""
        return self.element([0, 1])

    def is_zero(self, a: Elt) -> bool:
        return not any(a)

    def add(self, a: Elt, b: Elt) -> Elt:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a: Elt, b: Elt) -> Elt:
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a: Elt) -> Elt:
        return tuple(-x % self.p for x in a)

    def scale(self, a: Elt, c: int) -> Elt:
        return tuple(x * c % self.p for x in a)

    def mul(self, a: Elt, b: Elt) -> Elt:
        return self._pad(poly_mod(poly_mul(a, b, self.p), self.modulus, self.p))

    def pow(self, a: Elt, e: int) -> Elt:
        if e < 0:
            a = self.inv(a)
            e = -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def inv(self, a: Elt) -> Elt:
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in residue field")
        # extended Euclid on (a, g)
        p = self.p
        r0, r1 = list(self.modulus), _trim(list(a))
        s0, s1 = [], [1]
        while r1:
            q, r = poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            qs = poly_mul(q, s1, p)
            s0, s1 = s1, _trim([(x - y) % p for x, y in _zip_pad(s0, qs)])
        inv_lead = pow(r0[0], -1, p)
        return self._pad(poly_mod([c * inv_lead for c in s0], self.modulus, p))

    def frobenius(self, a: Elt, k: int = 1) -> Elt:
        return self.pow(a, self.p ** (k % self.f) if self.f else 1)

    def trace(self, a: Elt) -> int:
        acc = self.zero
        x = a
        for _ in range(self.f):
            acc = self.add(acc, x)
            x = self.frobenius(x)
        return acc[0]

    def norm(self, a: Elt) -> int:
        return self.pow(a, (self.q - 1) // (self.p - 1))[0]

    def random(self, rng: random.Random, nonzero: bool = False) -> Elt:
        while True:
            a = tuple(rng.randrange(self.p) for _ in range(self.f))
            if not nonzero or any(a):
                return a

    def elements(self) -> Iterator[Elt]:
        for idx in range(self.q):
            coeffs = []
            for _ in range(self.f):
                coeffs.append(idx % self.p)
                idx //= self.p
            yield tuple(coeffs)

    def order(self, a: Elt) -> int:
        n = self.q - 1
        for r in prime_factors(n):
            while n % r == 0 and self.pow(a, n // r) == self.one:
                n //= r
        return n

    def primitive_element(self) -> Elt:
        if self._primitive is None:
            n = self.q - 1
            rs = prime_factors(n)
            for cand in self.elements():
                if not any(cand):
                    continue
                if all(self.pow(cand, n // r) != self.one for r in rs):
                    self._primitive = cand
                    break
        return self._primitive

    def dlog(self, a: Elt) -> int:
        """Discrete log to the base primitive_element(), by baby-step giant-step."""
        if self._bsgs is None:
            g = self.primitive_element()
            m = math.isqrt(self.q - 1) + 1
            table = {}
            x = self.one
            for j in range(m):
                table.setdefault(x, j)
                x = self.mul(x, g)
            self._bsgs = (table, self.inv(self.pow(g, m)), m)
        table, giant, m = self._bsgs
        y = a
        for i in range(m + 1):
            if y in table:
                return (i * m + table[y]) % (self.q - 1)
            y = self.mul(y, giant)
        raise ValueError("discrete log not found (is the argument nonzero?)")

    def root(self, c: Elt, k: int) -> Elt | None:
        """Some x with x^k = c, or None when c is not a k-th power."""
        if self.is_zero(c):
            return self.zero
        n = self.q - 1
        k %= n
        g = math.gcd(k, n)
        L = self.dlog(c)
        if L % g:
            return None
        t = (L // g) * pow(k // g, -1, n // g) % (n // g) if n // g > 1 else 0
        return self.pow(self.primitive_element(), t)

    def sqrt(self, c: Elt) -> Elt | None:
        """Square root by Tonelli-Shanks; returns the root with the smaller coefficient tuple."""
        if self.is_zero(c):
            return self.zero
        q = self.q
        if self.pow(c, (q - 1) // 2) != self.one:
            return None
        s, t = 0, q - 1
        while t % 2 == 0:
            s, t = s + 1, t // 2
        z = None
        for cand in self.elements():
            if any(cand) and self.pow(cand, (q - 1) // 2) != self.one:
                z = cand
                break
        m, cc = s, self.pow(z, t)
        tt, r = self.pow(c, t), self.pow(c, (t + 1) // 2)
        while tt != self.one:
            i, x = 0, tt
            while x != self.one:
                x = self.mul(x, x)
                i += 1
            b = self.pow(cc, 1 << (m - i - 1))
            m, cc = i, self.mul(b, b)
            tt, r = self.mul(tt, cc), self.mul(r, b)
        other = self.neg(r)
        return min(r, other)


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        for i in range(len(m)):
            if i != rank and m[i][col] % p:
                c = m[i][col] * inv % p
                m[i] = [(x - c * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank
