"""Gauss sums of multiplicative characters of Q_p^x with conductor at most p^2."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..errors import InvalidParameters, LevelUnsupported, RingTooSmall
from ..tower.ring import TowerElement, TowerRing


@lru_cache(maxsize=None)
def primitive_root_mod_p2(p: int) -> int:
    """Smallest integer generating (Z/p^2)^x; it generates (Z/p^k)^x for every k."""
    phi = p * (p - 1)
    primes = [q for q in range(2, phi + 1) if phi % q == 0 and all(q % r for r in range(2, q))]
    for g in range(2, p * p):
        if g % p and all(pow(g, phi // q, p * p) != 1 for q in primes):
            return g
    raise AssertionError("no primitive root found")


@lru_cache(maxsize=None)
def _index_table(p: int, k: int) -> dict[int, int]:
    """Discrete logarithms to the base primitive_root_mod_p2 on (Z/p^k)^x."""
    mod = p**k
    g = primitive_root_mod_p2(p) % mod if k else 1
    table, x = {}, 1
    order = (p - 1) * p ** (k - 1) if k else 1
    for i in range(order):
        table[x % mod if mod > 1 else 0] = i
        x = x * g % mod if mod > 1 else 0
    return table


@dataclass(frozen=True)
class AdditiveCharLevel:
    """The standard additive character: psi(x) = 1 on Z_p and psi(p^-n) = zeta_{p^n}."""

    ring: TowerRing

    def value(self, numerator: int, level: int) -> TowerElement:
        """psi(numerator / p^level)."""
        if level > self.ring.level:
            raise RingTooSmall(f"additive character at level {level} needs zeta_{self.ring.p}^{level}")
        if level <= 0:
            return self.ring.one()
        z = _zeta_pk_cached(self.ring, level)
        return z ** (numerator % self.ring.p**level)


def _zeta_pk_cached(ring: TowerRing, level: int) -> TowerElement:
    key = ("zeta_pk", level)
    cache = ring.__dict__.setdefault("_gauss_cache", {})
    if key not in cache:
        cache[key] = ring.zeta_pk(level)
    return cache[key]


class LocalMultChar:
    """Character of Q_p^x = p^Z x Z_p^x trivial on 1 + p^level Z_p.

    On units it sends the primitive root g (mod p^2) to zeta^exponent, where zeta is the
    fixed primitive root of unity of order phi(p^level) (a product of a Teichmueller
    (p-1)-th root of unity and zeta_{p^(level-1)}).  ``unramified_value`` is the image
    of p.
    """

    def __init__(self, ring: TowerRing, level: int, exponent: int, unramified_value: TowerElement | int = 1):
        if level not in (0, 1, 2):
            raise LevelUnsupported(f"characters of level {level} are not supported (max 2)")
        if level > ring.level and level == 2:
            raise RingTooSmall("level-2 characters need a ring containing zeta_{p^2}")
        self.ring = ring
        self.p = ring.p
        self.level = level
        self.order_of_units = (self.p - 1) * self.p ** (level - 1) if level else 1
        self.exponent = exponent % self.order_of_units
        self.t = ring.coerce(unramified_value)
        if not self.t.is_unit():
            raise InvalidParameters("unramified value must be a unit")
        self._root = self._unit_root()

    def _unit_root(self) -> TowerElement:
        ring, p = self.ring, self.p
        if self.level == 0:
            return ring.one()
        tame = ring.root_of_unity(p - 1)
        if self.level == 1:
            return tame
        return tame * ring.zeta_pk(1)

    def __repr__(self) -> str:
        return f"LocalMultChar(p={self.p}, level={self.level}, exponent={self.exponent})"

    def conductor(self) -> int:
        """Conductor exponent: smallest k with the character trivial on 1 + p^k Z_p."""
        if self.exponent == 0:
            return 0
        if self.level == 2 and self.exponent % self.p == 0:
            return 1
        return self.level

    def is_ramified(self) -> bool:
        return self.exponent != 0

    def unit_value(self, x: int) -> TowerElement:
        """Value on an integer prime to p."""
        if x % self.p == 0:
            raise InvalidParameters("unit_value needs an integer prime to p")
        if self.level == 0:
            return self.ring.one()
        idx = _index_table(self.p, self.level)[x % self.p**self.level]
        return _root_power(self, idx * self.exponent % self.order_of_units)

    def value(self, x: Fraction | int) -> TowerElement:
        """eta(x) for nonzero rational x."""
        x = Fraction(x)
        if x == 0:
            raise InvalidParameters("characters are defined on nonzero elements")
        n = 0
        num, den = x.numerator, x.denominator
        while num % self.p == 0:
            num //= self.p
            n += 1
        while den % self.p == 0:
            den //= self.p
            n -= 1
        unit = num * pow(den, -1, self.p ** max(self.level, 1)) if self.level else 1
        return self.t**n * self.unit_value(unit if self.level else 1)

    def inverse(self) -> "LocalMultChar":
        return LocalMultChar(self.ring, self.level, -self.exponent, self.t.inverse())

    def power(self, s: int) -> "LocalMultChar":
        return LocalMultChar(self.ring, self.level, self.exponent * s, self.t**s)

    def is_quadratic(self) -> bool:
        return self.level == 1 and self.exponent == (self.p - 1) // 2


def _root_power(chi: LocalMultChar, k: int) -> TowerElement:
    cache = chi.__dict__.setdefault("_pow_cache", {})
    if k not in cache:
        cache[k] = chi._root**k
    return cache[k]


def quadratic_character(ring: TowerRing) -> LocalMultChar:
    return LocalMultChar(ring, 1, (ring.p - 1) // 2)


def gauss_sum(eta: LocalMultChar, psi: AdditiveCharLevel | None = None) -> TowerElement:
    """sum over x in (Z/p^k)^x of eta(x / p^k) psi(x / p^k), k the conductor exponent."""
    psi = psi or AdditiveCharLevel(eta.ring)
    k = eta.conductor()
    if k == 0:
        return eta.ring.one()
    p = eta.p
    ring = eta.ring
    acc = ring.zero()
    for x in range(1, p**k):
        if x % p:
            acc = acc + eta.unit_value(x) * psi.value(x, k)
    return acc * eta.t ** (-k)


def gauss_sum_cosets(eta: LocalMultChar, psi: AdditiveCharLevel | None = None) -> TowerElement:
    """Haar-measure form: mu(U^(k)) / mu(p^k Z_p) times the sum over U / U^(k).

    Coset representatives are enumerated as g^i (1 + p)^j rather than as integers,
    so this is an independent route to the same value.
    """
    psi = psi or AdditiveCharLevel(eta.ring)
    k = eta.conductor()
    ring = eta.ring
    if k == 0:
        return ring.one()
    p = eta.p
    mod = p**k
    g = primitive_root_mod_p2(p)
    # the order of g mod p is p - 1 only after projecting away the (1 + p) part
    tame = pow(g, p ** (k - 1), mod)
    reps = []
    for i in range(p - 1):
        for j in range(p ** (k - 1)):
            reps.append(pow(tame, i, mod) * pow(1 + p, j, mod) % mod)
    assert len(set(reps)) == (p - 1) * p ** (k - 1)
    ratio = haar_unit_group(p, k) / haar_ideal(p, k)
    acc = ring.zero()
    for x in reps:
        acc = acc + eta.value(Fraction(x, mod)) * psi.value(x, k)
    return acc * ring.from_fraction(ratio)


def haar_unit_group(p: int, k: int) -> Fraction:
    """mu(U^(k)) with mu(Z_p) = 1."""
    if k == 0:
        return Fraction(p - 1, p)
    return Fraction(1, p**k)


def haar_ideal(p: int, k: int) -> Fraction:
    """mu(p^k Z_p)."""
    return Fraction(1, p**k)


def epsilon_abelian(eta: LocalMultChar, psi: AdditiveCharLevel | None = None, check: bool = True) -> TowerElement:
    """Abelian epsilon factor over Q_p (trivial different), cross-checked against the coset form."""
    if not eta.is_ramified():
        return eta.ring.one()
    direct = gauss_sum(eta, psi)
    if check:
        other = gauss_sum_cosets(eta, psi)
        if not direct.agrees_with(other):
            raise AssertionError("direct and coset Gauss sums disagree")
    return direct


def cyclotomic_automorphism(x: TowerElement, s: int) -> TowerElement:
    """Apply zeta_{p^k} -> zeta_{p^k}^s (s prime to p), fixing the unramified layer."""
    ring = x.ring
    if s % ring.p == 0:
        raise InvalidParameters("s must be prime to p")
    if ring.level == 0 or x.is_zero():
        return x
    f, e = ring.f, ring.e
    image_pi = 1 - ring.zeta_pk() ** (s % ring.p**ring.level)
    acc = ring.zero(x.prec)
    power = ring.one()
    for j in range(e):
        slot = list(x.coeffs[j * f : (j + 1) * f]) + [0] * (ring.degree - f)
        if any(slot):
            # slot j was known modulo p^ceil((R - j)/e); keep that precision
            coeff = ring._make(x.exp, slot, x.prec - j)
            acc = acc + coeff * power
        power = power * image_pi
    return acc


def conductor_exponent(chi: tuple[int, int]) -> int:
    """Conductor exponent of chi*phi for the weakly and wildly ramified degree-p layer."""
    i, _ = chi
    return 0 if i == 0 else 2


def artin_conductor_from_filtration(p: int, i: int, jumps: tuple[int, ...] = (0, 1)) -> int:
    """sum over ramification groups G_k of |G_k|/|G_0| (chi(1) - dim V^{G_k}).

    ``jumps`` lists the indices k where G_k = <a> (order p); G_k is trivial otherwise.
    A one-dimensional character chi_i of <a> has no fixed vectors exactly when i != 0.
    """
    total = Fraction(0)
    g0 = p if 0 in jumps else 1
    for k in jumps:
        size = p
        fixed = 1 if i % p == 0 else 0
        total += Fraction(size, g0) * (1 - fixed)
    return int(total)
