"""Finite-level model of the induced module of a twisted unramified extension L/K.

An element is a d-tuple of slots ``(valuation, principal unit)``, the p-adic
completion of the multiplicative group of the unramified closure being
p^(Z_p) x U^(1).  At level n valuations live in Z/p^n and principal units are
taken modulo p^n-th powers, i.e. compared modulo p^(n+1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InvalidParameters, ResidueEquationUnsolvable, TwistTrivialOnN
from .tower.equations import frobenius_solve, principal_part
from .tower.residue import rank_mod_p
from .tower.ring import TowerElement, TowerRing
from .tower.scalar import vp

Slot = tuple[int, TowerElement]


@dataclass(frozen=True)
class InducedTuple:
    slots: tuple[Slot, ...]
    level: int

    @property
    def valuations(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.slots)

    @property
    def units(self) -> tuple[TowerElement, ...]:
        return tuple(w for _, w in self.slots)

    def __len__(self) -> int:
        return len(self.slots)


class SerreModel:
    """The induced module for L/K unramified of degree d, with Frobenius of K acting by the twist u."""

    GENERATORS = ("identity", "F", "Finv_b", "b")

    def __init__(self, p: int, d: int, u: int, level: int | None = None, f: int | None = None, N: int = 24):
        if p == 2 or d < 1:
            raise InvalidParameters("need an odd prime and d >= 1")
        if u % p == 0:
            raise InvalidParameters("the twist must be a p-adic unit")
        self.p, self.d, self.N = p, d, N
        self.exp_mod = p ** (N + 4)
        self.u = u % self.exp_mod
        self.u_inv = pow(self.u, -1, self.exp_mod)
        # twist of the Frobenius of L
        self.twist_L = pow(self.u, d, self.exp_mod)
        diff = (self.twist_L - 1) % self.exp_mod
        if diff == 0:
            raise TwistTrivialOnN(f"u^d = 1 to precision {N + 4}")
        self.omega = vp(diff, p)
        self.level = self.omega + 3 if level is None else level
        if self.level <= self.omega:
            raise InvalidParameters("level must exceed omega")
        if self.level + 1 > N:
            raise InvalidParameters("ring precision must exceed level + 1")
        self.f = f if f is not None else self.default_degree()
        self.ring = TowerRing(p, self.f, 0, N)

    # ---- setup ----

    def _operator_rank(self, f: int) -> int:
        ring = TowerRing(self.p, f, 0, 4)
        phi = ring._frobenius_matrix(self.d % f)
        mat = [[(self.twist_L * phi[r][c] - (r == c)) % self.p for c in range(f)] for r in range(f)]
        return rank_mod_p(mat, self.p)

    def default_degree(self, search: int = 12) -> int:
        """Smallest f >= 2 making y -> y^(twisted F_L - 1) bijective on principal units (omega = 0)."""
        if self.omega > 0:
            return 2 * self.d
        for f in range(2, search + 1):
            if self._operator_rank(f) == f:
                return f
        raise InvalidParameters(f"no bijective degree up to {search}")

    def describe(self) -> str:
        return f"SerreModel(p={self.p}, d={self.d}, u={self.u % self.p**4}.., omega={self.omega}, level={self.level}, f={self.f})"

    # ---- constructors ----

    def make(self, slots) -> InducedTuple:
        if len(slots) != self.d:
            raise InvalidParameters(f"expected {self.d} slots")
        mod = self.p**self.level
        out = []
        for v, w in slots:
            w = self.ring.coerce(w)
            if not w.is_unit():
                raise InvalidParameters("unit parts must be units")
            out.append((v % mod, principal_part(w)))
        return InducedTuple(tuple(out), self.level)

    def identity(self) -> InducedTuple:
        return self.make([(0, 1)] * self.d)

    def diagonal(self, valuation: int, unit) -> InducedTuple:
        return self.make([(valuation, unit)] * self.d)

    def random_tuple(self, rng: random.Random, valuations: bool = True) -> InducedTuple:
        slots = []
        for _ in range(self.d):
            v = rng.randrange(self.p**self.level) if valuations else 0
            slots.append((v, self.ring.random_unit(rng)))
        return self.make(slots)

    def random_cocycle(self, rng: random.Random) -> InducedTuple:
        """Random tuple in the kernel of w_map.

        With omega = 0 and the default degree every such tuple is a coboundary;
        otherwise the finite ring misses part of the cokernel, so samples are drawn
        from the image of the differential instead.
        """
        if self.omega == 0 and self._operator_rank(self.f) == self.f:
            c = self.random_tuple(rng)
            return c
        return self.differential(self.random_tuple(rng))

    # ---- group law ----

    def mul(self, x: InducedTuple, y: InducedTuple) -> InducedTuple:
        return self.make([(v1 + v2, w1 * w2) for (v1, w1), (v2, w2) in zip(x.slots, y.slots)])

    def inv(self, x: InducedTuple) -> InducedTuple:
        return self.make([(-v, w.inverse()) for v, w in x.slots])

    def div(self, x: InducedTuple, y: InducedTuple) -> InducedTuple:
        return self.mul(x, self.inv(y))

    def equal(self, x: InducedTuple, y: InducedTuple, level: int | None = None) -> bool:
        level = min(x.level, y.level) if level is None else level
        mod = self.p**level
        for (v1, w1), (v2, w2) in zip(x.slots, y.slots):
            if (v1 - v2) % mod:
                return False
            if not (w1 / w2).congruent(1, level + 1):
                return False
        return True

    # ---- actions ----

    def _twisted(self, slot: Slot, frob: int, exponent: int) -> Slot:
        v, w = slot
        # principal units are compared modulo p^(level+1), so exponents matter modulo p^level
        exponent %= self.p**self.level
        return (v * exponent, w.frobenius(frob % self.f) ** exponent)

    def act(self, gen: str, x: InducedTuple, n: int = 1) -> InducedTuple:
        """Apply a generator (see GENERATORS); b is the restriction of F^-1 to L."""
        if gen == "identity":
            return x
        if gen == "F":
            wrapped = self._twisted(x.slots[-1], self.d, self.twist_L)
            return self.make([wrapped, *x.slots[:-1]])
        if gen == "Finv_b":
            e = pow(self.u_inv, n, self.exp_mod)
            return self.make([self._twisted(s, -n, e) for s in x.slots])
        if gen == "b":
            return self._act_b_direct(x, n)
        raise InvalidParameters(f"unknown generator {gen!r}")

    def _act_b_direct(self, x: InducedTuple, n: int) -> InducedTuple:
        """1 x b^n in closed form: rotate by n, twisting the wrapped slots once more."""
        n %= self.d
        e = pow(self.u_inv, n, self.exp_mod)
        slots = [self._twisted(s, -n, e) for s in x.slots]
        wrapped = [self._twisted(s, self.d, self.twist_L) for s in slots[self.d - n :]]
        return self.make(wrapped + slots[: self.d - n])

    def differential(self, x: InducedTuple) -> InducedTuple:
        """((F - 1) x 1)(x) = [x_d^(twisted F_L) / x_1, x_1 / x_2, ..., x_(d-1) / x_d]."""
        return self.div(self.act("F", x), x)

    def w_map(self, x: InducedTuple) -> int:
        """Sum of valuations modulo p^omega (the zero module when omega = 0)."""
        if self.omega == 0:
            return 0
        return sum(x.valuations) % self.p**self.omega

    def reduce(self, x: InducedTuple, level: int) -> InducedTuple:
        if level > x.level:
            raise InvalidParameters("cannot raise the level")
        mod = self.p**level
        return InducedTuple(tuple((v % mod, w) for v, w in x.slots), level)

    # ---- the constructive exactness step ----

    def solve_twisted_frobenius(self, valuation: int, unit: TowerElement) -> Slot:
        """y with y^(twisted F_L - 1) equal to p^valuation * unit (principal part)."""
        p, level = self.p, self.level
        mod = p**level
        diff = (self.twist_L - 1) % self.exp_mod
        if valuation % p**self.omega:
            raise ResidueEquationUnsolvable("valuation sum is not divisible by p^omega", achieved=0)
        scale = pow(diff // p**self.omega, -1, mod)
        v = (valuation // p**self.omega) * scale % mod
        w, _ = frobenius_solve(unit, self.twist_L, self.d % self.f or self.f, min_precision=level + 1)
        return (v, w)

    def solve_coboundary(self, c: InducedTuple) -> InducedTuple:
        """A preimage of ``c`` under the differential, verified before returning."""
        if self.w_map(c) != 0:
            raise InvalidParameters("c is not in the kernel of w_map")
        total_v = sum(c.valuations)
        total_w = self.ring.one()
        for w in c.units:
            total_w = total_w * w
        y = self.solve_twisted_frobenius(total_v, total_w)
        # x_k = c_(k+1) ... c_d y
        slots = [y]
        acc_v, acc_w = y
        for v, w in reversed(c.slots[1:]):
            acc_v, acc_w = acc_v + v, acc_w * w
            slots.append((acc_v, acc_w))
        x = self.make(list(reversed(slots)))
        if not self.equal(self.differential(x), c):
            raise ResidueEquationUnsolvable("round trip failed at this level", achieved=0)
        return x
