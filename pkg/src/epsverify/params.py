"""Validated parameter tuples (p, m, d, u) and the quantities derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .errors import InvalidParameters, TwistTrivialOnN
from .group_ring import multiplicative_order
from .tower.ring import _is_prime
from .tower.scalar import vp

OMEGA_ZERO = "omega_zero"
OMEGA_POS = "omega_pos"
TWIST_TRIVIAL = "twist_trivial"

# digits kept for the p-adic integer standing in for u
U_DIGITS_EXTRA = 12


@dataclass(frozen=True)
class UnitSpec:
    """A unit of Z_p given either as an integer or as the Teichmueller lift of a residue."""

    value: int
    teichmuller: bool = False

    @classmethod
    def parse(cls, text: Union[str, int, "UnitSpec"]) -> "UnitSpec":
        if isinstance(text, UnitSpec):
            return text
        if isinstance(text, int):
            return cls(text)
        s = str(text).strip().lower()
        if s.startswith("teich:") or s.startswith("t:"):
            return cls(int(s.split(":", 1)[1]), True)
        return cls(int(s))

    def approximant(self, p: int, digits: int) -> int:
        """Integer congruent to u modulo p^digits."""
        mod = p**digits
        if self.value % p == 0:
            raise InvalidParameters(f"u = {self} is not a p-adic unit")
        if not self.teichmuller:
            return self.value % mod
        # r^(p^k) converges to the Teichmueller lift of r
        return pow(self.value, p ** digits, mod)

    def __str__(self) -> str:
        return f"teich:{self.value}" if self.teichmuller else str(self.value)


def default_tower_degree(p: int, d: int) -> int:
    o = multiplicative_order(p, d)
    return o * 2 // math.gcd(o, 2) * 2


@dataclass(frozen=True)
class TowerParams:
    p: int
    m: int
    d: int
    u: UnitSpec
    N: int = 24
    f: int | None = None
    seed: int = 0
    u_int: int = field(init=False)
    m_tilde: int = field(init=False)

    def __post_init__(self):
        p, m, d = self.p, self.m, self.d
        if not _is_prime(p) or p == 2:
            raise InvalidParameters(f"p must be an odd prime, got {p}")
        if m < 1 or d < 1:
            raise InvalidParameters("m and d must be positive")
        if math.gcd(m, d) != 1:
            raise InvalidParameters(f"m and d must be relatively prime (m={m}, d={d})")
        if math.gcd(d, p) != 1:
            raise InvalidParameters(f"d must be prime to p (d={d}, p={p})")
        if self.N < 4:
            raise InvalidParameters("precision N must be at least 4")
        object.__setattr__(self, "u", UnitSpec.parse(self.u))
        object.__setattr__(self, "u_int", self.u.approximant(p, self.N + U_DIGITS_EXTRA))
        object.__setattr__(self, "m_tilde", pow(m, -1, d) if d > 1 else 1)
        if self.f is None:
            object.__setattr__(self, "f", default_tower_degree(p, d))
        elif self.f % multiplicative_order(p, d):
            raise InvalidParameters(f"tower degree f={self.f} must be a multiple of ord_d(p)")

    @property
    def u_mod(self) -> int:
        return self.p ** (self.N + U_DIGITS_EXTRA)

    def twist_value(self) -> int:
        """u^(dm) modulo p^(N + extra)."""
        return pow(self.u_int, self.d * self.m, self.u_mod)

    @property
    def omega(self) -> int:
        diff = (1 - self.twist_value()) % self.u_mod
        if diff == 0:
            raise TwistTrivialOnN(f"u^(dm) = 1 to precision {self.N + U_DIGITS_EXTRA} for {self.describe()}")
        return vp(diff, self.p)

    @property
    def branch(self) -> str:
        try:
            return OMEGA_ZERO if self.omega == 0 else OMEGA_POS
        except TwistTrivialOnN:
            return TWIST_TRIVIAL

    def describe(self) -> str:
        return f"(p={self.p}, m={self.m}, d={self.d}, u={self.u})"

    def as_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "d": self.d, "u": str(self.u), "precision": self.N, "tower_degree": self.f, "seed": self.seed}


def omega(params: TowerParams) -> int:
    return params.omega
