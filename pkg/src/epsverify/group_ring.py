"""Group rings over G = <a> x <b> with |a| = p, |b| = d, and their character transforms."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .errors import InvalidParameters, PrecisionExhausted, RingTooSmall, SingularAtCharacter
from .tower.ring import TowerElement, TowerRing
from .tower.scalar import INF, PadicScalar

Character = tuple[int, int]
Scalar = Union[int, Fraction, PadicScalar, TowerElement]


def multiplicative_order(p: int, d: int) -> int:
    if d == 1:
        return 1
    if math.gcd(p, d) != 1:
        raise InvalidParameters(f"p={p} is not invertible mod d={d}")
    k, x = 1, p % d
    while x != 1:
        x = x * p % d
        k += 1
    return k


class GroupRing:
    """Z_p^nr-type group ring of <a> x <b> over a tower ring containing zeta_p and zeta_d."""

    def __init__(self, p: int, d: int, ring: TowerRing):
        if d < 1:
            raise InvalidParameters("d must be positive")
        if math.gcd(d, p) != 1:
            raise InvalidParameters(f"gcd(d, p) must be 1 (got d={d}, p={p})")
        if ring.p != p:
            raise InvalidParameters("ring prime differs from group order p")
        self.p, self.d, self.ring = p, d, ring
        self._zp: list[TowerElement] | None = None
        self._zd: list[TowerElement] | None = None

    def __repr__(self) -> str:
        return f"GroupRing(p={self.p}, d={self.d}, {self.ring})"

    # roots of unity used by characters

    def _zeta_p_powers(self) -> list[TowerElement]:
        if self._zp is None:
            if self.ring.level < 1:
                raise RingTooSmall("ring lacks zeta_p; ramified characters cannot be evaluated")
            z = self.ring.zeta_p()
            pw = [self.ring.one()]
            for _ in range(self.p - 1):
                pw.append(pw[-1] * z)
            self._zp = pw
        return self._zp

    def _zeta_d_powers(self) -> list[TowerElement]:
        if self._zd is None:
            z = self.ring.root_of_unity(self.d)
            pw = [self.ring.one()]
            for _ in range(self.d - 1):
                pw.append(pw[-1] * z)
            self._zd = pw
        return self._zd

    def zeta_p(self) -> TowerElement:
        return self._zeta_p_powers()[1 % self.p]

    def zeta_d(self) -> TowerElement:
        return self._zeta_d_powers()[1 % self.d]

    def chi_a(self, i: int) -> TowerElement:
        """chi_i(a) = zeta_p^i."""
        i %= self.p
        if i == 0:
            return self.ring.one()
        return self._zeta_p_powers()[i]

    def phi_b(self, j: int) -> TowerElement:
        """phi_j(b) = zeta_d^j."""
        j %= self.d
        if j == 0:
            return self.ring.one()
        return self._zeta_d_powers()[j]

    def characters(self) -> list[Character]:
        return [(i, j) for i in range(self.p) for j in range(self.d)]

    # elements

    def element(self, coeffs: Mapping[tuple[int, int], Scalar] | None = None) -> "GroupRingElement":
        grid = [[None] * self.d for _ in range(self.p)]
        for (k, l), c in (coeffs or {}).items():
            val = self.ring.coerce(c)
            cur = grid[k % self.p][l % self.d]
            grid[k % self.p][l % self.d] = val if cur is None else cur + val
        return GroupRingElement(self, grid)

    def scalar(self, c: Scalar) -> "GroupRingElement":
        return self.element({(0, 0): c})

    def one(self) -> "GroupRingElement":
        return self.scalar(1)

    def zero(self) -> "GroupRingElement":
        return self.element()

    def group_element(self, k: int, l: int = 0) -> "GroupRingElement":
        """a^k b^l."""
        return self.element({(k, l): 1})

    def a(self) -> "GroupRingElement":
        return self.group_element(1, 0)

    def b(self) -> "GroupRingElement":
        return self.group_element(0, 1)

    def trace_a(self) -> "GroupRingElement":
        """T_a = sum of the powers of a."""
        return self.element({(k, 0): 1 for k in range(self.p)})

    def e_a(self) -> "GroupRingElement":
        return self.trace_a().scale(Fraction(1, self.p))

    def e_G(self) -> "GroupRingElement":
        return self.element({(k, l): Fraction(1, self.p * self.d) for k in range(self.p) for l in range(self.d)})

    def sigma4(self) -> "GroupRingElement":
        """The element a^(4 mod p) standing in for the Galois element attached to 4."""
        return self.group_element(4 % self.p, 0)

    def random_element(self, rng: random.Random, integral: bool = True, density: float = 1.0) -> "GroupRingElement":
        coeffs = {}
        for k in range(self.p):
            for l in range(self.d):
                if rng.random() < density:
                    coeffs[(k, l)] = self.ring.random_element(rng)
        return self.element(coeffs)

    def random_padic_element(self, rng: random.Random, digits: int | None = None) -> "GroupRingElement":
        """Random element of Z_p[G] (coefficients in Z_p)."""
        digits = self.ring.N if digits is None else digits
        return self.element(
            {(k, l): rng.randrange(self.p**digits) for k in range(self.p) for l in range(self.d)}
        )

    # transforms

    def center_vector(self, values: Mapping[Character, Scalar] | Callable[[int, int], Scalar]) -> "CenterVector":
        if callable(values):
            comps = {(i, j): self.ring.coerce(values(i, j)) for i, j in self.characters()}
        else:
            comps = {chi: self.ring.coerce(v) for chi, v in values.items()}
        return CenterVector(self, comps)

    def inverse_transform(self, v: "CenterVector") -> "GroupRingElement":
        """c[k][l] = (1/(pd)) sum_{i,j} v_ij zeta_p^(-ik) zeta_d^(-jl)."""
        p, d = self.p, self.d
        ring = self.ring
        # first the b-direction
        partial = [[ring.zero() for _ in range(d)] for _ in range(p)]
        for i in range(p):
            for l in range(d):
                acc = ring.zero()
                for j in range(d):
                    val = v[(i, j)]
                    if not _exact_zero(val):
                        acc = acc + val * self.phi_b(-j * l)
                partial[i][l] = acc
        scale = ring.from_fraction(Fraction(1, p * d))
        grid = [[None] * d for _ in range(p)]
        for k in range(p):
            for l in range(d):
                acc = ring.zero()
                for i in range(p):
                    acc = acc + partial[i][l] * self.chi_a(-i * k)
                grid[k][l] = acc * scale
        return GroupRingElement(self, grid)

    def u_tilde(self) -> "CenterVector":
        """Character values p / (chi(a) - 1)^(p-1) off the trivial chi, and (p-1)! on it."""
        p = self.p
        fact = math.factorial(p - 1)
        values = {}
        for i, j in self.characters():
            if i == 0:
                values[(i, j)] = self.ring.from_int(fact)
            else:
                values[(i, j)] = self.ring.from_int(p) / (self.chi_a(i) - 1) ** (p - 1)
        return CenterVector(self, values)

    def idempotent(self, chars: Iterable[Character]) -> "CenterVector":
        chosen = {(i % self.p, j % self.d) for i, j in chars}
        return self.center_vector(lambda i, j: 1 if (i, j) in chosen else 0)


class GroupRingElement:
    """Coefficients c[k][l] of a^k b^l; ``None`` marks an exact zero coefficient."""

    __slots__ = ("gr", "grid")

    def __init__(self, gr: GroupRing, grid: list[list[TowerElement | None]]):
        self.gr = gr
        self.grid = grid

    def coefficient(self, k: int, l: int = 0) -> TowerElement:
        c = self.grid[k % self.gr.p][l % self.gr.d]
        return c if c is not None else self.gr.ring.zero()

    def support(self) -> Iterator[tuple[int, int, TowerElement]]:
        for k, row in enumerate(self.grid):
            for l, c in enumerate(row):
                if c is not None and not _exact_zero(c):
                    yield k, l, c

    def _co(self, other) -> "GroupRingElement":
        if isinstance(other, GroupRingElement):
            return other
        return self.gr.scalar(other)

    def __add__(self, other) -> "GroupRingElement":
        other = self._co(other)
        grid = [
            [_add_opt(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(self.grid, other.grid)
        ]
        return GroupRingElement(self.gr, grid)

    __radd__ = __add__

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.gr, [[None if c is None else -c for c in row] for row in self.grid])

    def __sub__(self, other) -> "GroupRingElement":
        return self + (-self._co(other))

    def __rsub__(self, other) -> "GroupRingElement":
        return self._co(other) - self

    def __mul__(self, other) -> "GroupRingElement":
        if not isinstance(other, GroupRingElement):
            return self.scale(other)
        p, d = self.gr.p, self.gr.d
        grid: list[list[TowerElement | None]] = [[None] * d for _ in range(p)]
        right = list(other.support())
        for k1, l1, c1 in self.support():
            for k2, l2, c2 in right:
                k, l = (k1 + k2) % p, (l1 + l2) % d
                term = c1 * c2
                grid[k][l] = term if grid[k][l] is None else grid[k][l] + term
        return GroupRingElement(self.gr, grid)

    def __rmul__(self, other) -> "GroupRingElement":
        return self.scale(other)

    def scale(self, c: Scalar) -> "GroupRingElement":
        c = self.gr.ring.coerce(c)
        return GroupRingElement(self.gr, [[None if x is None else x * c for x in row] for row in self.grid])

    def __pow__(self, n: int) -> "GroupRingElement":
        if n < 0:
            raise ValueError("negative powers need the center-vector inverse")
        result = self.gr.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def evaluate(self, chi: Character) -> TowerElement:
        """chi(x) = sum c[k][l] zeta_p^(ik) zeta_d^(jl)."""
        gr = self.gr
        i, j = chi
        acc = gr.ring.zero()
        for k, l, c in self.support():
            if (i * k) % gr.p == 0 and (j * l) % gr.d == 0:
                acc = acc + c
            elif (j * l) % gr.d == 0:
                acc = acc + c * gr.chi_a(i * k)
            elif (i * k) % gr.p == 0:
                acc = acc + c * gr.phi_b(j * l)
            else:
                acc = acc + c * (gr.chi_a(i * k) * gr.phi_b(j * l))
        return acc

    def transform(self) -> "CenterVector":
        return CenterVector(self.gr, {chi: self.evaluate(chi) for chi in self.gr.characters()})

    def equals(self, other: "GroupRingElement") -> bool:
        diff = self - other
        return all(c is None or c.is_zero() for row in diff.grid for c in row)

    def is_integral(self) -> bool:
        return all(c.is_integral() for _, _, c in self.support())

    def __repr__(self) -> str:
        parts = [f"({c!r})*a^{k}b^{l}" for k, l, c in self.support()]
        return " + ".join(parts) if parts else "0"


def _exact_zero(x: TowerElement) -> bool:
    return x.is_zero() and x.prec >= INF


def _add_opt(x: TowerElement | None, y: TowerElement | None) -> TowerElement | None:
    if x is None:
        return y
    if y is None:
        return x
    return x + y


def evaluate_character(x: GroupRingElement, chi: Character) -> TowerElement:
    return x.evaluate(chi)


def inverse_transform(v: "CenterVector") -> GroupRingElement:
    return v.gr.inverse_transform(v)


class CenterVector:
    """One tower-ring value per character (i, j)."""

    __slots__ = ("gr", "values")

    def __init__(self, gr: GroupRing, values: Mapping[Character, TowerElement]):
        self.gr = gr
        self.values = dict(values)
        missing = [chi for chi in gr.characters() if chi not in self.values]
        if missing:
            raise InvalidParameters(f"center vector missing characters {missing[:3]}")

    def __getitem__(self, chi: Character) -> TowerElement:
        return self.values[(chi[0] % self.gr.p, chi[1] % self.gr.d)]

    def items(self):
        return [(chi, self.values[chi]) for chi in self.gr.characters()]

    def _co(self, other) -> "CenterVector":
        if isinstance(other, CenterVector):
            return other
        if isinstance(other, GroupRingElement):
            return other.transform()
        c = self.gr.ring.coerce(other)
        return CenterVector(self.gr, {chi: c for chi in self.gr.characters()})

    def _map2(self, other, op) -> "CenterVector":
        other = self._co(other)
        return CenterVector(self.gr, {chi: op(self.values[chi], other.values[chi]) for chi in self.gr.characters()})

    def __add__(self, other) -> "CenterVector":
        return self._map2(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other) -> "CenterVector":
        return self._map2(other, lambda x, y: x - y)

    def __rsub__(self, other) -> "CenterVector":
        return self._map2(other, lambda x, y: y - x)

    def __mul__(self, other) -> "CenterVector":
        return self._map2(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "CenterVector":
        return self._map2(other, lambda x, y: x / y)

    def __rtruediv__(self, other) -> "CenterVector":
        return self._map2(other, lambda x, y: y / x)

    def __neg__(self) -> "CenterVector":
        return CenterVector(self.gr, {chi: -v for chi, v in self.values.items()})

    def __pow__(self, n: int) -> "CenterVector":
        return CenterVector(self.gr, {chi: v**n for chi, v in self.values.items()})

    def inverse(self) -> "CenterVector":
        return CenterVector(self.gr, {chi: v.inverse() for chi, v in self.values.items()})

    def map(self, fn: Callable[[Character, TowerElement], TowerElement]) -> "CenterVector":
        return CenterVector(self.gr, {chi: fn(chi, v) for chi, v in self.values.items()})

    def regularized(self) -> "CenterVector":
        """Replace zero components by 1."""
        one = self.gr.ring.one()
        return CenterVector(self.gr, {chi: one if v.is_zero() else v for chi, v in self.values.items()})

    def to_group_ring(self) -> GroupRingElement:
        return self.gr.inverse_transform(self)

    def equals(self, other, min_prec: int | None = None) -> bool:
        other = self._co(other)
        return all(self.values[chi].agrees_with(other.values[chi], min_prec) for chi in self.gr.characters())

    def mismatches(self, other) -> list[Character]:
        other = self._co(other)
        return [chi for chi in self.gr.characters() if not (self.values[chi] - other.values[chi]).is_zero()]

    def valuations(self) -> dict[Character, Fraction | None]:
        out = {}
        for chi, v in self.items():
            out[chi] = None if v.is_zero() else v.valuation()
        return out

    def __repr__(self) -> str:
        return "CenterVector(" + ", ".join(f"{chi}: {v!r}" for chi, v in self.items()) + ")"


# ---------------------------------------------------------------------------
# unit test in the maximal order


UNIT = "unit"
NOT_UNIT = "not_unit"
PRECISION_EXHAUSTED = "precision_exhausted"


@dataclass
class UnitVerdict:
    verdict: str
    components_are_units: bool | None = None
    forward_integral: bool | None = None
    inverse_integral: bool | None = None
    reason: str = ""
    bad_characters: list[Character] = field(default_factory=list)

    @property
    def is_unit(self) -> bool:
        return self.verdict == UNIT


def _all_integral(x: GroupRingElement) -> bool:
    return all(c.is_integral() for row in x.grid for c in row if c is not None)


def is_unit_in_integral_groupring(v: CenterVector) -> UnitVerdict:
    """Decide whether a center vector comes from a unit of the integral group ring."""
    exact = [chi for chi, x in v.items() if _exact_zero(x)]
    if exact:
        return UnitVerdict(NOT_UNIT, False, reason="component exactly zero", bad_characters=exact)
    zeros = [chi for chi, x in v.items() if x.is_zero()]
    if zeros:
        return UnitVerdict(PRECISION_EXHAUSTED, reason="component zero at precision", bad_characters=zeros)
    bad = [chi for chi, x in v.items() if x.valuation() != 0]
    units = not bad
    try:
        forward = _all_integral(v.to_group_ring())
        backward = _all_integral(v.inverse().to_group_ring())
    except PrecisionExhausted as exc:
        return UnitVerdict(PRECISION_EXHAUSTED, units, reason=str(exc), bad_characters=bad)
    verdict = UNIT if (units and forward and backward) else NOT_UNIT
    reason = "" if verdict == UNIT else (
        "component of nonzero valuation" if not units else "non-integral group-ring coefficients"
    )
    return UnitVerdict(verdict, units, forward, backward, reason, bad)


# ---------------------------------------------------------------------------
# determinants


def det_scalar(matrix: Sequence[Sequence[TowerElement]]) -> TowerElement:
    """Determinant over the fraction field by elimination with minimal-valuation pivots."""
    n = len(matrix)
    if n == 0:
        raise InvalidParameters("empty matrix")
    ring = matrix[0][0].ring
    a = [list(row) for row in matrix]
    det = ring.one()
    for col in range(n):
        best, best_v = None, None
        for r in range(col, n):
            x = a[r][col]
            if x.is_zero():
                continue
            v = x.pi_valuation()
            if best_v is None or v < best_v:
                best, best_v = r, v
                if v <= 0:
                    break
        if best is None:
            prec = min(a[r][col].prec for r in range(col, n))
            return ring.zero(prec + det._vbound() if not det.is_zero() else prec)
        if best != col:
            a[col], a[best] = a[best], a[col]
            det = -det
        piv = a[col][col]
        det = det * piv
        inv = piv.inverse()
        for r in range(col + 1, n):
            x = a[r][col]
            if _exact_zero(x):
                continue
            factor = x * inv
            row_c = a[col]
            a[r] = [a[r][k] - factor * row_c[k] if k > col else a[r][k] for k in range(n)]
    return det


def evaluate_matrix(matrix: Sequence[Sequence[GroupRingElement]], chi: Character) -> list[list[TowerElement]]:
    return [[entry.evaluate(chi) for entry in row] for row in matrix]


def det_over_groupring(
    matrix: Sequence[Sequence[GroupRingElement | CenterVector]], require_nonsingular: bool = False
) -> CenterVector:
    """Character-wise determinant of a square matrix over the group ring."""
    if not matrix:
        raise InvalidParameters("empty matrix")
    first = matrix[0][0]
    gr = first.gr
    transformed = [[e if isinstance(e, CenterVector) else e.transform() for e in row] for row in matrix]
    values = {}
    for chi in gr.characters():
        d = det_scalar([[e[chi] for e in row] for row in transformed])
        if d.is_zero() and require_nonsingular:
            raise SingularAtCharacter(chi)
        values[chi] = d
    return CenterVector(gr, values)
