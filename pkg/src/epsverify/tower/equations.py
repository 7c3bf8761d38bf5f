"""Frobenius-twisted unit equations in tower rings, plus the p-adic log and exp they rely on."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from ..errors import InvalidParameters, PrecisionExhausted, ResidueEquationUnsolvable
from .linalg import padic_solve
from .ring import TowerElement, TowerRing
from .scalar import PadicScalar

Twist = Union[int, Fraction, PadicScalar, TowerElement]

GUARD_DIGITS = 6


def with_precision(ring: TowerRing, N: int) -> TowerRing:
    """A copy of ``ring`` with a different precision cap and the same modulus."""
    return TowerRing(ring.p, ring.f, ring.level, N, ring.modulus)


def transfer(x: TowerElement, target: TowerRing) -> TowerElement:
    """Move an element between rings that differ only in precision."""
    src = x.ring
    if (src.p, src.f, src.level, src.modulus) != (target.p, target.f, target.level, target.modulus):
        raise ValueError("rings differ in more than precision")
    if x.is_zero():
        return target.zero(x.prec)
    return target._make(x.exp, x.coeffs, x.prec)


def teichmuller_part(x: TowerElement) -> TowerElement:
    if not x.is_unit():
        raise InvalidParameters("Teichmueller part needs a unit")
    return x.ring.teichmuller(x.residue())


def principal_part(x: TowerElement) -> TowerElement:
    """<x> = x / teich(x mod p), a unit congruent to 1."""
    return x / teichmuller_part(x)


def log_principal(x: TowerElement) -> TowerElement:
    """p-adic logarithm of a unit congruent to 1 modulo p."""
    ring = x.ring
    z = x - 1
    if not z.is_zero() and z.valuation() < 1:
        raise InvalidParameters("log_principal needs x = 1 mod p")
    if z.is_zero():
        return ring.zero(z.prec)
    target = ring.e * (z.exp + ring.N)
    acc = ring.zero()
    power = ring.one()
    n = 1
    vz = z.pi_valuation()
    while True:
        # pi-valuation of z^n / n is n*vz - e*v_p(n) >= n*vz - e*log_p(n)
        power = power * z
        term = power / n
        acc = acc + (term if n % 2 else -term)
        n += 1
        if n * vz - ring.e * _log_floor(n, ring.p) > target:
            break
    return acc


def exp_small(x: TowerElement) -> TowerElement:
    """exp(x) for v(x) >= 1 (p odd)."""
    ring = x.ring
    if x.is_zero():
        return ring.one()
    if x.valuation() < 1:
        raise InvalidParameters("exp_small needs v(x) >= 1")
    acc = ring.one()
    term = ring.one()
    n = 1
    vx = x.pi_valuation()
    target = ring.e * ring.N
    while True:
        term = term * x / n
        acc = acc + term
        n += 1
        # v(x^n/n!) >= n*v(x) - e*n/(p-1)
        if n * vx - ring.e * n / (ring.p - 1) > target + ring.e:
            break
    return acc


def _log_floor(n: int, p: int) -> int:
    k = 0
    while p ** (k + 1) <= n:
        k += 1
    return k


def twist_integer(twist: Twist, p: int, K: int) -> int:
    """Integer approximant of a p-adic integer twist modulo p^K."""
    if isinstance(twist, int):
        return twist % p**K
    if isinstance(twist, Fraction):
        return PadicScalar.from_fraction(p, twist, K).lift() % p**K
    if isinstance(twist, PadicScalar):
        return twist.lift() % p**K
    if isinstance(twist, TowerElement):
        coords = twist.unramified_part()
        rest = twist.coeffs[twist.ring.f :] if twist.ring.level else ()
        if twist.exp < 0 or any(coords[1:]) or any(rest):
            raise InvalidParameters("twist must lie in Z_p")
        return coords[0] % p**K
    raise TypeError(f"unsupported twist type {type(twist).__name__}")


def _is_trivial_twist(twist: Twist) -> bool:
    if isinstance(twist, (int, Fraction)):
        return twist == 1
    return twist == 1


def _achieved_digits(residual: TowerElement) -> int:
    """Number of p-adic digits to which residual equals 1."""
    diff = residual - 1
    ring = residual.ring
    if diff.is_zero():
        return diff.prec // ring.e
    return int(diff.valuation())


def frobenius_solve(
    c: TowerElement,
    twist: Twist = 1,
    power: int = 1,
    min_precision: int = 1,
) -> tuple[TowerElement, int]:
    """Solve F^power(x)^twist / x = c in an unramified ring.

    With ``twist == 1`` the full unit equation is solved (a residue-field root is
    needed).  Otherwise only the principal part <c> is used, since a p-adic power of
    a prime-to-p root of unity is not defined.  Returns ``(x, digits)`` where
    ``digits`` is the p-adic precision to which the relation was verified.
    """
    ring = c.ring
    if ring.level != 0:
        raise InvalidParameters("frobenius_solve works in the unramified layer only")
    if not c.is_unit():
        raise InvalidParameters("frobenius_solve needs a unit right-hand side")
    p, f = ring.p, ring.f
    K = ring.N + GUARD_DIGITS
    work = with_precision(ring, K)
    cw = transfer(c, work)
    full = _is_trivial_twist(twist)
    psi = 1 if full else twist_integer(twist, p, K)

    if full:
        qs = p ** (power % f) if power % f else p**f
        root = work.residue.root(cw.residue(), qs - 1)
        if root is None:
            raise ResidueEquationUnsolvable(
                f"residue equation x^(p^{power}-1) = c has no root in F_{p}^{f}", achieved=0
            )
        x0 = work.teichmuller(root)
        target = cw / x0.frobenius(power) * x0
    else:
        x0 = work.one()
        target = principal_part(cw)

    logc = log_principal(target)
    rhs_elt = logc / p
    rhs = rhs_elt.unramified_part() if not rhs_elt.is_zero() else [0] * f
    mod = p**K
    phi = work._frobenius_matrix(power)
    matrix = [[(psi * phi[r][col] - (r == col)) % mod for col in range(f)] for r in range(f)]
    z = padic_solve(matrix, rhs, p, K)
    y = exp_small(work.from_coefficients(z, exp=1))
    x = x0 * y

    # plug back
    if full:
        lhs = x.frobenius(power) / x
        ok = lhs / cw
    else:
        lhs = x.frobenius(power) ** psi / x
        ok = principal_part(lhs) / target
    achieved = min(_achieved_digits(ok), ring.N)
    if achieved < min_precision:
        raise ResidueEquationUnsolvable(
            f"Frobenius equation solvable only to {achieved} digits at degree {f}", achieved=achieved
        )
    return transfer(x, ring), achieved


def solve_epsilon(u: Twist, f: int, N: int = 20, p: int | None = None, min_precision: int = 1):
    """epsilon with F(epsilon)/epsilon = u in the unramified ring of degree f."""
    if isinstance(u, TowerElement):
        ring = with_precision(u.ring, N) if u.ring.f == f and u.ring.level == 0 else TowerRing(u.ring.p, f, 0, N)
        value = ring.from_coefficients(u.unramified_part()) if not u.ring.same_as(ring) else u
    else:
        if p is None:
            p = u.p if isinstance(u, PadicScalar) else None
        if p is None:
            raise InvalidParameters("prime required")
        ring = TowerRing(p, f, 0, N)
        value = ring.coerce(u)
    return frobenius_solve(value, 1, 1, min_precision)


def sqrt_unit(x: TowerElement) -> TowerElement:
    """Square root of a unit whose residue is a square; fixed residue branch."""
    ring = x.ring
    if not x.is_unit():
        raise InvalidParameters("sqrt_unit needs a unit")
    r = ring.residue.sqrt(x.residue())
    if r is None:
        raise PrecisionExhausted("residue is not a square in this residue field")
    y = ring.from_residue(r)
    for _ in range(ring.N.bit_length() + 3):
        y = (y + x / y) / 2
    return y
