"""Normal integral basis generators and the resolvent elements E and W built from them."""

from __future__ import annotations

import math
import random

from ..errors import InvalidParameters, SearchExhausted
from ..group_ring import CenterVector, GroupRing, det_scalar, multiplicative_order
from ..params import TowerParams
from ..tower.equations import sqrt_unit
from ..tower.residue import rank_mod_p
from ..tower.ring import TowerElement, TowerRing


def _lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def auxiliary_degree(params: TowerParams) -> int:
    """Degree of an unramified ring holding K' (degree dm) and zeta_d.

    The factor 2m makes every unit of the degree-m subfield a square, so the
    discriminant always has a root.
    """
    return _lcm(params.m * params.d, multiplicative_order(params.p, params.d), 2 * params.m)


def auxiliary_ring(params: TowerParams) -> TowerRing:
    return TowerRing(params.p, auxiliary_degree(params), 1, params.N)


def subfield_trace(x: TowerElement, degree: int) -> TowerElement:
    """Trace from the degree-``degree`` subfield to Q_p, for x fixed by F^degree."""
    acc = x.ring.zero()
    for i in range(degree):
        acc = acc + x.frobenius(i)
    return acc


def frobenius_circulant(theta: TowerElement, degree: int) -> list[list[TowerElement]]:
    return [[theta.frobenius(i + j) for j in range(degree)] for i in range(degree)]


def normal_basis_trace_one(ring: TowerRing, degree: int | None = None, seed: int = 0, max_tries: int = 200) -> TowerElement:
    """theta in the degree-``degree`` unramified subfield with Frobenius conjugates an integral basis and trace one."""
    degree = ring.f if degree is None else degree
    if ring.f % degree:
        raise InvalidParameters(f"subfield degree {degree} does not divide {ring.f}")
    if degree == 1:
        return ring.one()
    res = ring.residue
    p = ring.p
    rng = random.Random(seed)
    for _ in range(max_tries):
        r = res.random(rng, nonzero=True)
        # project into the residue subfield of size p^degree
        t = res.zero
        x = r
        for _ in range(ring.f // degree):
            t = res.add(t, x)
            x = res.frobenius(x, degree)
        if not any(t):
            continue
        conj = [res.frobenius(t, i) for i in range(degree)]
        if rank_mod_p(conj, p) < degree:
            continue
        cand = ring.teichmuller(t)
        tr = subfield_trace(cand, degree)
        if tr.is_zero() or not tr.is_unit():
            continue
        theta = cand / tr
        if not det_scalar(frobenius_circulant(theta, degree)).is_unit():
            continue
        return theta
    raise SearchExhausted(f"no normal basis generator found after {max_tries} seeds")


def resolvent(theta: TowerElement, j: int, d: int, m: int, zeta_d: TowerElement) -> TowerElement:
    """(theta | phi_j) = sum_k b^k(theta) phi_j(b)^-k, with b acting as F^-m on the degree-d field."""
    ring = theta.ring
    acc = ring.zero()
    for k in range(d):
        acc = acc + theta.frobenius((-m * k) % ring.f) * zeta_d ** ((-j * k) % d)
    return acc


def norm_resolvent(theta: TowerElement, j: int, d: int, m: int, zeta_d: TowerElement) -> TowerElement:
    """Product over the m Frobenius twists acting on theta only."""
    ring = theta.ring
    acc = ring.one()
    for i in range(m):
        acc = acc * resolvent(theta.frobenius(i), j, d, m, zeta_d)
    return acc


def discriminant_of_normal_basis(generator: TowerElement, degree: int) -> TowerElement:
    """det(Tr(w_i w_j)) for w_i the Frobenius conjugates of ``generator``."""
    basis = [generator.frobenius(i) for i in range(degree)]
    gram = [[subfield_trace(x * y, degree) for y in basis] for x in basis]
    return det_scalar(gram)


class ResolventData:
    """theta2 (degree d), A (degree m), the discriminant root and the Frobenius data in one ring."""

    def __init__(self, params: TowerParams, ring: TowerRing | None = None):
        self.params = params
        self.ring = ring or auxiliary_ring(params)
        p, m, d = params.p, params.m, params.d
        self.group_ring = GroupRing(p, d, self.ring)
        self.theta2 = normal_basis_trace_one(self.ring, d, seed=params.seed)
        self.A = normal_basis_trace_one(self.ring, m, seed=params.seed + 1)
        self.disc = discriminant_of_normal_basis(self.A, m)
        self.disc_root = sqrt_unit(self.disc) if m > 1 else self.ring.one()
        self.zeta_d = self.group_ring.zeta_d()

    def norm_resolvent(self, j: int) -> TowerElement:
        return norm_resolvent(self.theta2, j, self.params.d, self.params.m, self.zeta_d)

    def W(self) -> CenterVector:
        values = {}
        for j in range(self.params.d):
            w = self.disc_root * self.norm_resolvent(j)
            for i in range(self.params.p):
                values[(i, j)] = w
        return CenterVector(self.group_ring, values)

    def E(self) -> TowerElement:
        params = self.params
        if params.omega == 0:
            return self.ring.one()
        u = self.ring.from_int(params.u_int)
        gen = self.A * self.theta2
        acc = self.ring.zero()
        uinv = u.inverse()
        weight = self.ring.one()
        for i in range(params.d * params.m):
            acc = acc + weight * gen.frobenius(i)
            weight = weight * uinv
        return acc


def compute_E(params: TowerParams, data: ResolventData | None = None) -> TowerElement:
    return (data or ResolventData(params)).E()


def compute_W_theta2(params: TowerParams, data: ResolventData | None = None) -> CenterVector:
    return (data or ResolventData(params)).W()


def e_twist_scalar(params: TowerParams) -> int:
    """The scalar twist relating E^F and E: 1 when omega = 0, u otherwise."""
    return 1 if params.omega == 0 else params.u_int
