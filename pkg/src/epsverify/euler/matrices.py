"""Explicit group-ring matrices for the Euler characteristic and their closed-form determinants."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from ..errors import ClosedFormMismatch, InvalidParameters, NotAUnit, PrecisionExhausted
from ..group_ring import (
    Character,
    CenterVector,
    GroupRing,
    GroupRingElement,
    det_over_groupring,
)
from ..params import OMEGA_POS, OMEGA_ZERO, TowerParams
from ..tower.ring import TowerElement, TowerRing, make_tower

Matrix = list[list[GroupRingElement]]

# p-adic digits a determinant must carry beyond its valuation before a comparison counts
MIN_RELATIVE_DIGITS = 4


def main_ring(params: TowerParams) -> TowerRing:
    """Degree-f unramified ring with zeta_p adjoined, shared by every per-character computation."""
    return make_tower(params.p, params.f, 1, params.N)


def main_group_ring(params: TowerParams) -> GroupRing:
    return GroupRing(params.p, params.d, main_ring(params))


@dataclass(frozen=True)
class StarFillPolicy:
    """How the unconstrained blocks of the big matrices are filled."""

    mode: str = "zeros"
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("zeros", "random_integral"):
            raise InvalidParameters(f"unknown star fill mode {self.mode!r}")

    def filler(self, gr: GroupRing):
        rng = random.Random(self.seed)

        def fill() -> GroupRingElement:
            if self.mode == "zeros":
                return gr.zero()
            return gr.random_padic_element(rng, digits=min(gr.ring.N, 8))

        return fill


ZEROS = StarFillPolicy("zeros")


def check_component(
    chi: Character, got: TowerElement, expected: TowerElement, label: str, error=ClosedFormMismatch
) -> None:
    """Raise ``error`` when ``got`` and ``expected`` differ at the joint precision."""
    diff = got - expected
    if not diff.is_zero():
        raise error(chi, f"{label} at {chi}: computed {got.short()}, expected {expected.short()}")
    if expected.is_zero():
        return
    ring = expected.ring
    if diff.prec - expected.pi_valuation() < MIN_RELATIVE_DIGITS * ring.e:
        raise PrecisionExhausted(f"{label} at {chi}: agreement only to {diff.prec} pi-digits")


def check_vectors(got: CenterVector, expected: CenterVector, label: str, error=ClosedFormMismatch) -> None:
    for chi in got.gr.characters():
        check_component(chi, got[chi], expected[chi], label, error)


def _u(gr: GroupRing, params: TowerParams) -> TowerElement:
    return gr.ring.from_int(params.u_int)


def twisted_b_power(gr: GroupRing, params: TowerParams, n: int) -> GroupRingElement:
    """(u^m b)^n for any integer n."""
    u = _u(gr, params)
    return gr.element({(0, n % gr.d): u ** (params.m * n)})


def square(n: int, fill) -> Matrix:
    return [[fill() for _ in range(n)] for _ in range(n)]


# ---------------------------------------------------------------------------
# M_{C,n}


def build_M_Cn(C: GroupRingElement, n: int) -> Matrix:
    """n x n matrix: -1 on the diagonal, C just below it, -C down the last column (corner -1-C)."""
    if n < 1:
        raise InvalidParameters("n must be at least 1")
    gr = C.gr
    mat = square(n, gr.zero)
    for i in range(n):
        mat[i][i] = -gr.one()
        if i > 0:
            mat[i][i - 1] = C
        if i < n - 1:
            mat[i][n - 1] = -C
    mat[n - 1][n - 1] = -gr.one() - C
    return mat


def closed_form_M_Cn(C: GroupRingElement, n: int) -> GroupRingElement:
    gr = C.gr
    acc, power = gr.zero(), gr.one()
    for _ in range(n + 1):
        acc = acc + power
        power = power * C
    return acc if n % 2 == 0 else -acc


def det_M_Cn(C: GroupRingElement, n: int) -> CenterVector:
    """Character-wise determinant of M_{C,n}, checked against (-1)^n (1 + C + ... + C^n)."""
    det = det_over_groupring(build_M_Cn(C, n))
    check_vectors(det, closed_form_M_Cn(C, n).transform(), f"det M_(C,{n})")
    return det


# ---------------------------------------------------------------------------
# the m x m matrix of kernel components


def build_script_M(params: TowerParams, gr: GroupRing | None = None) -> Matrix:
    gr = gr or main_group_ring(params)
    m = params.m
    if params.omega == 0:
        # C = u^-1 b^-mtilde
        C = gr.element({(0, -params.m_tilde % gr.d): _u(gr, params).inverse()})
        mat = square(m, gr.zero)
        mat[0][0] = C - 1
        if m == 1:
            return mat
        mat[0][m - 1] = C
        lower = build_M_Cn(C, m - 1)
        for i in range(m - 1):
            for j in range(m - 1):
                mat[i + 1][j + 1] = lower[i][j]
        return mat
    if m == 1:
        return [[-gr.one()]]
    D = twisted_b_power(gr, params, -params.m_tilde)
    mat = square(m, gr.zero)
    mat[1][0] = -gr.one()
    for k in range(1, m - 1):
        mat[k][k] = -gr.one()
        mat[k + 1][k] = D
    mat[0][m - 1] = D
    for i in range(1, m - 1):
        mat[i][m - 1] = -D
    mat[m - 1][m - 1] = -gr.one() - D
    return mat


def closed_form_script_M(params: TowerParams, gr: GroupRing) -> GroupRingElement:
    m = params.m
    if params.omega == 0:
        val = twisted_b_power(gr, params, -1) - 1
        return val if (m - 1) % 2 == 0 else -val
    val = twisted_b_power(gr, params, -params.m_tilde * (m - 1))
    return val if m % 2 == 0 else -val


def det_script_M(params: TowerParams, gr: GroupRing | None = None) -> CenterVector:
    gr = gr or main_group_ring(params)
    det = det_over_groupring(build_script_M(params, gr))
    check_vectors(det, closed_form_script_M(params, gr).transform(), "det of the kernel-component matrix")
    if params.omega == 0:
        bad = [chi for chi, v in det.items() if v.is_zero() or v.valuation() != 0]
        if bad:
            raise NotAUnit(f"kernel-component determinant is not a unit at {bad[:3]}")
    return det


# ---------------------------------------------------------------------------
# the full inclusion matrices


def build_frak_M(params: TowerParams, gr: GroupRing, policy: StarFillPolicy = ZEROS) -> Matrix:
    """pm x pm matrix in m x m blocks (untwisted-H^2 case)."""
    p, m = params.p, params.m
    star = policy.filler(gr)
    zero, one = gr.zero, gr.one()
    a_minus_1 = gr.a() - 1
    Ta = gr.trace_a()
    blocks: list[list[list[list[GroupRingElement]] | None]] = [[None] * p for _ in range(p)]

    def scalar_block(x: GroupRingElement):
        return [[x if i == j else zero() for j in range(m)] for i in range(m)]

    def star_block():
        return [[star() for _ in range(m)] for _ in range(m)]

    blocks[0][0] = scalar_block(Ta)
    blocks[0][1] = scalar_block(a_minus_1)
    for r in range(1, p - 1):
        for c in range(1, r):
            blocks[r][c] = star_block()
        blocks[r][r] = scalar_block(-one)
        blocks[r][r + 1] = scalar_block(a_minus_1)
    blocks[p - 1][0] = build_script_M(params, gr)
    for c in range(1, p - 1):
        blocks[p - 1][c] = star_block()
    blocks[p - 1][p - 1] = scalar_block(-one)

    mat = square(p * m, zero)
    for br in range(p):
        for bc in range(p):
            blk = blocks[br][bc]
            if blk is None:
                continue
            for i in range(m):
                for j in range(m):
                    mat[br * m + i][bc * m + j] = blk[i][j]
    return mat


def sigma_entry(params: TowerParams, gr: GroupRing) -> GroupRingElement:
    """sum_{i<d} (u^m b)^i / (u^{dm} - 1), the image of the splitting."""
    u = _u(gr, params)
    scale = (u ** (params.d * params.m) - 1).inverse()
    acc = gr.zero()
    for i in range(params.d):
        acc = acc + twisted_b_power(gr, params, i)
    return acc.scale(scale)


def build_w_frak_M(params: TowerParams, gr: GroupRing, policy: StarFillPolicy = ZEROS) -> Matrix:
    """(pm + 2)-square matrix (w, frak M) of the twisted-H^2 case.

    Columns: splitting, t1, t2, r_2..r_m, then s_0..s_{p-2} in blocks of m.
    Rows: z1, z2, then w_0..w_{p-1} in blocks of m.
    """
    p, m, mt = params.p, params.m, params.m_tilde
    star = policy.filler(gr)
    one = gr.one()
    a_minus_1 = gr.a() - 1
    Ta = gr.trace_a()
    size = p * m + 2
    mat = square(size, gr.zero)
    col_sigma, col_t1, col_t2 = 0, 1, 2

    def col_r(k):  # k = 2..m
        return 3 + (k - 2)

    def col_s(j, k):  # j = 0..p-2, k = 1..m
        return 3 + (m - 1) + j * m + (k - 1)

    def row_w(j, k):  # j = 0..p-1, k = 1..m
        return 2 + j * m + (k - 1)

    mat[0][col_sigma] = sigma_entry(params, gr)
    mat[0][col_t1] = a_minus_1
    mat[1][col_t1] = one - twisted_b_power(gr, params, 1)
    mat[1][col_t2] = Ta

    # t1's w_0 components
    lead = twisted_b_power(gr, params, mt)
    for k in range(1, m + 1):
        v = lead if k == 1 else twisted_b_power(gr, params, 1 - (k - 2) * mt) - lead
        mat[row_w(0, k)][col_t1] = v
        if k >= 2:
            mat[row_w(0, k)][col_r(k)] = Ta
        mat[row_w(0, k)][col_s(0, k)] = a_minus_1

    for j in range(1, p):
        for k in range(1, m + 1):
            mat[row_w(j, k)][col_t1] = star()
        for jj in range(0, j - 1):
            for k in range(1, m + 1):
                for kk in range(1, m + 1):
                    mat[row_w(j, k)][col_s(jj, kk)] = star()
        for k in range(1, m + 1):
            mat[row_w(j, k)][col_s(j - 1, k)] = -one
            if j <= p - 2:
                mat[row_w(j, k)][col_s(j, k)] = a_minus_1

    small = build_script_M(params, gr)
    for k in range(1, m + 1):
        mat[row_w(p - 1, k)][col_t2] = small[k - 1][0]
        for c in range(2, m + 1):
            mat[row_w(p - 1, k)][col_r(c)] = small[k - 1][c - 1]
    return mat


def closed_form_euler(params: TowerParams, gr: GroupRing) -> CenterVector:
    p, m, mt = params.p, params.m, params.m_tilde
    ring = gr.ring
    u = _u(gr, params)
    pm = ring.from_int(p) ** m
    values = {}
    for i, j in gr.characters():
        phi = gr.phi_b(j)
        if params.omega == 0:
            if i == 0:
                values[(i, j)] = pm
            else:
                sign = 1 if (m - 1) % 2 == 0 else -1
                values[(i, j)] = (
                    sign * ((u**m * phi).inverse() - 1) * (gr.chi_a(i) - 1) ** (m * (p - 1))
                )
        else:
            twisted = u**m * phi
            if i == 0:
                values[(i, j)] = -(twisted**mt) * pm / (twisted - 1)
            else:
                sign = 1 if (m - 1) % 2 == 0 else -1
                values[(i, j)] = sign * twisted ** (-mt * (m - 1)) * (gr.chi_a(i) - 1) ** (m * (p - 1))
    return CenterVector(gr, values)


def euler_matrix(params: TowerParams, gr: GroupRing, policy: StarFillPolicy = ZEROS) -> Matrix:
    if params.omega == 0:
        return build_frak_M(params, gr, policy)
    return build_w_frak_M(params, gr, policy)


def euler_char_rep(
    params: TowerParams, policy: StarFillPolicy = ZEROS, gr: GroupRing | None = None
) -> CenterVector:
    """Representative of the Euler characteristic, checked against the matrix determinant."""
    gr = gr or main_group_ring(params)
    expected = closed_form_euler(params, gr)
    det = det_over_groupring(euler_matrix(params, gr, policy))
    check_vectors(det, expected, f"Euler characteristic ({params.branch}, stars={policy.mode})")
    return expected


def branch_of(params: TowerParams) -> str:
    branch = params.branch
    if branch not in (OMEGA_ZERO, OMEGA_POS):
        raise InvalidParameters(f"no Euler matrices in branch {branch}")
    return branch


__all__: Sequence[str] = [
    "MIN_RELATIVE_DIGITS",
    "StarFillPolicy",
    "ZEROS",
    "branch_of",
    "build_M_Cn",
    "build_frak_M",
    "build_script_M",
    "build_w_frak_M",
    "check_component",
    "check_vectors",
    "closed_form_M_Cn",
    "closed_form_euler",
    "closed_form_script_M",
    "det_M_Cn",
    "det_script_M",
    "euler_char_rep",
    "euler_matrix",
    "main_group_ring",
    "main_ring",
    "sigma_entry",
    "twisted_b_power",
]
