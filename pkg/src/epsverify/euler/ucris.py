"""The crystalline correction term and the small matrices behind it."""

from __future__ import annotations

from fractions import Fraction

from ..errors import ClosedFormMismatch, InvalidParameters
from ..group_ring import CenterVector, GroupRing, GroupRingElement, det_over_groupring
from ..params import OMEGA_POS, OMEGA_ZERO, TWIST_TRIVIAL, TowerParams
from .matrices import Matrix, check_vectors, main_group_ring


def _regularize(x, one):
    """The star convention: a vanishing component is replaced by 1."""
    return one if x.is_zero() else x


def ucris_rep(params: TowerParams, branch: str | None = None, gr: GroupRing | None = None) -> CenterVector:
    """Character values of m_{N/K}, with Frobenius acting as b^-1 on the inertia-invariant part."""
    gr = gr or main_group_ring(params)
    branch = branch or params.branch
    if branch not in (OMEGA_ZERO, OMEGA_POS, TWIST_TRIVIAL):
        raise InvalidParameters(f"unknown branch {branch!r}")
    ring = gr.ring
    p, m = params.p, params.m
    one = ring.one()
    u = ring.from_int(params.u_int)
    um = u**m
    pm_inv = ring.from_int(p) ** (-m)
    twisted_char = None
    if branch == TWIST_TRIVIAL:
        # u^m is a d-th root of unity; its inverse is the image of b under the twist
        target = um.inverse()
        matches = [j for j in range(gr.d) if (gr.phi_b(j) - target).is_zero()]
        if len(matches) != 1:
            raise InvalidParameters("u^-m is not a unique d-th root of unity at this precision")
        twisted_char = (0, matches[0])
    values = {}
    for i, j in gr.characters():
        if i != 0:
            values[(i, j)] = one
            continue
        phi = gr.phi_b(j)
        num = _regularize(1 - pm_inv * (um * phi).inverse(), one)
        den = _regularize(1 - um * phi, one)
        val = num / den
        if (i, j) == twisted_char:
            val = val * params.d
        values[(i, j)] = val
    return CenterVector(gr, values)


# ---------------------------------------------------------------------------
# sub-identities


def frobenius_circulant(gr: GroupRing, u, size: int) -> Matrix:
    """1 - (twisted Frobenius) on the dual basis: 1 on the diagonal, -u below it, -u b in the corner."""
    ring = gr.ring
    u = ring.coerce(u)
    mat = [[gr.zero() for _ in range(size)] for _ in range(size)]
    for i in range(size):
        mat[i][i] = gr.one()
        if i > 0:
            mat[i][i - 1] = gr.scalar(-u)
    if size == 1:
        mat[0][0] = gr.one() - gr.element({(0, 1): u})
    else:
        mat[0][size - 1] = gr.element({(0, 1): -u})
    return mat


def circulant_closed_form(gr: GroupRing, u, size: int) -> GroupRingElement:
    u = gr.ring.coerce(u)
    return gr.one() - gr.element({(0, 1): u**size})


def det_frobenius_circulant(gr: GroupRing, u, size: int) -> CenterVector:
    """Determinant per character, checked against 1 - u^size b."""
    det = det_over_groupring(frobenius_circulant(gr, u, size))
    check_vectors(det, circulant_closed_form(gr, u, size).transform(), f"circulant of size {size}")
    return det


def inertia_matrix_A(size: int, index: int) -> list[list[Fraction]]:
    """First column constant ``index``, ones just above the diagonal."""
    mat = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        mat[i][0] = Fraction(index)
        if i + 1 < size:
            mat[i][i + 1] = Fraction(1)
    return mat


def inertia_matrix_B(size: int) -> list[list[Fraction]]:
    """Ones on the diagonal and -1 below it, last column constant -1/size."""
    mat = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        if i < size - 1:
            mat[i][i] = Fraction(1)
            mat[i + 1][i] = Fraction(-1)
        mat[i][size - 1] = Fraction(-1, size)
    return mat


def det_fraction(matrix: list[list[Fraction]]) -> Fraction:
    """Exact determinant over Q by Gaussian elimination."""
    a = [row[:] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] / a[col][col]
            if factor:
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return det


def check_inertia_matrices(size: int, index: int) -> tuple[Fraction, Fraction]:
    """Determinants of the two inertia matrices, checked against their closed forms."""
    det_a = det_fraction(inertia_matrix_A(size, index))
    det_b = det_fraction(inertia_matrix_B(size))
    want_a = (-1) ** (size + 1) * index
    if det_a != want_a:
        raise ClosedFormMismatch((size, index), f"det A = {det_a}, expected {want_a}")
    if det_b != -1:
        raise ClosedFormMismatch((size, index), f"det B = {det_b}, expected -1")
    return det_a, det_b
