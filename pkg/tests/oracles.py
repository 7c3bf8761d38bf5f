"""Independent reference computations used to cross-check the library.

Nothing here calls the library's elimination or closed forms; every determinant
is a plain cofactor expansion over whatever commutative ring the entries live in.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Sequence


def cofactor_det(matrix: Sequence[Sequence], zero, one):
    """Laplace expansion along rows with a memo on the set of used columns.

    Works for any commutative ring whose elements support ``+``, ``-`` and ``*``;
    ``zero`` and ``one`` are that ring's constants.  Cost is O(n 2^n) products.
    """
    n = len(matrix)
    if n == 0:
        return one

    @lru_cache(maxsize=None)
    def minor(row: int, used: int):
        if row == n:
            return one
        acc = zero
        sign_pos = 0
        for col in range(n):
            if used >> col & 1:
                continue
            entry = matrix[row][col]
            if not _is_trivial_zero(entry):
                term = entry * minor(row + 1, used | 1 << col)
                acc = acc + term if sign_pos % 2 == 0 else acc - term
            sign_pos += 1
        return acc

    return minor(0, 0)


def _is_trivial_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    return False


def leibniz_det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Sum over permutations; only for tiny rational matrices."""
    n = len(matrix)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(1)
        for r, c in enumerate(perm):
            term *= matrix[r][c]
            if term == 0:
                break
        total += -term if inversions % 2 else term
    return total


def naive_convolution(x, y):
    """Product in Z_p[C_p x C_d] straight from coefficient grids."""
    gr = x.gr
    p, d = gr.p, gr.d
    out = {}
    for (k1, l1, c1) in x.support():
        for (k2, l2, c2) in y.support():
            key = ((k1 + k2) % p, (l1 + l2) % d)
            out[key] = out[key] + c1 * c2 if key in out else c1 * c2
    return gr.element(out)


def integer_power_mod(base: int, exponent: int, modulus: int) -> int:
    return pow(base, exponent, modulus)
