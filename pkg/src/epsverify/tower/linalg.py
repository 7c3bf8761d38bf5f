"""Linear algebra over Z/p^K with valuation-aware pivoting."""

from __future__ import annotations

from typing import Sequence


def _v(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def padic_solve(matrix: Sequence[Sequence[int]], rhs: Sequence[int], p: int, K: int) -> list[int]:
    """Best-effort solution of M z = b modulo p^K.

    Full pivoting on the entry of smallest valuation.  When a pivot does not divide
    the reduced right-hand side, or a row has no pivot at all, the unsolvable part
    is dropped; callers measure the residual themselves.
    """
    mod = p**K
    n = len(matrix)
    a = [[x % mod for x in row] + [rhs[i] % mod] for i, row in enumerate(matrix)]
    cols = list(range(n))
    pivots: list[tuple[int, int]] = []  # (row index, valuation)
    for k in range(n):
        best = None
        for r in range(k, n):
            for c in range(k, n):
                v = _v(a[r][c], p, K)
                if v < K and (best is None or v < best[0]):
                    best = (v, r, c)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, r, c = best
        a[k], a[r] = a[r], a[k]
        for row in a:
            row[k], row[c] = row[c], row[k]
        cols[k], cols[c] = cols[c], cols[k]
        piv = a[k][k]
        unit_inv = pow(piv // p**v, -1, mod)
        for r2 in range(k + 1, n):
            x = a[r2][k]
            if x:
                factor = (x // p**v) * unit_inv % mod
                a[r2] = [(y - factor * z) % mod for y, z in zip(a[r2], a[k])]
        pivots.append((k, v))
    z = [0] * n
    for k in reversed(range(len(pivots))):
        _, v = pivots[k]
        acc = (a[k][n] - sum(a[k][j] * z[j] for j in range(k + 1, n))) % mod
        unit_inv = pow(a[k][k] // p**v, -1, mod)
        z[k] = (acc // p**v) * unit_inv % mod
    out = [0] * n
    for k in range(n):
        out[cols[k]] = z[k]
    return out


def matmul_vec(matrix: Sequence[Sequence[int]], vec: Sequence[int], mod: int) -> list[int]:
    return [sum(x * y for x, y in zip(row, vec)) % mod for row in matrix]
