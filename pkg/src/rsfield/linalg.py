"""Dense linear algebra over F_p on lists of ints."""
from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def _row_reduce(m: Matrix, p: int, ncols: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form of ``m`` restricted to the first ``ncols`` pivot columns."""
    m = [[x % p for x in row] for row in m]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = pow(m[row][col], -1, p)
        m[row] = [x * inv % p for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col]:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    return m, pivots


def rank(m: Sequence[Sequence[int]], p: int) -> int:
    if not m:
        return 0
    _, pivots = _row_reduce([list(r) for r in m], p, len(m[0]))
    return len(pivots)


def inverse(m: Sequence[Sequence[int]], p: int) -> Matrix:
    """Inverse of a square matrix mod p; raises ValueError if singular."""
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = _row_reduce(aug, p, n)
    if len(pivots) != n:
        raise ValueError("matrix is singular mod %d" % p)
    return [row[n:] for row in red]


def nullspace(m: Sequence[Sequence[int]], p: int, ncols: int) -> Matrix:
    """Basis (list of vectors) of {v : m v = 0} over F_p."""
    red, pivots = _row_reduce([list(r) for r in m], p, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in enumerate(pivots):
            v[pc] = -red[row][fc] % p
        basis.append(v)
    return basis


def matvec(m: Sequence[Sequence[int]], v: Sequence[int], p: int) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) % p for row in m]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int) -> Matrix:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % p for col in cols] for row in a]
