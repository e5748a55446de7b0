"""Independent reference computations used to cross-check the library.

Everything here is deliberately naive: scalar-at-a-time loops, no shared
code paths with topring.linalg beyond the field tables themselves.
"""

from __future__ import annotations

from topring.fields import FiniteField


def naive_rank(F: FiniteField, M) -> int:
    """Rank by plain Gaussian elimination, one scalar at a time."""
    rows = [[int(x) for x in row] for row in M]
    m = len(rows)
    n = len(rows[0]) if m else 0
    rank = 0
    for col in range(n):
        pivot = None
        for r in range(rank, m):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = int(F.INV[rows[rank][col]])
        rows[rank] = [int(F.MUL[inv, x]) for x in rows[rank]]
        for r in range(m):
            if r != rank and rows[r][col] != 0:
                c = rows[r][col]
                rows[r] = [
                    int(F.ADD[rows[r][j], F.NEG[F.MUL[c, rows[rank][j]]]]) for j in range(n)
                ]
        rank += 1
        if rank == m:
            break
    return rank


def poly_mul(F: FiniteField, f: list[int], g: list[int]) -> list[int]:
    """Schoolbook polynomial product, low degree first."""
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = int(F.ADD[out[i + j], F.MUL[a, b]])
    while out and out[-1] == 0:
        out.pop()
    return out


def poly_eval(F: FiniteField, f: list[int], x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = int(F.ADD[F.MUL[acc, x], c])
    return acc
