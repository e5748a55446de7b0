"""Exact dense linear algebra over a FiniteField.

Matrices are numpy int64 arrays of encoded field elements.  Vectors are
rows by default: the product of a row vector v with a matrix M is
``matmul(F, v[None, :], M)``.  Row reduction is fully reduced (RREF), so
``row_space_basis`` is a canonical form and two subspaces are equal iff
their bases are equal arrays.
"""

from __future__ import annotations

import numpy as np

from topring.fields import FiniteField


def matmul(F: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact matrix product over F."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    return F.fsum(F.MUL[A[:, :, None], B[None, :, :]], axis=1)


def matvec(F: FiniteField, v: np.ndarray, M: np.ndarray) -> np.ndarray:
    """Row vector times matrix."""
    return matmul(F, np.asarray(v)[None, :], M)[0]


def scale(F: FiniteField, c: int, M: np.ndarray) -> np.ndarray:
    return F.MUL[c, np.asarray(M, dtype=np.int64)]


def add(F: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return F.ADD[np.asarray(A), np.asarray(B)]


def sub(F: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return F.ADD[np.asarray(A), F.NEG[np.asarray(B)]]


def rref(F: FiniteField, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.

    Args:
        F: the field.
        M: matrix of encoded elements, shape (m, n).

    Returns:
        (R, pivots): R has one row per pivot (zero rows dropped), pivots
        lists the pivot column of each row in order.
    """
    R = np.array(M, dtype=np.int64)
    if R.ndim != 2:
        raise ValueError("rref expects a 2d array")
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        hits = np.nonzero(R[r:, c])[0]
        if hits.size == 0:
            continue
        piv = r + int(hits[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = F.MUL[F.INV[R[r, c]], R[r]]
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if others.size:
            R[others] = F.ADD[R[others], F.NEG[F.MUL[R[others, c][:, None], R[r][None, :]]]]
        pivots.append(c)
        r += 1
    return R[: len(pivots)], pivots


def rank(F: FiniteField, M: np.ndarray) -> int:
    return len(rref(F, M)[1])


def row_space_basis(F: FiniteField, M: np.ndarray) -> np.ndarray:
    """Canonical (RREF) basis of the row space."""
    return rref(F, M)[0]


def in_row_space(F: FiniteField, basis: np.ndarray, v: np.ndarray) -> bool:
    """Membership test; basis need not be reduced."""
    basis = np.asarray(basis, dtype=np.int64)
    if basis.shape[0] == 0:
        return not np.any(v)
    stacked = np.vstack([basis, np.asarray(v, dtype=np.int64)[None, :]])
    return rank(F, stacked) == rank(F, basis)


def right_null_basis(F: FiniteField, M: np.ndarray) -> np.ndarray:
    """Rows v with M @ v^T = 0 (kernel of the column action)."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    R, pivots = rref(F, M)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = F.NEG[R[r, f]]
    return basis


def left_null_basis(F: FiniteField, M: np.ndarray) -> np.ndarray:
    """Rows v with v @ M = 0."""
    return right_null_basis(F, np.asarray(M).T)


def solve_right(F: FiniteField, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x (row layout) of A @ x^T = b^T, or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    aug = np.hstack([A, b.reshape(A.shape[0], 1)])
    R, pivots = rref(F, aug)
    n = A.shape[1]
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = R[r, n]
    return x


def solve_left(F: FiniteField, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of x @ A = b, or None."""
    return solve_right(F, np.asarray(A).T, b)


def rref_solve(F: FiniteField, A: np.ndarray, B: np.ndarray):
    """Row-reduce and solve A @ X = B column by column.

    Args:
        A: coefficient matrix (m, n).
        B: stacked right-hand sides (m, k).

    Returns:
        (rank, kernel, solutions, inconsistent) where kernel rows span
        {v : A v = 0}, solutions is an (n, k) matrix whose consistent
        columns solve the system, and inconsistent lists the column
        indices with no solution (their solution column is zeroed).
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if B.ndim == 1:
        B = B.reshape(-1, 1)
    m, n = A.shape
    aug = np.hstack([A, B])
    R, pivots = rref(F, aug)
    rk = sum(1 for c in pivots if c < n)
    kernel = right_null_basis(F, A)
    sols = np.zeros((n, B.shape[1]), dtype=np.int64)
    inconsistent = []
    for j in range(B.shape[1]):
        bad = any(pc >= n and R[r, n + j] != 0 for r, pc in enumerate(pivots))
        # a pivot inside the RHS block makes every RHS column with support there
        # inconsistent; check directly per column
        if bad:
            inconsistent.append(j)
            continue
        for r, pc in enumerate(pivots):
            if pc < n:
                sols[pc, j] = R[r, n + j]
        if not np.array_equal(matmul(F, A, sols[:, j : j + 1]), B[:, j : j + 1]):
            sols[:, j] = 0
            inconsistent.append(j)
    return rk, kernel, sols, inconsistent


def inverse(F: FiniteField, A: np.ndarray) -> np.ndarray | None:
    """Two-sided inverse of a square matrix, or None if singular."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse expects a square matrix")
    aug = np.hstack([A, np.eye(n, dtype=np.int64)])
    R, pivots = rref(F, aug)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        return None
    return R[:n, n:]


def is_invertible(F: FiniteField, A: np.ndarray) -> bool:
    A = np.asarray(A)
    return A.shape[0] == A.shape[1] and rank(F, A) == A.shape[0]


def intersect_row_spaces(F: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Canonical basis of rowspace(A) & rowspace(B)."""
    A = row_space_basis(F, A)
    B = row_space_basis(F, B)
    n = A.shape[1] if A.size else np.asarray(B).shape[1]
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    # x = u @ A = w @ B iff (u | w) kills the stacked matrix [A; -B] from the left
    null = left_null_basis(F, np.vstack([A, F.NEG[B]]))
    if null.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    U = null[:, : A.shape[0]]
    return row_space_basis(F, matmul(F, U, A))


def sum_row_spaces(F: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[0] == 0:
        return row_space_basis(F, B)
    if B.shape[0] == 0:
        return row_space_basis(F, A)
    return row_space_basis(F, np.vstack([A, B]))


def enumerate_row_space(F: FiniteField, basis: np.ndarray) -> np.ndarray:
    """All q^k vectors in the span of k basis rows, one per row."""
    basis = np.asarray(basis, dtype=np.int64)
    k, n = basis.shape
    if k == 0:
        return np.zeros((1, n), dtype=np.int64)
    if F.q ** k > 1 << 22:
        raise ValueError("row space too large to enumerate")
    coeffs = np.zeros((F.q ** k, k), dtype=np.int64)
    t = np.arange(F.q ** k)
    for i in range(k):
        coeffs[:, i] = t % F.q
        t = t // F.q
    return matmul(F, coeffs, basis)


def prime_restriction(F: FiniteField, M: np.ndarray) -> np.ndarray:
    """Matrix of the same map written over the prime subfield.

    An m x n matrix over F = F_{p^d} acts on row vectors; reading each
    coordinate through its digit expansion gives an F_p-linear map on
    vectors of length m*d.  Coordinate (i, t) of the restricted space
    stands for w^t * e_i with w the residue of the tower generator, so
    the restricted matrix row (i*d + t) holds the digits of w^t * M[i].
    """
    M = np.asarray(M, dtype=np.int64)
    m, n = M.shape
    d = F.d
    if d == 1:
        return M.copy()
    omega_powers = np.array([F.p ** t for t in range(d)], dtype=np.int64)
    scaled = F.MUL[M[:, :, None], omega_powers[None, None, :]]
    digits = F.DIGITS[scaled]
    return np.transpose(digits, (0, 2, 1, 3)).reshape(m * d, n * d)
