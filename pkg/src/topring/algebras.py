"""Finite-dimensional associative unital algebras over a finite field.

An algebra of dimension n over F is stored by its structure constants:
``c[i, j, k]`` is the coefficient of basis vector e_k in the product
e_i * e_j, plus the coordinate row of the unit.  Elements are coordinate
rows (length-n numpy int64 arrays of encoded field elements).

The radical is computed by the characteristic-p filtration of divided
trace forms of p-th power maps on a faithful representation, with scalars
restricted to the prime field; a brute-force oracle (1 - a*x*b invertible
for all a, b) is provided for cross-checking at card <= 4096.
"""

from __future__ import annotations

import numpy as np

from topring import linalg, poly
from topring.fields import FiniteField, GF


class AlgebraError(ValueError):
    """Validation failure; .diagnostics lists the offending identities."""

    def __init__(self, message: str, diagnostics: list[str] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class StructureAlgebra:
    """Associative unital algebra given by structure constants.

    Attributes:
        field: coefficient FiniteField.
        dim: dimension n over field.
        c: structure constants, shape (n, n, n); c[i, j, k] is the e_k
            coefficient of e_i * e_j.
        unit: coordinate row of the multiplicative unit.
        rep: optional faithful representation used for radical computations;
            a stack (n, m, m) of column-convention matrices, multiplicative
            on basis products.  Defaults to the (transposed) left regular
            representation.
    """

    def __init__(
        self,
        field: FiniteField,
        c: np.ndarray,
        unit: np.ndarray,
        check: bool = True,
        rep: np.ndarray | None = None,
    ):
        self.field = field
        self.c = np.ascontiguousarray(np.asarray(c, dtype=np.int64))
        self.unit = np.asarray(unit, dtype=np.int64).ravel()
        n = self.unit.shape[0]
        if self.c.shape != (n, n, n):
            raise AlgebraError(f"structure constants shape {self.c.shape} != {(n, n, n)}")
        if self.c.size and (self.c.min() < 0 or self.c.max() >= field.q):
            raise AlgebraError("structure constant out of field range")
        if self.unit.size and (self.unit.min() < 0 or self.unit.max() >= field.q):
            raise AlgebraError("unit coordinate out of field range")
        self.dim = n
        self.rep = rep
        self._gens: list[int] | None = None
        if check:
            problems = self.diagnostics()
            if problems:
                raise AlgebraError(
                    f"not a unital associative algebra ({len(problems)} failures)", problems
                )

    # -- multiplication -----------------------------------------------------

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        F = self.field
        t = F.MUL[np.asarray(x)[:, None], np.asarray(y)[None, :]]
        return F.fsum(F.MUL[t[:, :, None], self.c], axis=(0, 1))

    def mul_rows(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Rowwise products of two stacks of elements, shape (m, n)."""
        F = self.field
        X = np.asarray(X, dtype=np.int64)
        Y = np.asarray(Y, dtype=np.int64)
        t = F.MUL[X[:, :, None], Y[:, None, :]]
        out = np.zeros((X.shape[0], self.dim), dtype=np.int64)
        for k in range(self.dim):
            out[:, k] = F.fsum(F.MUL[t, self.c[None, :, :, k]], axis=(1, 2))
        return out

    def lmul_matrix(self, x: np.ndarray) -> np.ndarray:
        """L with x * y == y @ L for every row y."""
        F = self.field
        return F.fsum(F.MUL[np.asarray(x)[:, None, None], self.c], axis=0)

    def rmul_matrix(self, x: np.ndarray) -> np.ndarray:
        """R with y * x == y @ R for every row y."""
        F = self.field
        return F.fsum(F.MUL[np.asarray(x)[None, :, None], self.c], axis=1)

    def power(self, x: np.ndarray, k: int) -> np.ndarray:
        if k < 0:
            raise ValueError("negative power")
        acc = self.unit.copy()
        base = np.asarray(x, dtype=np.int64)
        while k > 0:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def inverse(self, x: np.ndarray) -> np.ndarray | None:
        """Two-sided inverse, or None.  Left inverses are two-sided here."""
        L = self.lmul_matrix(x)
        y = linalg.solve_left(self.field, L, self.unit)
        if y is None:
            return None
        if not np.array_equal(self.mul(y, x), self.unit):
            return None
        return y

    def is_unit_element(self, x: np.ndarray) -> bool:
        return self.inverse(x) is not None

    def is_idempotent(self, x: np.ndarray) -> bool:
        return np.array_equal(self.mul(x, x), np.asarray(x))

    def is_commutative(self) -> bool:
        return np.array_equal(self.c, np.swapaxes(self.c, 0, 1))

    # -- enumeration ----------------------------------------------------------

    def cardinality(self) -> int:
        return self.field.q ** self.dim

    def all_elements(self, cap: int = 1 << 22) -> np.ndarray:
        if self.cardinality() > cap:
            raise ValueError(f"algebra too large to enumerate ({self.cardinality()})")
        return linalg.enumerate_row_space(self.field, np.eye(self.dim, dtype=np.int64))

    def random_element(self, rng) -> np.ndarray:
        return np.array([rng.randrange(self.field.q) for _ in range(self.dim)], dtype=np.int64)

    def encode(self, x: np.ndarray) -> int:
        """Element row to one integer, base q."""
        return int(np.asarray(x, dtype=object) @ (self.field.q ** np.arange(self.dim, dtype=object)))

    # -- structure ------------------------------------------------------------

    def diagnostics(self) -> list[str]:
        """Empty iff this is a unital associative algebra."""
        F = self.field
        n = self.dim
        problems = []
        if n == 0:
            return ["dimension zero"]
        c = self.c
        # (e_i e_j) e_k vs e_i (e_j e_k), all triples at once
        left = np.zeros((n, n, n, n), dtype=np.int64)
        right = np.zeros((n, n, n, n), dtype=np.int64)
        for m in range(n):
            left = F.ADD[left, F.MUL[c[:, :, m][:, :, None, None], c[m, :, :][None, None, :, :]]]
            right = F.ADD[right, F.MUL[c[:, :, m][None, :, :, None], c[:, m, :][:, None, None, :]]]
        bad = np.argwhere((left != right).any(axis=3))
        for i, j, k in bad[:16]:
            problems.append(f"associativity fails at (e_{i}, e_{j}, e_{k})")
        if len(bad) > 16:
            problems.append(f"... and {len(bad) - 16} more associativity failures")
        L = self.lmul_matrix(self.unit)
        R = self.rmul_matrix(self.unit)
        eye = np.eye(n, dtype=np.int64)
        if not np.array_equal(L, eye):
            problems.append("unit fails as left identity")
        if not np.array_equal(R, eye):
            problems.append("unit fails as right identity")
        return problems

    def center_basis(self) -> np.ndarray:
        """Canonical basis of the center."""
        F = self.field
        blocks = []
        for j in range(self.dim):
            ej = np.zeros(self.dim, dtype=np.int64)
            ej[j] = 1
            blocks.append(linalg.sub(F, self.rmul_matrix(ej), self.lmul_matrix(ej)))
        M = np.hstack(blocks)
        return linalg.left_null_basis(F, M)

    def min_poly(self, x: np.ndarray) -> poly.Poly:
        """Monic minimal polynomial of x over the base field."""
        F = self.field
        rows = [self.unit.copy()]
        cur = self.unit.copy()
        for k in range(1, self.dim + 1):
            cur = self.mul(cur, x)
            A = np.vstack(rows)
            sol = linalg.solve_left(F, A, cur)
            if sol is not None:
                coeffs = np.zeros(k + 1, dtype=np.int64)
                coeffs[:k] = F.NEG[sol]
                coeffs[k] = 1
                return poly.norm(coeffs)
            rows.append(cur.copy())
        raise AssertionError("minimal polynomial must exist within dim+1 powers")

    def evaluate_poly(self, f: poly.Poly, x: np.ndarray) -> np.ndarray:
        """f(x) inside the algebra (constant term times the unit)."""
        acc = np.zeros(self.dim, dtype=np.int64)
        for c in reversed(list(np.asarray(f, dtype=np.int64))):
            acc = self.mul(acc, x)
            if c:
                acc = linalg.add(self.field, acc, linalg.scale(self.field, int(c), self.unit))
        return acc

    def generators(self) -> list[int]:
        """Indices of a small generating set (greedy, deterministic)."""
        if self._gens is not None:
            return self._gens
        F = self.field
        gens: list[int] = []
        span = subalgebra_closure(self, self.unit[None, :])
        for i in range(self.dim):
            if span.shape[0] == self.dim:
                break
            ei = np.zeros(self.dim, dtype=np.int64)
            ei[i] = 1
            if not linalg.in_row_space(F, span, ei):
                gens.append(i)
                rows = [self.unit] + [_basis_vec(self.dim, g) for g in gens]
                span = subalgebra_closure(self, np.vstack(rows))
        self._gens = gens
        return gens

    def generator_elements(self) -> np.ndarray:
        gens = self.generators()
        out = np.zeros((len(gens), self.dim), dtype=np.int64)
        for r, i in enumerate(gens):
            out[r, i] = 1
        return out

    def __repr__(self) -> str:
        return f"StructureAlgebra(dim={self.dim} over {self.field})"


def _basis_vec(n: int, i: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def validate_algebra(field: FiniteField, c: np.ndarray, unit: np.ndarray) -> StructureAlgebra:
    """Construct and fully check a StructureAlgebra; raises AlgebraError
    with per-identity diagnostics when the data fails associativity or
    the unit law."""
    return StructureAlgebra(field, c, unit, check=True)


def subalgebra_closure(A: StructureAlgebra, rows: np.ndarray) -> np.ndarray:
    """Canonical basis of the smallest subspace containing rows and closed
    under multiplication (not necessarily unital)."""
    F = A.field
    basis = linalg.row_space_basis(F, np.asarray(rows, dtype=np.int64))
    while True:
        if basis.shape[0] == 0:
            return basis
        prods = []
        for x in basis:
            for y in basis:
                prods.append(A.mul(x, y))
        new = linalg.row_space_basis(F, np.vstack([basis] + [np.vstack(prods)]))
        if new.shape[0] == basis.shape[0]:
            return new
        basis = new


# ---------------------------------------------------------------------------
# Ideals as subspaces
# ---------------------------------------------------------------------------


class SubspaceIdeal:
    """A subspace of an algebra flagged as a left / right / two-sided ideal.

    The basis is canonical (RREF), so two ideals of the same algebra are
    equal iff their basis arrays are equal.
    """

    def __init__(self, algebra: StructureAlgebra, basis: np.ndarray, side: str = "two",
                 check: bool = True):
        if side not in ("left", "right", "two"):
            raise ValueError(f"bad side {side!r}")
        self.algebra = algebra
        self.basis = linalg.row_space_basis(algebra.field, np.asarray(basis, dtype=np.int64).reshape(-1, algebra.dim))
        self.side = side
        if check:
            bad = self._closure_failures()
            if bad:
                raise AlgebraError(f"subspace is not a {side} ideal", bad)

    def _closure_failures(self) -> list[str]:
        A = self.algebra
        F = A.field
        bad = []
        for r, h in enumerate(self.basis):
            for j in range(A.dim):
                ej = _basis_vec(A.dim, j)
                if self.side in ("right", "two"):
                    if not linalg.in_row_space(F, self.basis, A.mul(h, ej)):
                        bad.append(f"h_{r} * e_{j} escapes")
                if self.side in ("left", "two"):
                    if not linalg.in_row_space(F, self.basis, A.mul(ej, h)):
                        bad.append(f"e_{j} * h_{r} escapes")
        return bad

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, v: np.ndarray) -> bool:
        return linalg.in_row_space(self.algebra.field, self.basis, np.asarray(v))

    def contains_ideal(self, other: "SubspaceIdeal") -> bool:
        return all(self.contains(h) for h in other.basis)

    def is_zero(self) -> bool:
        return self.dim == 0

    def add_ideal(self, other: "SubspaceIdeal") -> "SubspaceIdeal":
        if self.side != other.side and "two" not in (self.side, other.side):
            raise AlgebraError("cannot sum a left ideal with a right ideal")
        side = self.side if other.side == "two" else other.side
        basis = linalg.sum_row_spaces(self.algebra.field, self.basis, other.basis)
        return SubspaceIdeal(self.algebra, basis, side=side, check=False)

    def product_with(self, other: "SubspaceIdeal") -> np.ndarray:
        """Canonical basis of span{h * k : h in self, k in other}."""
        A = self.algebra
        prods = [A.mul(h, k) for h in self.basis for k in other.basis]
        if not prods:
            return np.zeros((0, A.dim), dtype=np.int64)
        return linalg.row_space_basis(A.field, np.vstack(prods))

    def nilpotency_index(self, cap: int | None = None) -> int:
        """Smallest k with I^k = 0; raises AlgebraError if not nilpotent."""
        A = self.algebra
        cap = cap if cap is not None else A.dim + 1
        cur = self.basis
        k = 1
        while cur.shape[0]:
            if k > cap:
                raise AlgebraError("ideal is not nilpotent within the dimension bound")
            prods = [A.mul(h, v) for h in self.basis for v in cur]
            cur = linalg.row_space_basis(A.field, np.vstack(prods)) if prods else cur[:0]
            k += 1
        return k

    def elements(self) -> np.ndarray:
        return linalg.enumerate_row_space(self.algebra.field, self.basis)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubspaceIdeal)
            and self.algebra is other.algebra
            and np.array_equal(self.basis, other.basis)
        )

    def __repr__(self) -> str:
        return f"SubspaceIdeal(dim={self.dim}, side={self.side})"


def ideal_from_generators(A: StructureAlgebra, gens: np.ndarray, side: str = "two") -> SubspaceIdeal:
    """Smallest ideal of the given side containing the generator rows."""
    F = A.field
    basis = linalg.row_space_basis(F, np.asarray(gens, dtype=np.int64).reshape(-1, A.dim))
    while True:
        rows = [basis] if basis.shape[0] else []
        add_rows = []
        for h in basis:
            for j in range(A.dim):
                ej = _basis_vec(A.dim, j)
                if side in ("right", "two"):
                    add_rows.append(A.mul(h, ej))
                if side in ("left", "two"):
                    add_rows.append(A.mul(ej, h))
        if not add_rows:
            return SubspaceIdeal(A, basis, side=side, check=False)
        new = linalg.row_space_basis(F, np.vstack(rows + [np.vstack(add_rows)]))
        if new.shape[0] == basis.shape[0]:
            return SubspaceIdeal(A, new, side=side, check=True)
        basis = new


def zero_ideal(A: StructureAlgebra) -> SubspaceIdeal:
    return SubspaceIdeal(A, np.zeros((0, A.dim), dtype=np.int64), side="two", check=False)


def unit_ideal(A: StructureAlgebra) -> SubspaceIdeal:
    return SubspaceIdeal(A, np.eye(A.dim, dtype=np.int64), side="two", check=False)


# ---------------------------------------------------------------------------
# Quotients
# ---------------------------------------------------------------------------


def quotient(A: StructureAlgebra, I: SubspaceIdeal):
    """Quotient algebra by a two-sided ideal.

    Returns:
        (Q, proj, section): Q is the quotient, proj is (dim A, dim Q) with
        class(v) == v @ proj, and section is (dim Q, dim A) choosing
        standard-coordinate representatives (a right inverse of proj).
    """
    if I.side != "two":
        raise AlgebraError("quotient needs a two-sided ideal")
    F = A.field
    n = A.dim
    B, pivots = linalg.rref(F, I.basis)
    nonpivots = [j for j in range(n) if j not in pivots]
    m = len(nonpivots)
    # e_pc == e_pc - B[r] mod I, and that difference is supported on the
    # non-pivot columns because B is fully reduced; other e_j are their own
    # representatives
    red = np.eye(n, dtype=np.int64)
    for r, pc in enumerate(pivots):
        red[pc] = F.NEG[B[r]]
        red[pc, pc] = 0
    proj = red[:, nonpivots]
    section = np.zeros((m, n), dtype=np.int64)
    for k, j in enumerate(nonpivots):
        section[k, j] = 1
    cq = np.zeros((m, m, m), dtype=np.int64)
    for a in range(m):
        for b in range(m):
            cq[a, b] = linalg.matvec(F, A.mul(section[a], section[b]), proj)
    unit_q = linalg.matvec(F, A.unit, proj)
    Q = StructureAlgebra(F, cq, unit_q, check=True)
    # surjective unital homomorphism with kernel exactly I, verified
    if I.dim and np.any(linalg.matmul(F, I.basis, proj)):
        raise AlgebraError("projection does not kill the ideal")
    for i in range(n):
        for j in range(n):
            ei, ej = _basis_vec(n, i), _basis_vec(n, j)
            lhs = linalg.matvec(F, A.mul(ei, ej), proj)
            rhs = Q.mul(linalg.matvec(F, ei, proj), linalg.matvec(F, ej, proj))
            if not np.array_equal(lhs, rhs):
                raise AlgebraError(f"projection not multiplicative at ({i},{j})")
    if linalg.rank(F, proj) != m:
        raise AlgebraError("projection is not surjective")
    return Q, proj, section


# ---------------------------------------------------------------------------
# Radical
# ---------------------------------------------------------------------------


def _scalar_mul_matrices(F: FiniteField) -> np.ndarray:
    """mulmat[a] is the d x d prime-field matrix of multiplication by a."""
    d = F.d
    out = np.zeros((F.q, d, d), dtype=np.int64)
    for t in range(d):
        out[:, :, t] = F.DIGITS[F.MUL[np.arange(F.q), F.p ** t]]
    return out


def _blowup(F: FiniteField, M: np.ndarray, mulmat: np.ndarray) -> np.ndarray:
    """F_q-matrix (m, m) to the F_p-matrix (m*d, m*d), column convention."""
    m = M.shape[0]
    d = F.d
    blocks = mulmat[M]  # (m, m, d, d)
    return blocks.transpose(0, 2, 1, 3).reshape(m * d, m * d)


def _batch_power_mod(W: np.ndarray, e: int, m: int) -> np.ndarray:
    """W^e mod m for a stack (T, N, N) of integer matrices."""
    T, N = W.shape[0], W.shape[1]
    result = np.broadcast_to(np.eye(N, dtype=np.int64), (T, N, N)).copy()
    base = W % m
    e = int(e)
    while e > 0:
        if e & 1:
            result = np.matmul(result, base) % m
        base = np.matmul(base, base) % m
        e >>= 1
    return result


def radical(A: StructureAlgebra, verify_quotient: bool = True) -> SubspaceIdeal:
    """Largest nilpotent two-sided ideal (the Jacobson radical).

    Computed over the prime field by iterated kernels of the divided trace
    forms (x, y) -> tr((XY)^(p^i)) / p^i mod p on a faithful representation,
    using exact integer lifts.  The result is verified to be a nilpotent
    two-sided ideal whose quotient has zero radical.
    """
    F = A.field
    p, d, n = F.p, F.d, A.dim
    if n == 0:
        return zero_ideal(A)
    # faithful representation, column convention, multiplicative
    if A.rep is not None:
        rep_q = np.asarray(A.rep, dtype=np.int64)
    else:
        rep_q = np.stack([A.lmul_matrix(_basis_vec(n, i)).T for i in range(n)])
    mulmat = _scalar_mul_matrices(F)
    N = rep_q.shape[1] * d
    # F_p-basis (i, t) -> representation matrix of omega^t e_i
    pmats = np.zeros((n * d, N, N), dtype=np.int64)
    for i in range(n):
        for t in range(d):
            pmats[i * d + t] = _blowup(F, F.MUL[p ** t, rep_q[i]], mulmat)
    Fp = GF(p)
    J = np.eye(n * d, dtype=np.int64)  # rows: F_p coordinates w.r.t. (i, t)
    i_level = 0
    while p ** i_level <= N:
        m_dim = J.shape[0]
        if m_dim == 0:
            break
        mats = (J.astype(np.int64) @ pmats.reshape(n * d, N * N)).reshape(m_dim, N, N) % p
        modulus = p ** (i_level + 1)
        gram = np.zeros((m_dim, m_dim), dtype=np.int64)
        for s in range(m_dim):
            prods = np.matmul(mats[s][None, :, :], mats[s:]) % modulus
            powered = _batch_power_mod(prods, p ** i_level, modulus)
            tr = powered.trace(axis1=1, axis2=2) % modulus
            if np.any(tr % (p ** i_level)):
                raise AssertionError("divided trace not divisible; filtration broken")
            g = (tr // (p ** i_level)) % p
            gram[s, s:] = g
            gram[s:, s] = g
        kernel = linalg.left_null_basis(Fp, gram)
        J = linalg.row_space_basis(Fp, (kernel @ J) % p)
        i_level += 1
    # back to F_q coordinates
    if J.shape[0] == 0:
        rad = zero_ideal(A)
    else:
        vecs = np.zeros((J.shape[0], n), dtype=np.int64)
        for r, u in enumerate(J):
            vecs[r] = F.from_digits(u.reshape(n, d))
        # F_q-stability: multiplying by the field generator stays inside
        if d > 1:
            omega = p
            for v in vecs:
                w = F.MUL[omega, v]
                wdig = F.DIGITS[w].reshape(-1)
                if not linalg.in_row_space(Fp, J, wdig):
                    raise AssertionError("radical candidate is not F_q-stable")
        rad = SubspaceIdeal(A, linalg.row_space_basis(F, vecs), side="two", check=True)
    rad.nilpotency_index()
    if verify_quotient and not rad.is_zero():
        Q, _, _ = quotient(A, rad)
        if not radical(Q, verify_quotient=False).is_zero():
            raise AssertionError("quotient by the computed radical is not semisimple")
    return rad


def radical_bruteforce(A: StructureAlgebra) -> np.ndarray:
    """Canonical basis of {x : 1 - a*x*b invertible for all a, b}.

    Exhaustive by definition; only available for cardinality <= 4096.
    The products a*x*b are enumerated as a union of subspaces (a*x ranges
    over the image of right multiplication by x, then y*b over the image
    of left multiplication by y), which changes the cost, not the set.
    """
    F = A.field
    if A.cardinality() > 4096:
        raise ValueError("brute-force radical oracle capped at 4096 elements")
    n = A.dim
    members = []
    invertibility_cache: dict[int, bool] = {}

    def one_minus_invertible(z: np.ndarray) -> bool:
        key = A.encode(z)
        hit = invertibility_cache.get(key)
        if hit is None:
            u = linalg.sub(F, A.unit, z)
            hit = linalg.rank(F, A.lmul_matrix(u)) == n
            invertibility_cache[key] = hit
        return hit

    for x in A.all_elements():
        ax_basis = linalg.row_space_basis(F, A.rmul_matrix(x))
        ok = True
        for y in linalg.enumerate_row_space(F, ax_basis):
            ya_basis = linalg.row_space_basis(F, A.lmul_matrix(y))
            for z in linalg.enumerate_row_space(F, ya_basis):
                if not one_minus_invertible(z):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            members.append(x)
    basis = linalg.row_space_basis(F, np.vstack(members)) if members else np.zeros((0, n), dtype=np.int64)
    # the member set must be exactly the subspace it spans
    if F.q ** basis.shape[0] != len(members):
        raise AssertionError("oracle member set is not a subspace")
    return basis


# ---------------------------------------------------------------------------
# Inversion inside 1 + H
# ---------------------------------------------------------------------------


def invert_in_one_plus_H(A: StructureAlgebra, u: np.ndarray, H: SubspaceIdeal) -> np.ndarray:
    """Inverse of u with u - 1 in a nil ideal H, by the finite geometric series.

    Raises AlgebraError if u - 1 is outside H or H fails to be nil on it.
    """
    F = A.field
    h = linalg.sub(F, np.asarray(u, dtype=np.int64), A.unit)
    if not H.contains(h):
        raise AlgebraError("u - 1 is not in H")
    acc = A.unit.copy()
    term = A.unit.copy()
    neg_h = F.NEG[h]
    for _ in range(A.dim + 1):
        term = A.mul(term, neg_h)
        if not term.any():
            break
        acc = linalg.add(F, acc, term)
    else:
        raise AlgebraError("H is not nil on u - 1")
    if not np.array_equal(A.mul(u, acc), A.unit) or not np.array_equal(A.mul(acc, u), A.unit):
        raise AssertionError("geometric series failed to invert u")
    return acc


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def matrix_algebra(F: FiniteField, k: int) -> StructureAlgebra:
    """Mat_k(F) with basis E_{ab}, index a*k + b."""
    n = k * k
    c = np.zeros((n, n, n), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            for b2 in range(k):
                for d2 in range(k):
                    if b == b2:
                        c[a * k + b, b2 * k + d2, a * k + d2] = 1
    unit = np.zeros(n, dtype=np.int64)
    for a in range(k):
        unit[a * k + a] = 1
    return StructureAlgebra(F, c, unit, check=False)


def poly_quotient_algebra(F: FiniteField, f: poly.Poly) -> StructureAlgebra:
    """F[x]/(f), basis 1, x, ..., x^(deg f - 1)."""
    f = poly.monic(F, poly.norm(f))
    n = poly.deg(f)
    if n < 1:
        raise ValueError("modulus must have degree >= 1")
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            xi = np.zeros(i + j + 1, dtype=np.int64)
            xi[i + j] = 1
            r = poly.mod(F, xi, f)
            c[i, j, : len(r)] = r
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    return StructureAlgebra(F, c, unit, check=False)


def truncated_poly_algebra(F: FiniteField, n: int) -> StructureAlgebra:
    """F[x]/(x^n)."""
    f = np.zeros(n + 1, dtype=np.int64)
    f[n] = 1
    return poly_quotient_algebra(F, f)


def field_extension_algebra(F: FiniteField, d: int) -> StructureAlgebra:
    """F_{q^d} as an F_q-algebra (via the default irreducible)."""
    from topring.fields import default_modulus

    if F.d == 1:
        mod = np.array(default_modulus(F.p, d), dtype=np.int64)
        return poly_quotient_algebra(F, mod)
    # search a monic irreducible of degree d over F_q
    for tail in range(F.q ** d):
        coeffs = []
        t = tail
        for _ in range(d):
            coeffs.append(t % F.q)
            t //= F.q
        f = poly.norm(np.array(coeffs + [1], dtype=np.int64))
        if poly.deg(f) == d and poly.is_irreducible(F, f):
            return poly_quotient_algebra(F, f)
    raise AssertionError("no irreducible polynomial found")


def field_algebra(F: FiniteField) -> StructureAlgebra:
    """F itself as a one-dimensional algebra."""
    return StructureAlgebra(F, np.ones((1, 1, 1), dtype=np.int64), np.ones(1, dtype=np.int64), check=False)


def cyclic_group_algebra(F: FiniteField, m: int) -> StructureAlgebra:
    """Group algebra F[C_m], basis g^0, ..., g^(m-1)."""
    c = np.zeros((m, m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            c[i, j, (i + j) % m] = 1
    unit = np.zeros(m, dtype=np.int64)
    unit[0] = 1
    return StructureAlgebra(F, c, unit, check=False)


def upper_triangular_algebra(F: FiniteField, k: int) -> StructureAlgebra:
    """Upper triangular k x k matrices over F."""
    pairs = [(a, b) for a in range(k) for b in range(a, k)]
    idx = {ab: t for t, ab in enumerate(pairs)}
    n = len(pairs)
    c = np.zeros((n, n, n), dtype=np.int64)
    for (a, b), s in idx.items():
        for (b2, d2), t in idx.items():
            if b == b2:
                c[s, t, idx[(a, d2)]] = 1
    unit = np.zeros(n, dtype=np.int64)
    for a in range(k):
        unit[idx[(a, a)]] = 1
    return StructureAlgebra(F, c, unit, check=False)


def product_algebra(A: StructureAlgebra, B: StructureAlgebra) -> StructureAlgebra:
    """Direct product with block coordinates (A first)."""
    if A.field != B.field:
        raise ValueError("factors must share the base field")
    n, m = A.dim, B.dim
    c = np.zeros((n + m, n + m, n + m), dtype=np.int64)
    c[:n, :n, :n] = A.c
    c[n:, n:, n:] = B.c
    unit = np.concatenate([A.unit, B.unit])
    return StructureAlgebra(A.field, c, unit, check=False)


def opposite_algebra(A: StructureAlgebra) -> StructureAlgebra:
    return StructureAlgebra(A.field, np.swapaxes(A.c, 0, 1), A.unit, check=False)


def tensor_algebra(A: StructureAlgebra, B: StructureAlgebra) -> StructureAlgebra:
    """Tensor product over the base field; basis pair (i, j) has index
    i * B.dim + j.  Matrix algebras over commutative coefficient algebras
    are tensor products Mat_k(F) (x) R."""
    if A.field != B.field:
        raise ValueError("factors must share the base field")
    F = A.field
    nA, nB = A.dim, B.dim
    c = F.MUL[
        A.c[:, None, :, None, :, None],
        B.c[None, :, None, :, None, :],
    ].reshape(nA * nB, nA * nB, nA * nB)
    unit = F.MUL[A.unit[:, None], B.unit[None, :]].reshape(nA * nB)
    return StructureAlgebra(F, c, unit, check=False)


def basis_change(A: StructureAlgebra, P: np.ndarray) -> StructureAlgebra:
    """The same algebra written in the basis whose rows are P (invertible)."""
    F = A.field
    Pinv = linalg.inverse(F, P)
    if Pinv is None:
        raise ValueError("basis change must be invertible")
    n = A.dim
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            c[i, j] = linalg.matvec(F, A.mul(P[i], P[j]), Pinv)
    unit = linalg.matvec(F, A.unit, Pinv)
    return StructureAlgebra(F, c, unit, check=False)


def subalgebra_structure(A: StructureAlgebra, basis: np.ndarray, unit_row: np.ndarray):
    """Subalgebra on the given basis rows (must be multiplicatively closed).

    Returns:
        (B, embed): B with B.dim == len(basis) and embed mapping B rows to
        A rows (embed == basis), such that embedding is multiplicative and
        sends B.unit to unit_row.
    """
    F = A.field
    basis = np.asarray(basis, dtype=np.int64)
    m = basis.shape[0]
    c = np.zeros((m, m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            prod = A.mul(basis[i], basis[j])
            sol = linalg.solve_left(F, basis, prod)
            if sol is None:
                raise AlgebraError("basis is not multiplicatively closed")
            c[i, j] = sol
    u = linalg.solve_left(F, basis, np.asarray(unit_row, dtype=np.int64))
    if u is None:
        raise AlgebraError("unit is outside the subalgebra")
    B = StructureAlgebra(F, c, u, check=False)
    return B, basis


def peirce_corner(A: StructureAlgebra, e: np.ndarray):
    """Corner algebra e*A*e with unit e.

    Returns:
        (B, embed) as in subalgebra_structure.
    """
    if not A.is_idempotent(e):
        raise AlgebraError("corner needs an idempotent")
    F = A.field
    rows = [A.mul(A.mul(e, _basis_vec(A.dim, j)), e) for j in range(A.dim)]
    basis = linalg.row_space_basis(F, np.vstack(rows))
    return subalgebra_structure(A, basis, np.asarray(e, dtype=np.int64))
