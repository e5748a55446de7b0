"""Finite modules over structure-constant algebras.

A module of dimension m is stored as one m x m action matrix per algebra
basis element.  Vectors are rows; a right module acts by v @ act(a), a left
module by v @ act(a).T, and in both conventions the map a -> act(a) is a
homomorphism into the matrix algebra, which is what validation checks.

The layer builds up to three verdict-style operations used by the tower
and endomorphism layers: Krull-Schmidt decomposition through idempotent
lifting in the endomorphism algebra, local T-nilpotency certificates via
the Harada-Sai composition bound, and witness searches for strictly
descending cyclic chains and non-vanishing nonisomorphism composites.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from topring import linalg
from topring.algebras import (
    AlgebraError,
    StructureAlgebra,
    SubspaceIdeal,
    matrix_algebra,
    quotient,
    radical,
    subalgebra_structure,
)
from topring.lifting import lift_family_from_quotient
from topring.wedderburn import wedderburn


class FiniteModule:
    """Finite module over a StructureAlgebra.

    Attributes:
        algebra: the acting algebra.
        side: "right" (v*a = v @ act(a)) or "left" (a*v = v @ act(a).T).
        dim: dimension over the algebra's base field.
        action: (algebra.dim, dim, dim) stack, one matrix per basis element.
    """

    def __init__(self, algebra: StructureAlgebra, action: np.ndarray, side: str = "right",
                 check: bool = True):
        if side not in ("left", "right"):
            raise ValueError(f"bad side {side!r}")
        self.algebra = algebra
        self.action = np.ascontiguousarray(np.asarray(action, dtype=np.int64))
        if self.action.ndim != 3 or self.action.shape[0] != algebra.dim:
            raise AlgebraError(f"action stack must be ({algebra.dim}, m, m)")
        if self.action.shape[1] != self.action.shape[2]:
            raise AlgebraError("action matrices must be square")
        self.side = side
        self.dim = self.action.shape[1]
        if check:
            problems = self.diagnostics()
            if problems:
                raise AlgebraError(f"not a module ({len(problems)} failures)", problems)

    def diagnostics(self) -> list[str]:
        F = self.algebra.field
        A = self.algebra
        out = []
        m = self.dim
        if m == 0:
            return []
        unit_mat = self.act(A.unit)
        if not np.array_equal(unit_mat, np.eye(m, dtype=np.int64)):
            out.append("unit does not act as identity")
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = self.act(A.c[i, j])
                rhs = linalg.matmul(F, self.action[i], self.action[j])
                if not np.array_equal(lhs, rhs):
                    out.append(f"action not multiplicative at (e_{i}, e_{j})")
                    if len(out) > 16:
                        return out
        return out

    def act(self, x: np.ndarray) -> np.ndarray:
        """Matrix of the algebra element x (side-independent storage form)."""
        F = self.algebra.field
        return F.fsum(F.MUL[np.asarray(x, dtype=np.int64)[:, None, None], self.action], axis=0)

    def eff(self, x: np.ndarray) -> np.ndarray:
        """Matrix E with 'x acting on v' == v @ E, honoring the side."""
        M = self.act(x)
        return M if self.side == "right" else M.T

    def apply(self, v: np.ndarray, x: np.ndarray) -> np.ndarray:
        return linalg.matvec(self.algebra.field, np.asarray(v, dtype=np.int64), self.eff(x))

    def eff_basis(self) -> np.ndarray:
        return self.action if self.side == "right" else np.swapaxes(self.action, 1, 2)

    def cardinality(self) -> int:
        return self.algebra.field.q ** self.dim

    def all_elements(self) -> np.ndarray:
        return linalg.enumerate_row_space(self.algebra.field, np.eye(self.dim, dtype=np.int64))

    def __repr__(self) -> str:
        return f"FiniteModule(dim={self.dim}, side={self.side}, over dim {self.algebra.dim})"


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def right_regular_module(A: StructureAlgebra) -> FiniteModule:
    action = np.stack([A.rmul_matrix(_bv(A.dim, i)) for i in range(A.dim)])
    return FiniteModule(A, action, side="right", check=False)


def left_regular_module(A: StructureAlgebra) -> FiniteModule:
    action = np.stack([A.lmul_matrix(_bv(A.dim, i)).T for i in range(A.dim)])
    return FiniteModule(A, action, side="left", check=False)


def _bv(n: int, i: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def submodule_module(M: FiniteModule, basis: np.ndarray):
    """Module structure on an action-closed subspace.

    Returns:
        (N, embed): N of dimension k, embed (k, M.dim) with embed rows the
        canonical basis; the inclusion intertwines the actions.
    """
    F = M.algebra.field
    basis = linalg.row_space_basis(F, np.asarray(basis, dtype=np.int64).reshape(-1, M.dim))
    k = basis.shape[0]
    eff = M.eff_basis()
    sub_eff = np.zeros((M.algebra.dim, k, k), dtype=np.int64)
    for i in range(M.algebra.dim):
        moved = linalg.matmul(F, basis, eff[i])
        for r in range(k):
            coords = linalg.solve_left(F, basis, moved[r])
            if coords is None:
                raise AlgebraError("subspace is not action-closed")
            sub_eff[i, r] = coords
    action = sub_eff if M.side == "right" else np.swapaxes(sub_eff, 1, 2)
    return FiniteModule(M.algebra, action, side=M.side, check=False), basis


def quotient_module(M: FiniteModule, basis: np.ndarray):
    """Quotient by an action-closed subspace.

    Returns:
        (Q, proj, section) with class(v) == v @ proj and proj @ section...
        section a right inverse of proj choosing standard representatives.
    """
    F = M.algebra.field
    B, pivots = linalg.rref(F, np.asarray(basis, dtype=np.int64).reshape(-1, M.dim))
    nonpivots = [j for j in range(M.dim) if j not in pivots]
    k = len(nonpivots)
    red = np.eye(M.dim, dtype=np.int64)
    for r, pc in enumerate(pivots):
        red[pc] = F.NEG[B[r]]
        red[pc, pc] = 0
    proj = red[:, nonpivots]
    section = np.zeros((k, M.dim), dtype=np.int64)
    for t, j in enumerate(nonpivots):
        section[t, j] = 1
    eff = M.eff_basis()
    q_eff = np.zeros((M.algebra.dim, k, k), dtype=np.int64)
    for i in range(M.algebra.dim):
        q_eff[i] = linalg.matmul(F, linalg.matmul(F, section, eff[i]), proj)
    action = q_eff if M.side == "right" else np.swapaxes(q_eff, 1, 2)
    Q = FiniteModule(M.algebra, action, side=M.side, check=False)
    for i in range(M.algebra.dim):
        lhs = linalg.matmul(F, eff[i], proj)
        rhs = linalg.matmul(F, proj, q_eff[i])
        if not np.array_equal(lhs, rhs):
            raise AlgebraError("projection does not intertwine the action")
    return Q, proj, section


def direct_sum(modules: list[FiniteModule]):
    """Direct sum with injection and projection matrices.

    Returns:
        (S, injections, projections): inj[z] is (dim_z, dim_S), proj[z] is
        (dim_S, dim_z), inj @ proj are orthogonal idempotents summing to 1.
    """
    if not modules:
        raise ValueError("empty direct sum")
    A = modules[0].algebra
    side = modules[0].side
    if any(m.algebra is not A or m.side != side for m in modules):
        raise AlgebraError("summands must share algebra and side")
    total = sum(m.dim for m in modules)
    action = np.zeros((A.dim, total, total), dtype=np.int64)
    injections, projections = [], []
    off = 0
    for m in modules:
        action[:, off : off + m.dim, off : off + m.dim] = m.action
        inj = np.zeros((m.dim, total), dtype=np.int64)
        inj[:, off : off + m.dim] = np.eye(m.dim, dtype=np.int64)
        proj = inj.T.copy()
        injections.append(inj)
        projections.append(proj)
        off += m.dim
    return FiniteModule(A, action, side=side, check=False), injections, projections


# ---------------------------------------------------------------------------
# Submodules, radical, socle-side operations
# ---------------------------------------------------------------------------


def cyclic_submodule(M: FiniteModule, v: np.ndarray) -> np.ndarray:
    """Canonical basis of the orbit span v*A (or A*v on the left)."""
    F = M.algebra.field
    v = np.asarray(v, dtype=np.int64)
    rows = [M.apply(v, _bv(M.algebra.dim, i)) for i in range(M.algebra.dim)]
    return linalg.row_space_basis(F, np.vstack(rows))


def radical_of_module(M: FiniteModule, rad: SubspaceIdeal | None = None) -> np.ndarray:
    """Canonical basis of M*H(A) (right side; H(A)*M on the left).

    The quotient algebra A/H(A) is semisimple, so this subspace is the
    intersection of the maximal submodules; the exhaustive oracle
    maximal_submodules cross-checks that on small modules.
    """
    F = M.algebra.field
    if rad is None:
        rad = radical(M.algebra)
    if rad.dim == 0:
        return np.zeros((0, M.dim), dtype=np.int64)
    rows = [M.eff(h) for h in rad.basis]
    return linalg.row_space_basis(F, np.vstack(rows))


def top_of_module(M: FiniteModule, rad: SubspaceIdeal | None = None):
    """Quotient by the module radical: (top, proj, section)."""
    return quotient_module(M, radical_of_module(M, rad))


def radical_series(M: FiniteModule) -> list[np.ndarray]:
    """Bases of M >= M*H >= M*H^2 >= ... down to 0 (strictly descending)."""
    F = M.algebra.field
    rad = radical(M.algebra)
    series = [np.eye(M.dim, dtype=np.int64)]
    current = series[0]
    while current.shape[0]:
        rows = []
        for h in rad.basis:
            rows.append(linalg.matmul(F, current, M.eff(h)))
        nxt = linalg.row_space_basis(F, np.vstack(rows)) if rows else current[:0]
        if nxt.shape[0] == current.shape[0]:
            raise AssertionError("radical series stalled; algebra radical is not nil")
        series.append(nxt)
        current = nxt
    return series


def all_submodules(M: FiniteModule, cap: int = 4096) -> list[np.ndarray]:
    """Every submodule, as canonical bases: close cyclic submodules under
    pairwise sum.  Exhaustive oracle; cardinality-capped."""
    if M.cardinality() > 1024:
        raise ValueError("submodule enumeration capped at 1024 elements")
    F = M.algebra.field
    seen: dict[bytes, np.ndarray] = {}
    zero = np.zeros((0, M.dim), dtype=np.int64)
    seen[zero.tobytes()] = zero
    for v in M.all_elements():
        b = cyclic_submodule(M, v)
        seen.setdefault(b.tobytes(), b)
    frontier = list(seen.values())
    while frontier:
        fresh = []
        for X in frontier:
            for Y in list(seen.values()):
                S = linalg.sum_row_spaces(F, X, Y)
                key = S.tobytes()
                if key not in seen:
                    seen[key] = S
                    fresh.append(S)
                    if len(seen) > cap:
                        raise ValueError("submodule lattice exceeds enumeration cap")
        frontier = fresh
    return sorted(seen.values(), key=lambda b: (b.shape[0], b.tobytes()))


def maximal_submodules(M: FiniteModule) -> list[np.ndarray]:
    # proper submodules contained in no larger proper submodule
    subs = [b for b in all_submodules(M) if b.shape[0] < M.dim]
    out = []
    for b in subs:
        covered = any(
            o.shape[0] > b.shape[0]
            and all(linalg.in_row_space(M.algebra.field, o, r) for r in b)
            for o in subs
        )
        if not covered:
            out.append(b)
    return out


def intersection_of_maximals(M: FiniteModule) -> np.ndarray:
    F = M.algebra.field
    maxes = maximal_submodules(M)
    if not maxes:
        return np.zeros((0, M.dim), dtype=np.int64)
    acc = maxes[0]
    for b in maxes[1:]:
        acc = linalg.intersect_row_spaces(F, acc, b)
    return acc


# ---------------------------------------------------------------------------
# Hom spaces and endomorphism algebras
# ---------------------------------------------------------------------------


def hom_space(M: FiniteModule, N: FiniteModule) -> np.ndarray:
    """Basis (k, M.dim, N.dim) of the space of structure-compatible linear
    maps v -> v @ Phi, computed from a generating set of the algebra."""
    if M.algebra is not N.algebra and M.algebra != N.algebra:
        raise AlgebraError("modules must share the algebra")
    if M.side != N.side:
        raise AlgebraError("modules must share the side")
    F = M.algebra.field
    gens = M.algebra.generator_elements()
    if gens.shape[0] == 0:
        null = np.eye(M.dim * N.dim, dtype=np.int64)
    else:
        blocks = []
        eyeM = np.eye(M.dim, dtype=np.int64)
        eyeN = np.eye(N.dim, dtype=np.int64)
        for g in gens:
            GM, GN = M.eff(g), N.eff(g)
            K = linalg.sub(F, _fkron(F, GM, eyeN), _fkron(F, eyeM, GN.T))
            blocks.append(K)
        null = linalg.right_null_basis(F, np.vstack(blocks))
        null = linalg.row_space_basis(F, null)
    return null.reshape(-1, M.dim, N.dim)


def _fkron(F, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = F.MUL[A[:, None, :, None], B[None, :, None, :]]
    return out.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])


def endo_algebra(M: FiniteModule):
    """Endomorphism algebra in the opposite convention.

    The product phi * psi is the composite "apply phi, then psi", whose
    matrix in row convention is Phi @ Psi; M is then a right module over
    the result.  Returns (E, homs, M_over_E).

    The hom basis is canonical RREF, so coordinates of a product are read
    off at the pivot columns; closure and associativity hold because
    composites of structure-compatible maps are again such maps and matrix
    multiplication is associative.  A seeded sample of products (all of
    them for small endo algebras) is reconstructed and compared exactly as
    a tripwire against a corrupted hom basis."""
    F = M.algebra.field
    homs = hom_space(M, M)
    k = homs.shape[0]
    flat = homs.reshape(k, M.dim * M.dim)
    pivots = np.array([int(np.flatnonzero(flat[r])[0]) for r in range(k)], dtype=np.int64)
    c = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        # all composites homs[i] @ homs[j] in one batch
        prods = F.fsum(F.MUL[homs[i][None, :, :, None], homs[:, None, :, :]], axis=2)
        c[i] = prods.reshape(k, -1)[:, pivots]
    unit_flat = np.eye(M.dim, dtype=np.int64).reshape(-1)
    unit = unit_flat[pivots]
    checks = [(unit, unit_flat)]
    if k:
        if k * k <= 576:
            pairs = [(i, j) for i in range(k) for j in range(k)]
        else:
            rng = random.Random(k)
            pairs = [(rng.randrange(k), rng.randrange(k)) for _ in range(64)]
        for i, j in pairs:
            checks.append((c[i, j], linalg.matmul(F, homs[i], homs[j]).reshape(-1)))
    for coords, target in checks:
        if not np.array_equal(linalg.matvec(F, coords, flat), target):
            raise AlgebraError("hom space is not closed under composition")
    E = StructureAlgebra(F, c, unit, check=False, rep=homs)
    M_over_E = FiniteModule(E, homs, side="right", check=False)
    return E, homs, M_over_E


def is_isomorphism(M: FiniteModule, N: FiniteModule, Phi: np.ndarray) -> bool:
    return M.dim == N.dim and linalg.is_invertible(M.algebra.field, Phi)


def find_isomorphism(M: FiniteModule, N: FiniteModule, seed: int = 0,
                     sample_budget: int = 200) -> np.ndarray | None:
    """An invertible element of Hom(M, N), or None.

    Random sampling first; exhaustive fallback when the hom space has at
    most 4096 elements, which makes the None answer a proof."""
    if M.dim != N.dim:
        return None
    F = M.algebra.field
    homs = hom_space(M, N)
    k = homs.shape[0]
    if k == 0:
        return None
    rng = random.Random(seed)
    for _ in range(sample_budget):
        coeffs = np.array([rng.randrange(F.q) for _ in range(k)], dtype=np.int64)
        Phi = F.fsum(F.MUL[coeffs[:, None, None], homs], axis=0)
        if linalg.is_invertible(F, Phi):
            return Phi
    if F.q ** k <= 4096:
        for coeffs in linalg.enumerate_row_space(F, np.eye(k, dtype=np.int64)):
            Phi = F.fsum(F.MUL[coeffs[:, None, None], homs], axis=0)
            if linalg.is_invertible(F, Phi):
                return Phi
        return None
    return None


def modules_isomorphic(M: FiniteModule, N: FiniteModule, seed: int = 0) -> bool:
    return find_isomorphism(M, N, seed=seed) is not None


# ---------------------------------------------------------------------------
# Krull-Schmidt decomposition
# ---------------------------------------------------------------------------


@dataclass
class DecompositionCertificate:
    """Indecomposable decomposition with all the data needed to re-check it.

    idempotents[z] is the projector matrix onto summand z inside the
    ambient module (injections[z] composed with projections[z]); classes
    groups summand indices into isomorphism classes, with class_isos
    holding an explicit isomorphism from each member to its class
    representative (identity for the representative itself).
    endo_radicals[z] spans the non-units of summand z's endomorphism
    algebra; local_checked[z] records how that was verified."""

    module: FiniteModule
    summands: list[FiniteModule]
    embeddings: list[np.ndarray]
    injections: list[np.ndarray]
    projections: list[np.ndarray]
    idempotents: list[np.ndarray]
    classes: list[list[int]]
    class_isos: dict[int, np.ndarray]
    endo_radicals: list[np.ndarray]
    local_checked: list[str]
    t_nilpotency: "TNilpotencyResult | None" = None


def _endo_is_local(E: StructureAlgebra):
    """(is_local, radical_ideal): local means E/rad is a field."""
    rad = radical(E)
    Q, proj, _ = quotient(E, rad)
    W = wedderburn(Q)
    summary = W.summary()
    return (len(summary) == 1 and summary[0][1] == 1), rad


def indecomposability_check(M: FiniteModule) -> bool:
    """True iff End(M) has no idempotents besides 0 and 1; exhaustive for
    |End| <= 1024, otherwise via locality of the endomorphism algebra."""
    E, _, _ = endo_algebra(M)
    if E.cardinality() <= 1024:
        count = 0
        for x in E.all_elements():
            if E.is_idempotent(x):
                count += 1
        return count == 2
    return _endo_is_local(E)[0]


def decompose_indecomposable(M: FiniteModule, seed: int = 0) -> DecompositionCertificate:
    """Split M into indecomposable summands by lifting a complete family of
    primitive orthogonal idempotents through rad(End(M))."""
    F = M.algebra.field
    E, homs, _ = endo_algebra(M)
    radE = radical(E)
    if radE.dim == E.dim:
        raise AssertionError("endomorphism algebra cannot be its own radical")
    Q, proj, section = quotient(E, radE)
    W = wedderburn(Q, seed=seed)
    fam = lift_family_from_quotient(E, radE, proj, section, W.primitive_family())
    summands, embeddings, injections, projections = [], [], [], []
    idempotents, endo_radicals, local_checked = [], [], []
    for z in range(fam.rows.shape[0]):
        P = F.fsum(F.MUL[fam.rows[z][:, None, None], homs], axis=0)
        image = linalg.row_space_basis(F, P)
        N, embed = submodule_module(M, image)
        inj = embed
        proj_z = np.zeros((M.dim, N.dim), dtype=np.int64)
        for r in range(M.dim):
            coords = linalg.solve_left(F, embed, linalg.matvec(F, _bv(M.dim, r), P))
            proj_z[r] = coords
        if not np.array_equal(linalg.matmul(F, proj_z, inj), P):
            raise AssertionError("projector does not factor through its image")
        if not np.array_equal(linalg.matmul(F, inj, proj_z), np.eye(N.dim, dtype=np.int64)):
            raise AssertionError("summand section failed")
        EN, _, _ = endo_algebra(N)
        local, radN = _endo_is_local(EN)
        if not local:
            raise AssertionError("summand endomorphism algebra is not local")
        if EN.cardinality() <= 1024:
            idems = 0
            for x in EN.all_elements():
                if EN.is_idempotent(x):
                    idems += 1
                in_rad = True if not x.any() else (
                    radN.dim > 0 and linalg.in_row_space(F, radN.basis, x)
                )
                if (EN.inverse(x) is not None) == in_rad:
                    raise AssertionError("non-unit set differs from the endo radical")
            if idems != 2:
                raise AssertionError("summand has a nontrivial idempotent endomorphism")
            local_checked.append("exhaustive")
        else:
            local_checked.append("semisimple-quotient")
        summands.append(N)
        embeddings.append(embed)
        injections.append(inj)
        projections.append(proj_z)
        idempotents.append(P)
        endo_radicals.append(radN.basis)
    classes: list[list[int]] = []
    class_isos: dict[int, np.ndarray] = {}
    for z, N in enumerate(summands):
        placed = False
        for cls in classes:
            rep = summands[cls[0]]
            iso = find_isomorphism(N, rep, seed=seed)
            if iso is not None:
                cls.append(z)
                class_isos[z] = iso
                placed = True
                break
        if not placed:
            classes.append([z])
            class_isos[z] = np.eye(N.dim, dtype=np.int64)
    cert = DecompositionCertificate(
        module=M,
        summands=summands,
        embeddings=embeddings,
        injections=injections,
        projections=projections,
        idempotents=idempotents,
        classes=classes,
        class_isos=class_isos,
        endo_radicals=endo_radicals,
        local_checked=local_checked,
    )
    verify_decomposition(cert)
    return cert


def verify_decomposition(cert: DecompositionCertificate) -> None:
    F = cert.module.algebra.field
    m = cert.module.dim
    total = np.zeros((m, m), dtype=np.int64)
    for z, P in enumerate(cert.idempotents):
        if not np.array_equal(linalg.matmul(F, P, P), P):
            raise AssertionError(f"projector {z} is not idempotent")
        total = linalg.add(F, total, P)
        for w, Pw in enumerate(cert.idempotents):
            if z != w and linalg.matmul(F, P, Pw).any():
                raise AssertionError(f"projectors {z}, {w} are not orthogonal")
    if not np.array_equal(total, np.eye(m, dtype=np.int64)):
        raise AssertionError("projectors do not sum to the identity")


def composition_length(M: FiniteModule) -> int:
    """Sum of simple-summand counts along the radical series."""
    if M.dim == 0:
        return 0
    F = M.algebra.field
    series = radical_series(M)
    total = 0
    for t in range(len(series) - 1):
        layer_basis = series[t]
        Sub, _ = submodule_module(M, layer_basis)
        layer, _, _ = quotient_module(Sub, _image_inside(M, Sub, series[t + 1], layer_basis))
        total += _semisimple_length(layer)
    return total


def _image_inside(M: FiniteModule, Sub: FiniteModule, inner: np.ndarray, outer: np.ndarray) -> np.ndarray:
    F = M.algebra.field
    if inner.shape[0] == 0:
        return np.zeros((0, Sub.dim), dtype=np.int64)
    coords = np.zeros((inner.shape[0], Sub.dim), dtype=np.int64)
    for r in range(inner.shape[0]):
        c = linalg.solve_left(F, outer, inner[r])
        if c is None:
            raise AssertionError("radical series is not nested")
        coords[r] = c
    return coords


def _semisimple_length(S: FiniteModule) -> int:
    """Number of simple summands of a semisimple module, from the block
    dimensions of its action image."""
    if S.dim == 0:
        return 0
    F = S.algebra.field
    eff = S.eff_basis()
    flat = linalg.row_space_basis(F, eff.reshape(S.algebra.dim, S.dim * S.dim))
    ambient = matrix_algebra(F, S.dim)
    unit_flat = np.eye(S.dim, dtype=np.int64).reshape(-1)
    if not linalg.in_row_space(F, flat, unit_flat):
        flat = linalg.row_space_basis(F, np.vstack([flat, unit_flat[None, :]]))
    B, embed = subalgebra_structure(ambient, flat, unit_flat)
    W = wedderburn(B)
    total = 0
    for f in W.factors:
        op = linalg.matvec(F, f.central_idempotent, embed).reshape(S.dim, S.dim)
        r = linalg.rank(F, op)
        if r % (f.n * f.m):
            raise AssertionError("semisimple block dimension mismatch")
        total += r // (f.n * f.m)
    return total


# ---------------------------------------------------------------------------
# Descending cyclic chains
# ---------------------------------------------------------------------------


@dataclass
class SubmoduleChain:
    """Strictly descending chain of cyclic submodules.

    bases[t] is the cyclic submodule generated by generators[t]; the last
    entry of a maximal chain is the zero submodule (generator 0).  length
    counts strict descents, so a chain of k+1 entries has length k."""

    generators: list[np.ndarray]
    bases: list[np.ndarray]
    strict: list[bool]

    def length(self) -> int:
        return len(self.bases) - 1 if self.bases else 0


@dataclass
class CoperfectResult:
    """TERMINATES when every strictly descending cyclic chain provably
    stops short of the requested depth; otherwise carries a chain that is
    still descending at the depth cap."""

    kind: str  # "TERMINATES" | "CHAIN"
    chain: SubmoduleChain
    depth: int


def coperfect_witness_search(M: FiniteModule, depth: int = 16) -> CoperfectResult:
    """Longest strictly descending chain of cyclic submodules up to the
    depth cap, with its generators; finite modules always terminate once
    the cap exceeds the dimension."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if M.cardinality() > 4096:
        raise ValueError("cyclic chain search capped at 4096 elements")
    F = M.algebra.field
    cyclics = []
    seen = set()
    for v in M.all_elements():
        b = cyclic_submodule(M, v)
        key = b.tobytes()
        if key not in seen:
            seen.add(key)
            cyclics.append((v, b))
    cyclics.sort(key=lambda t: (-t[1].shape[0], t[1].tobytes(), t[0].tobytes()))
    best: list[tuple[np.ndarray, np.ndarray]] = []

    def extend(chain: list[tuple[np.ndarray, np.ndarray]]) -> None:
        nonlocal best
        if len(chain) > len(best):
            best = list(chain)
        if len(chain) - 1 >= depth:
            return
        current = chain[-1][1]
        for v, b in cyclics:
            if b.shape[0] < current.shape[0] and all(
                linalg.in_row_space(F, current, row) for row in b
            ):
                extend(chain + [(v, b)])
                break  # greedy: largest proper cyclic submodule first

    for v, b in cyclics:
        extend([(v, b)])
        if len(best) - 1 >= depth:
            break
    chain = SubmoduleChain(
        generators=[v for v, _ in best],
        bases=[b for _, b in best],
        strict=[best[t][1].shape[0] > best[t + 1][1].shape[0] for t in range(len(best) - 1)],
    )
    kind = "CHAIN" if chain.length() >= depth else "TERMINATES"
    return CoperfectResult(kind=kind, chain=chain, depth=depth)


# ---------------------------------------------------------------------------
# Local T-nilpotency and perfect-decomposition verdicts
# ---------------------------------------------------------------------------


@dataclass
class ModuleFamily:
    """Labeled family of finite modules; truncated means the family stands
    for an infinite one and certificates must not be inferred from the
    finite part alone."""

    members: list[FiniteModule]
    labels: list[str]
    truncated: bool = False


@dataclass
class HaradaSaiCertificate:
    length_bound: int
    composition_bound: int
    labels: list[str]


@dataclass
class NonisoWitnessChain:
    """Composable nonisomorphisms whose composite moves an element."""

    labels: list[str]
    steps: list[tuple[int, int, np.ndarray]]
    start_element: np.ndarray
    images: list[np.ndarray]

    def length(self) -> int:
        return len(self.steps)


@dataclass
class TNilpotencyResult:
    kind: str  # "certificate" | "witness" | "inconclusive"
    certificate: HaradaSaiCertificate | None = None
    witness: NonisoWitnessChain | None = None
    depth: int = 0


def local_T_nilpotency_check(family: ModuleFamily, depth: int = 8) -> TNilpotencyResult:
    """Harada-Sai certificate for bounded families; witness search for
    truncated families standing for unbounded ones.

    Raises AlgebraError when a member's endomorphism algebra is not local.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    for idx, member in enumerate(family.members):
        E, _, _ = endo_algebra(member)
        if not _endo_is_local(E)[0]:
            raise AlgebraError(f"family member {family.labels[idx]} has a non-local endomorphism algebra")
    if not family.truncated:
        b = max((composition_length(m) for m in family.members), default=0)
        return TNilpotencyResult(
            kind="certificate",
            certificate=HaradaSaiCertificate(
                length_bound=b,
                composition_bound=max(2 ** b - 1, 0) if b else 0,
                labels=list(family.labels),
            ),
            depth=depth,
        )
    witness = noniso_witness_search(family, depth)
    if witness is not None:
        return TNilpotencyResult(kind="witness", witness=witness, depth=depth)
    return TNilpotencyResult(kind="inconclusive", depth=depth)


def noniso_witness_search(family: ModuleFamily, depth: int, beam: int = 256) -> NonisoWitnessChain | None:
    """Beam search for a composite of `depth` nonisomorphisms (basis maps
    between members) that is nonzero on some element, witnessed by the
    surviving element and its images."""
    F = family.members[0].algebra.field if family.members else None
    if F is None:
        return None
    k = len(family.members)
    arrows: dict[tuple[int, int], np.ndarray] = {}
    for a in range(k):
        for b in range(k):
            homs = hom_space(family.members[a], family.members[b])
            keep = [t for t in range(homs.shape[0])
                    if not is_isomorphism(family.members[a], family.members[b], homs[t])]
            arrows[(a, b)] = homs[keep] if keep else homs[:0]
    # state: (start member, current member, composite matrix)
    states = [(a, a, np.eye(family.members[a].dim, dtype=np.int64)) for a in range(k)]
    paths: list[list[tuple[int, int, np.ndarray]]] = [[] for _ in states]
    for _ in range(depth):
        new_states, new_paths, seen = [], [], set()
        for s, (start, cur, comp) in enumerate(states):
            for b in range(k):
                for t in range(arrows[(cur, b)].shape[0]):
                    step = arrows[(cur, b)][t]
                    nxt = linalg.matmul(F, comp, step)
                    if not nxt.any():
                        continue
                    key = (start, b, nxt.tobytes())
                    if key in seen:
                        continue
                    seen.add(key)
                    new_states.append((start, b, nxt))
                    new_paths.append(paths[s] + [(cur, b, step)])
        order = sorted(range(len(new_states)), key=lambda i: (new_states[i][0], new_states[i][1], new_states[i][2].tobytes()))
        new_states = [new_states[i] for i in order[:beam]]
        new_paths = [new_paths[i] for i in order[:beam]]
        if not new_states:
            return None
        states, paths = new_states, new_paths
    start, cur, comp = states[0]
    path = paths[0]
    row = next(r for r in range(comp.shape[0]) if comp[r].any())
    v = _bv(comp.shape[0], row)
    images = []
    x = v
    for (a, b, step) in path:
        x = linalg.matvec(F, x, step)
        images.append(x)
    if not images[-1].any():
        raise AssertionError("witness composite lost its element")
    return NonisoWitnessChain(
        labels=[family.labels[a] for (a, _, _) in path] + [family.labels[path[-1][1]]],
        steps=path,
        start_element=v,
        images=images,
    )


@dataclass
class PerfectDecompositionVerdict:
    verdict: str  # "PERFECT" | "NOT_PERFECT" | "UNKNOWN"
    depth: int
    certificate: HaradaSaiCertificate | None = None
    witness: NonisoWitnessChain | None = None
    decomposition: DecompositionCertificate | None = None


def perfect_decomposition_verdict(target, depth: int = 8, seed: int = 0) -> PerfectDecompositionVerdict:
    """PERFECT with a certificate, NOT_PERFECT with a witness chain, or
    UNKNOWN at the stated depth (truncated families only)."""
    if isinstance(target, FiniteModule):
        cert = decompose_indecomposable(target, seed=seed)
        family = ModuleFamily(
            members=cert.summands,
            labels=[f"summand_{z}" for z in range(len(cert.summands))],
            truncated=False,
        )
        res = local_T_nilpotency_check(family, depth=depth)
        if res.kind != "certificate":
            raise AssertionError("finite module family must certify")
        cert.t_nilpotency = res
        return PerfectDecompositionVerdict(
            verdict="PERFECT", depth=depth, certificate=res.certificate, decomposition=cert
        )
    family = target
    if not family.members:
        return PerfectDecompositionVerdict(
            verdict="PERFECT",
            depth=depth,
            certificate=HaradaSaiCertificate(length_bound=0, composition_bound=0, labels=[]),
        )
    res = local_T_nilpotency_check(family, depth=depth)
    if res.kind == "certificate":
        return PerfectDecompositionVerdict(verdict="PERFECT", depth=depth, certificate=res.certificate)
    if res.kind == "witness":
        return PerfectDecompositionVerdict(verdict="NOT_PERFECT", depth=depth, witness=res.witness)
    return PerfectDecompositionVerdict(verdict="UNKNOWN", depth=depth)
