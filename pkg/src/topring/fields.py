"""Finite fields F_{p^d} with exact, table-driven arithmetic.

Field elements are encoded as integers in [0, p^d): the element with
polynomial coordinates (a_0, ..., a_{d-1}) in the basis 1, x, ..., x^{d-1}
of F_p[x]/(modulus) is stored as a_0 + a_1*p + ... + a_{d-1}*p^{d-1}.
Addition and multiplication are lookup tables, so every operation also
works elementwise on numpy integer arrays of any shape.  Nothing here is
approximate: all tables are built from exact polynomial arithmetic mod p.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

# Largest table-backed field.  q*q int16 tables stay below ~0.5 MB at this cap.
MAX_FIELD_SIZE = 512


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# Polynomials over the prime field F_p, as plain int lists (low degree first).
# Only what is needed to validate a defining modulus; general polynomial
# factorization over F_{p^d} lives in poly.py.
# ---------------------------------------------------------------------------

def _pf_trim(f: Sequence[int]) -> list[int]:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _pf_mul(p: int, f: Sequence[int], g: Sequence[int]) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _pf_trim(out)


def _pf_divmod(p: int, f: Sequence[int], g: Sequence[int]) -> tuple[list[int], list[int]]:
    f = _pf_trim(f)
    g = _pf_trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(g[-1], p - 2, p)
    quo = [0] * max(0, len(f) - len(g) + 1)
    rem = list(f)
    while len(rem) >= len(g):
        c = (rem[-1] * inv_lead) % p
        k = len(rem) - len(g)
        quo[k] = c
        for j, b in enumerate(g):
            rem[k + j] = (rem[k + j] - c * b) % p
        rem = _pf_trim(rem)
        if not rem:
            break
    return _pf_trim(quo), rem


def _pf_gcd(p: int, f: Sequence[int], g: Sequence[int]) -> list[int]:
    a, b = _pf_trim(f), _pf_trim(g)
    while b:
        a, b = b, _pf_divmod(p, a, b)[1]
    if a:
        inv_lead = pow(a[-1], p - 2, p)
        a = [(c * inv_lead) % p for c in a]
    return a


def _pf_powmod(p: int, f: Sequence[int], e: int, m: Sequence[int]) -> list[int]:
    result = [1]
    base = _pf_divmod(p, f, m)[1]
    while e > 0:
        if e & 1:
            result = _pf_divmod(p, _pf_mul(p, result, base), m)[1]
        base = _pf_divmod(p, _pf_mul(p, base, base), m)[1]
        e >>= 1
    return result


def _pf_sub(p: int, f: Sequence[int], g: Sequence[int]) -> list[int]:
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return _pf_trim([(a - b) % p for a, b in zip(f, g)])


def _pf_is_irreducible(p: int, f: Sequence[int]) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    f = _pf_trim(f)
    d = len(f) - 1
    if d < 1:
        return False
    x = [0, 1]
    if _pf_sub(p, _pf_powmod(p, x, p ** d, f), x):
        return False
    for r in {r for r in range(2, d + 1) if d % r == 0 and is_prime(r)}:
        t = _pf_powmod(p, x, p ** (d // r), f)
        if len(_pf_gcd(p, _pf_sub(p, t, x), f)) > 1:
            return False
    return True


def default_modulus(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree d over F_p."""
    if d == 1:
        return (0, 1)
    for tail in range(p ** d):
        coeffs = []
        t = tail
        for _ in range(d):
            coeffs.append(t % p)
            t //= p
        f = coeffs + [1]
        if _pf_is_irreducible(p, f):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FiniteField:
    """The field with p^d elements, realized as F_p[x]/(modulus).

    Attributes:
        p: characteristic (prime).
        d: extension degree over the prime field.
        q: field size p^d.
        modulus: defining monic irreducible, coefficients low degree first,
            length d+1.  For d == 1 this is (0, 1), i.e. the polynomial x.
    """

    def __init__(self, p: int, d: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if d < 1:
            raise ValueError("extension degree must be >= 1")
        q = p ** d
        if q > MAX_FIELD_SIZE:
            raise ValueError(f"field size {q} exceeds table cap {MAX_FIELD_SIZE}")
        if modulus is None:
            modulus = default_modulus(p, d)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != d + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree d")
        if d > 1 and not _pf_is_irreducible(p, modulus):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.d = d
        self.q = q
        self.modulus = modulus
        self._pp = p ** np.arange(d, dtype=np.int64)
        self._build_tables()

    def _build_tables(self) -> None:
        p, d, q = self.p, self.d, self.q
        digits = np.zeros((q, d), dtype=np.int64)
        t = np.arange(q)
        for i in range(d):
            digits[:, i] = t % p
            t = t // p
        self.DIGITS = digits
        self.ADD = ((digits[:, None, :] + digits[None, :, :]) % p @ self._pp).astype(np.int64)
        self.NEG = (((-digits) % p) @ self._pp).astype(np.int64)
        # x^k mod modulus for k in [d, 2d-1), as digit rows
        red = np.zeros((max(0, d - 1), d), dtype=np.int64)
        cur = [(-c) % p for c in self.modulus[:d]]  # x^d
        for k in range(d - 1):
            red[k] = cur
            # multiply by x, reduce
            nxt = [0] + cur[:-1]
            lead = cur[-1]
            nxt = [(nxt[i] + lead * ((-self.modulus[i]) % p)) % p for i in range(d)]
            cur = nxt
        conv = np.zeros((q, q, 2 * d - 1), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                conv[:, :, i + j] += digits[:, None, i] * digits[None, :, j]
        low = conv[:, :, :d] % p
        for k in range(d, 2 * d - 1):
            low = (low + conv[:, :, k : k + 1] % p * red[k - d][None, None, :]) % p
        self.MUL = (low @ self._pp).astype(np.int64)
        inv = np.zeros(q, dtype=np.int64)
        units = np.argwhere(self.MUL == 1)
        inv[units[:, 0]] = units[:, 1]
        self.INV = inv

    # -- scalar / elementwise operations (ints or numpy int arrays) --------

    def add(self, a, b):
        return self.ADD[a, b]

    def sub(self, a, b):
        return self.ADD[a, self.NEG[b]]

    def neg(self, a):
        return self.NEG[a]

    def mul(self, a, b):
        return self.MUL[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of 0")
        return self.INV[a]

    def power(self, a, n: int):
        """a^n elementwise, n >= 0 (or any n for invertible a)."""
        if n < 0:
            return self.power(self.inv(a), -n)
        result = np.full_like(np.asarray(a), 1)
        base = np.asarray(a).copy()
        n = int(n)
        while n > 0:
            if n & 1:
                result = self.MUL[result, base]
            base = self.MUL[base, base]
            n >>= 1
        return result if result.shape else int(result)

    def fsum(self, arr, axis=None):
        """Field sum of an integer array along the given axis (or all axes).

        Addition in F_{p^d} is coordinatewise mod p on digit vectors, so a
        long sum is one digit decomposition, an integer sum, and a re-encode.
        """
        arr = np.asarray(arr)
        dig = self.DIGITS[arr]
        if axis is None:
            axis = tuple(range(arr.ndim))
        s = dig.sum(axis=axis, dtype=np.int64) % self.p
        out = s @ self._pp
        return out if isinstance(out, np.ndarray) else int(out)

    def pth_root(self, a):
        """Inverse of Frobenius: the unique b with b^p == a."""
        return self.power(a, self.q // self.p)

    def elements(self) -> Iterable[int]:
        return range(self.q)

    def digits(self, a):
        return self.DIGITS[a]

    def from_digits(self, dig) -> int:
        dig = np.asarray(dig) % self.p
        out = dig @ self._pp
        return out if isinstance(out, np.ndarray) else int(out)

    # -- identity -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteField)
            and (self.p, self.d, self.modulus) == (other.p, other.d, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.d, self.modulus))

    def __repr__(self) -> str:
        return f"F_{self.q}" if self.d == 1 else f"F_{self.q}(p={self.p},mod={list(self.modulus)})"


def GF(p: int, d: int = 1, modulus: Sequence[int] | None = None) -> FiniteField:
    """Shorthand constructor, cached on (p, d, modulus).

    An omitted modulus aliases the entry for the resolved default, so
    spelling the default out gives the same object back."""
    raw = (p, d, None if modulus is None else tuple(int(c) for c in modulus))
    field = _FIELD_CACHE.get(raw)
    if field is None:
        field = FiniteField(p, d, modulus)
        field = _FIELD_CACHE.setdefault((p, d, field.modulus), field)
        _FIELD_CACHE[raw] = field
    return field


_FIELD_CACHE: dict = {}
