"""Field axioms, exhaustively on small fields."""

from __future__ import annotations

import numpy as np
import pytest

from topring.fields import GF, FiniteField, default_modulus, is_prime

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4)]


@pytest.mark.parametrize("p,d", SMALL_FIELDS)
def test_axioms_exhaustive(p, d):
    F = GF(p, d)
    q = F.q
    a = np.arange(q)[:, None, None]
    b = np.arange(q)[None, :, None]
    c = np.arange(q)[None, None, :]
    assert (F.add(F.add(a, b), c) == F.add(a, F.add(b, c))).all()
    assert (F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))).all()
    assert (F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))).all()
    assert (F.ADD == F.ADD.T).all()
    assert (F.MUL == F.MUL.T).all()
    line = np.arange(q)
    assert (F.add(line, 0) == line).all()
    assert (F.mul(line, 1) == line).all()
    assert (F.add(line, F.neg(line)) == 0).all()
    units = line[1:]
    assert (F.mul(units, F.inv(units)) == 1).all()


@pytest.mark.parametrize("p,d", SMALL_FIELDS)
def test_frobenius_and_pth_root(p, d):
    F = GF(p, d)
    line = np.arange(F.q)
    frob = F.power(line, p)
    assert (F.power(frob, F.q // p) == line).all()
    assert (F.pth_root(frob) == line).all()
    # Frobenius is additive
    for a in range(F.q):
        for b in range(F.q):
            assert F.power(F.add(a, b), p) == F.add(F.power(a, p), F.power(b, p))


def test_fsum_matches_pairwise():
    F = GF(2, 2)
    rng = np.random.default_rng(7)
    arr = rng.integers(0, F.q, size=(5, 11))
    expect = np.zeros(5, dtype=np.int64)
    for j in range(11):
        expect = F.add(expect, arr[:, j])
    assert (F.fsum(arr, axis=1) == expect).all()
    assert F.fsum(arr) == F.fsum(expect, axis=0)


def test_default_modulus_is_frozen_for_f16():
    # x^4 + x + 1 is the smallest monic irreducible of degree 4 over F_2
    assert default_modulus(2, 4) == (1, 1, 0, 0, 1)
    assert default_modulus(2, 2) == (1, 1, 1)


def test_invalid_inputs_rejected():
    with pytest.raises(ValueError):
        FiniteField(4)
    with pytest.raises(ValueError):
        FiniteField(2, 2, modulus=(1, 0, 1))  # x^2 + 1 = (x+1)^2 over F_2
    with pytest.raises(ZeroDivisionError):
        GF(3).inv(0)
    assert is_prime(2) and is_prime(13) and not is_prime(1) and not is_prime(9)


def test_field_identity_and_cache():
    assert GF(2, 2) is GF(2, 2)
    assert GF(2, 2) == FiniteField(2, 2)
    assert GF(2) != GF(3)
