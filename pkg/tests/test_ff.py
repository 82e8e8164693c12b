from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from prymcount.ff import (
    CeilingError,
    FieldError,
    PrimePower,
    enumerate_elements,
    is_irreducible_mod_p,
    make_field,
    quadratic_character,
)

SMALL = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (3, 4), (11, 1)]


def test_prime_power_validation():
    assert PrimePower.from_q(27) == PrimePower(3, 3)
    for bad in (1, 2, 4, 6, 8, 12, 15):
        with pytest.raises(FieldError):
            PrimePower.from_q(bad)
    with pytest.raises(FieldError):
        PrimePower(9, 1)


def test_make_field_sizes():
    assert make_field(3, 1, 1).order == 3
    F9 = make_field(3, 1, 2)
    assert F9.order == 9 and F9.n == 2
    F25 = make_field(5, 1, 2)
    squares = {F25.smul(x, x) for x in range(1, 25)}
    assert len(squares) == 12


def test_ceiling():
    with pytest.raises(CeilingError):
        make_field(3, 1, 5, ceiling=100)


def test_quadratic_character_examples():
    F3 = make_field(3)
    assert quadratic_character(F3.element(0)) == 0
    assert quadratic_character(F3.element(1)) == 1
    assert quadratic_character(F3.element(2)) == -1


def test_enumerate_elements():
    assert len(enumerate_elements(make_field(3))) == 3
    assert len(enumerate_elements(make_field(3, 1, 2))) == 9
    F27 = make_field(3, 1, 3)
    elems = enumerate_elements(F27)
    assert len(elems) == 27
    assert sum(quadratic_character(a) == 1 for a in elems) == 13


@pytest.mark.parametrize("p,n", SMALL)
def test_modulus_irreducible_and_tables(p, n):
    F = make_field(p, 1, n)
    assert is_irreducible_mod_p(F.modulus, p)
    # exp/log tables are inverse bijections on the nonzero elements
    assert sorted(F.exp_table[: F.order - 1].tolist()) == list(range(1, F.order))
    assert np.all(F.exp_table[F.log_table[1:]] == np.arange(1, F.order))


@pytest.mark.parametrize("p,n", [(3, 1), (5, 1), (3, 2), (7, 1), (3, 3), (5, 2), (3, 4)])
def test_character_multiplicative_and_balanced(p, n):
    F = make_field(p, 1, n)
    if F.order > 81:
        pytest.skip("exhaustive only for small fields")
    chi = F.chi_table.astype(int)
    for a, b in itertools.product(range(F.order), repeat=2):
        assert chi[F.smul(a, b)] == chi[a] * chi[b]
    assert chi[1:].sum() == 0


@pytest.mark.parametrize("p,n", SMALL)
def test_field_axioms_exhaustive(p, n):
    F = make_field(p, 1, n)
    for a in range(F.order):
        assert F.sadd(a, F.sneg(a)) == 0
        if a:
            assert F.smul(a, F.sinv(a)) == 1
    # Frobenius permutes and fixes exactly the prime field
    frob = [F.spow(a, p) for a in range(F.order)]
    assert sorted(frob) == list(range(F.order))
    fixed = [a for a in range(F.order) if frob[a] == a]
    assert len(fixed) == p


@given(st.sampled_from(SMALL), st.data())
def test_arithmetic_properties(pn, data):
    F = make_field(*pn[:1], 1, pn[1])
    el = st.integers(0, F.order - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert F.smul(a, F.sadd(b, c)) == F.sadd(F.smul(a, b), F.smul(a, c))
    assert F.sadd(a, b) == F.sadd(b, a)
    assert F.smul(F.smul(a, b), c) == F.smul(a, F.smul(b, c))
    A, B = F.element(a), F.element(b)
    assert int(A * B) == F.smul(a, b) and int(A - B) == F.ssub(a, b)


@pytest.mark.parametrize("base,k", [((3, 1), 2), ((3, 1), 3), ((5, 1), 2), ((3, 2), 2), ((7, 1), 2)])
def test_embedding_homomorphism_and_squares(base, k):
    p, e = base
    small = make_field(p, 1, e)
    big = make_field(p, e, k)
    emb = big.embedding
    for a in range(small.order):
        for b in range(small.order):
            assert emb[small.sadd(a, b)] == big.sadd(int(emb[a]), int(emb[b]))
            assert emb[small.smul(a, b)] == big.smul(int(emb[a]), int(emb[b]))
        if a:
            # a in F_q is a square in F_{q^k} iff it is a square in F_q or k is even
            expect = 1 if (small.schi(a) == 1 or k % 2 == 0) else -1
            assert big.schi(int(emb[a])) == expect
