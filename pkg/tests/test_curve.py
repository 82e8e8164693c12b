from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prymcount import poly
from prymcount.curve import (
    CurveError,
    HyperellipticModel,
    all_squarefree,
    branch_divisor_disjoint,
    count_points,
    genus,
    nonsquare,
)
from prymcount.ff import PrimePower, field_for
from prymcount.zeta import from_counts, predicted_counts

Q3 = PrimePower(3)


def brute_count(base: PrimePower, f, k: int) -> int:
    """Count solutions of y^2 = f(x) by enumerating y, plus points at infinity."""
    F = field_for(base, k)
    emb = F.embedding
    sq = {}
    for y in range(F.order):
        s = F.smul(y, y)
        sq[s] = sq.get(s, 0) + 1
    lifted = [int(emb[c]) for c in f]
    total = 0
    for x in range(F.order):
        v = 0
        for c in reversed(lifted):
            v = F.sadd(F.smul(v, x), c)
        total += sq.get(v, 0)
    d = len(f) - 1
    if d % 2:
        return total + 1
    return total + (2 if F.schi(lifted[-1]) == 1 else 0)


def test_genus_examples():
    assert genus(HyperellipticModel(Q3, (0, 1))) == 0
    assert genus(HyperellipticModel(Q3, (0, 2, 0, 1))) == 1
    f6 = next(iter(all_squarefree(Q3, 6)))
    assert genus(HyperellipticModel(Q3, f6)) == 2


def test_count_examples():
    assert count_points(HyperellipticModel(Q3, (0, 1, 0, 1)), 1).n == 4
    assert count_points(HyperellipticModel(Q3, (0, 2, 0, 1)), 1).n == 4
    for q in (3, 5, 9):
        for k in (1, 2, 3):
            assert count_points(HyperellipticModel(PrimePower.from_q(q), (0, 1)), k).n == q**k + 1


def test_rejects_non_squarefree():
    with pytest.raises(CurveError):
        HyperellipticModel(Q3, (1, 2, 1))


def test_disjointness_examples():
    X = lambda f: HyperellipticModel(Q3, f)  # noqa: E731
    assert not branch_divisor_disjoint(X((0, 1)), X((2, 1)))
    assert branch_divisor_disjoint(X((1, 0, 1)), X((0, 2, 0, 1)))
    assert not branch_divisor_disjoint(X((2, 0, 1)), X((0, 2, 0, 1)))


@pytest.mark.parametrize("q", [3, 5, 9])
def test_counts_match_brute_force(q):
    base = PrimePower.from_q(q)
    for d in (3, 4):
        for i, f in enumerate(all_squarefree(base, d)):
            if i % (7 if q < 9 else 41):
                continue
            for k in (1, 2):
                assert count_points(HyperellipticModel(base, f), k).n == brute_count(base, f, k)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_twist_duality(q):
    base = PrimePower.from_q(q)
    F = field_for(base)
    u = nonsquare(base)
    for d in (1, 2, 3, 4) if q < 9 else (1, 2, 3):
        for f in all_squarefree(base, d):
            g = poly.scale(F, f, u)
            n1 = count_points(HyperellipticModel(base, f), 1).n
            n2 = count_points(HyperellipticModel(base, g), 1).n
            assert n1 + n2 == 2 * (q + 1)


@pytest.mark.parametrize("q", [3, 5])
def test_weil_polynomial_predicts_higher_counts(q):
    base = PrimePower.from_q(q)
    for d in (3, 4, 5, 6):
        for i, f in enumerate(all_squarefree(base, d)):
            if i % 11:
                continue
            C = HyperellipticModel(base, f)
            g = genus(C)
            counts = [count_points(C, k).n for k in range(1, 2 * g + 1)]
            W = from_counts(q, g, counts[:g])
            assert predicted_counts(W, 2 * g) == counts


@given(st.sampled_from([3, 5, 7, 9]), st.integers(1, 3), st.data())
def test_weil_bound_and_nonnegative(q, k, data):
    base = PrimePower.from_q(q)
    F = field_for(base)
    d = data.draw(st.integers(1, 5))
    coeffs = data.draw(st.lists(st.integers(0, q - 1), min_size=d, max_size=d))
    lc = data.draw(st.integers(1, q - 1))
    f = tuple(coeffs) + (lc,)
    if not poly.is_squarefree(F, f):
        return
    C = HyperellipticModel(base, f)
    n = count_points(C, k).n
    g = genus(C)
    assert n >= 0
    assert (n - q**k - 1) ** 2 <= 4 * g * g * q**k
    assert abs(n - q**k - 1) <= 2 * g * math.sqrt(q**k) + 1e-9
