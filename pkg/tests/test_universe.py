from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from prymcount import poly
from prymcount import universe as U
from prymcount.curve import character_sum
from prymcount.ff import PrimePower, field_for

BASES = [PrimePower(3), PrimePower(5), PrimePower(3, 2)]


def scalar_image(base, d, index, s, t):
    """Image of a member under x -> s x + t, rescaled by a square into its class."""
    F = field_for(base)
    lcs = U.canonical_lcs(base)
    f = U.decode(base, d, lcs, index)
    h = poly.compose_affine(F, f, s, t)
    lead = h[-1]
    target = lcs[0] if F.schi(lead) == 1 else lcs[1]
    h = poly.scale(F, h, F.smul(target, F.sinv(lead)))
    return U.encode(base, lcs, h)


@pytest.mark.parametrize("base", BASES)
@pytest.mark.parametrize("d", [1, 2, 3])
def test_squarefree_mask(base, d):
    F = field_for(base)
    mask = U.squarefree_mask(base, d)
    co = U.monic_coeffs(base, d)
    for code in range(0, base.q**d, 3):
        f = tuple(int(c) for c in co[code]) + (1,)
        assert bool(mask[code]) == poly.is_squarefree(F, f)


@pytest.mark.parametrize("base", BASES)
def test_affine_action_matches_composition(base):
    d = 3
    act = U.AffineAction(base, d)
    q = base.q
    codes = np.arange(0, q**d, 5, dtype=np.int64)
    for g in U.affine_group(base)[:: max(1, len(U.affine_group(base)) // 9)]:
        for pos in (0, 1):
            img = act.image(pos, codes, *g)
            for c, i in zip(codes[:20], img[:20]):
                assert int(i) == scalar_image(base, d, pos * q**d + int(c), *g)


@pytest.mark.parametrize("base", BASES)
def test_orbits_consistent(base):
    d = 3
    orb = U.orbits(base, d)
    G = U.affine_group(base)
    sf = np.flatnonzero(orb.least >= 0)
    assert np.all(orb.least[sf] <= sf)
    assert np.all(orb.least[orb.least[sf]] == orb.least[sf])
    # orbit-stabilizer on a few representatives
    reps = orb.representatives
    sizes = np.bincount(orb.least[sf] - 0, minlength=orb.least.size)
    for r in reps[:: max(1, reps.size // 7)]:
        assert sizes[r] * len(orb.stabilizer(int(r))) == len(G)


@pytest.mark.parametrize("base", BASES)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_character_sums_match_scalar(base, k):
    d = 3
    co = U.monic_coeffs(base, d)[:: 7]
    sums = U.character_sums(base, k, co)
    for row, s in list(zip(co, sums))[:25]:
        f = tuple(int(c) for c in row) + (1,)
        assert int(s) == character_sum(base, f, k)


def test_cross_sums_and_common_roots():
    base = PrimePower(5)
    F = field_for(base)
    A = U.monic_coeffs(base, 2)[::3]
    B = U.monic_coeffs(base, 3)[::17]
    SA, SB, SAB = U.cross_sums(base, 2, A, B)
    common = U.common_root_matrix(base, A, B)
    for i, a in enumerate(A):
        fa = tuple(int(c) for c in a) + (1,)
        assert SA[i] == character_sum(base, fa, 2)
        for j, b in enumerate(B):
            fb = tuple(int(c) for c in b) + (1,)
            assert SAB[i, j] == character_sum(base, poly.mul(F, fa, fb), 2)
            assert common[i, j] == (len(poly.gcd(F, fa, fb)) > 1)


def test_frobenius_points_weights():
    for base, k in ((PrimePower(3), 4), (PrimePower(5), 3), (PrimePower(3, 2), 2)):
        xs, w = U.frobenius_points(base, k)
        assert int(w.sum()) == base.q**k


@given(st.sampled_from(BASES), st.integers(1, 4), st.data())
def test_decode_encode_round_trip(base, d, data):
    lcs = U.all_lcs(base)
    index = data.draw(st.integers(0, len(lcs) * base.q**d - 1))
    f = U.decode(base, d, lcs, index)
    assert len(f) == d + 1 and f[-1] in lcs
    assert U.encode(base, lcs, f) == index
