"""Vectorized work on whole families of polynomials over F_q.

A *family* is the set of all polynomials of one degree d whose leading
coefficient is drawn from a fixed tuple ``lcs``.  Members are addressed by
a global index ``lc_pos * q**d + code`` where ``code = sum(c_i q**i)``
encodes the monic part c_0..c_{d-1}.  Quadratic characters of a member
differ from those of its monic part only by chi(lc)^k, so character data
is always computed on monic parts.

Evaluation of many monic polynomials at every point of F_{q^k} avoids
field multiplications altogether: each term c_i x^i is looked up in a
table and the terms are added as base-p digit vectors packed into the bit
fields of an int64, with the carries cleared once at the end.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import comb

import numpy as np

from .ff import ExtensionField, PrimePower, field_for, make_field

# entries per temporary (rows x columns) block
_BLOCK_ENTRIES = 1 << 22
# bits decoded per lookup when clearing carries
_GROUP_BITS = 20


def nonsquare_code(base: PrimePower) -> int:
    F = field_for(base)
    return int(np.flatnonzero(F.chi_table == -1)[0])


def canonical_lcs(base: PrimePower) -> tuple[int, int]:
    """Leading coefficients 1 and the least non-square: one per square class."""
    return (1, nonsquare_code(base))


def all_lcs(base: PrimePower) -> tuple[int, ...]:
    return tuple(range(1, base.q))


@functools.lru_cache(maxsize=64)
def monic_coeffs(base: PrimePower, d: int) -> np.ndarray:
    """(q^d, d) array: row ``code`` holds c_0..c_{d-1}."""
    q = base.q
    codes = np.arange(q**d, dtype=np.int64)
    out = np.empty((q**d, d), dtype=np.int64)
    for i in range(d):
        out[:, i] = (codes // q**i) % q
    out.setflags(write=False)
    return out


def _poly_mul(F: ExtensionField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Broadcast product of coefficient arrays (..., la) and (..., lb)."""
    la, lb = A.shape[-1], B.shape[-1]
    shape = np.broadcast_shapes(A.shape[:-1], B.shape[:-1]) + (la + lb - 1,)
    out = np.zeros(shape, dtype=np.int64)
    for i in range(la):
        for j in range(lb):
            out[..., i + j] = F.add(out[..., i + j], F.mul(A[..., i], B[..., j]))
    return out


def _with_lead(coeffs: np.ndarray) -> np.ndarray:
    return np.concatenate([coeffs, np.ones((coeffs.shape[0], 1), dtype=np.int64)], axis=1)


@functools.lru_cache(maxsize=64)
def squarefree_mask(base: PrimePower, d: int) -> np.ndarray:
    """Boolean mask over monic codes of degree d: True when squarefree.

    Marks every product g^2 h with g monic of positive degree.
    """
    q = base.q
    F = field_for(base)
    mask = np.ones(q**d, dtype=bool)
    weights = q ** np.arange(d, dtype=np.int64)
    for j in range(1, d // 2 + 1):
        G = _with_lead(monic_coeffs(base, j))
        G2 = _poly_mul(F, G, G)
        H = _with_lead(monic_coeffs(base, d - 2 * j))
        prod = _poly_mul(F, G2[:, None, :], H[None, :, :])
        codes = prod[..., :d] @ weights
        mask[codes.ravel()] = False
    mask.setflags(write=False)
    return mask


def affine_group(base: PrimePower) -> list[tuple[int, int]]:
    """All substitutions x -> s x + t, identity first."""
    q = base.q
    return [(s, t) for s in range(1, q) for t in range(q)]


class AffineAction:
    """x -> s x + t followed by a square rescaling into a leading-coefficient class.

    Acts on families with ``lcs = canonical_lcs(base)``.  On digit vectors
    of monic parts the action is affine-linear over F_p, so images of a
    whole family cost one small matrix product.
    """

    def __init__(self, base: PrimePower, d: int) -> None:
        self.base = base
        self.d = d
        self.F = field_for(base)
        self.lcs = canonical_lcs(base)
        e, p = base.e, base.p
        self._digit_pw = p ** np.arange(d * e, dtype=np.int64)
        self._mm = [self._mulmat(c) for c in range(base.q)]

    def _mulmat(self, c: int) -> np.ndarray:
        """e x e matrix M over F_p with digits(v) @ M = digits(v c)."""
        e, p = self.base.e, self.base.p
        rows = []
        for r in range(e):
            v = self.F.smul(p**r, c)
            rows.append([(v // p**j) % p for j in range(e)])
        return np.array(rows, dtype=np.float64)

    def _digits(self, c: int) -> np.ndarray:
        e, p = self.base.e, self.base.p
        return np.array([(c // p**j) % p for j in range(e)], dtype=np.float64)

    def _fp(self, n: int) -> int:
        return n % self.base.p

    def class_of(self, c: int) -> int:
        return 0 if self.F.schi(c) == 1 else 1

    @functools.lru_cache(maxsize=4096)
    def linear_part(self, lc_pos: int, s: int, t: int) -> tuple[int, np.ndarray, np.ndarray]:
        """(new lc_pos, matrix, constant) with new digits = digits @ matrix + constant mod p.

        The member lc*g maps to lc*g(s x + t) = (lc s^d) * g'(x) with g' monic,
        and lc s^d is then rescaled by a square into its class.
        """
        F, d, e = self.F, self.d, self.base.e
        lead = F.smul(self.lcs[lc_pos], F.spow(s, d))
        new_pos = self.class_of(lead)
        u = F.sinv(F.spow(s, d))
        K = [[0] * (d + 1) for _ in range(d + 1)]
        for j in range(d + 1):
            for i in range(j + 1):
                b = self._fp(comb(j, i))
                if b == 0:
                    continue
                K[i][j] = F.smul(F.smul(u, b), F.smul(F.spow(s, i), F.spow(t, j - i)))
        mat = np.zeros((d * e, d * e), dtype=np.float64)
        const = np.zeros(d * e, dtype=np.float64)
        for i in range(d):
            for j in range(d):
                if K[i][j]:
                    mat[j * e : (j + 1) * e, i * e : (i + 1) * e] = self._mm[K[i][j]]
            const[i * e : (i + 1) * e] = self._digits(K[i][d])
        return new_pos, mat, const

    def digits_of(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return ((codes[:, None] // self._digit_pw[None, :]) % self.base.p).astype(np.float32)

    def image_from_digits(self, lc_pos: int, digits: np.ndarray, s: int, t: int) -> np.ndarray:
        new_pos, mat, const = self.linear_part(lc_pos, s, t)
        q, p = self.base.q, self.base.p
        if self.d == 0:
            return np.full(digits.shape[0], new_pos, dtype=np.int64)
        new = digits @ mat.astype(np.float32)
        new += const.astype(np.float32)
        bound = self.d * self.base.e * (p - 1) ** 2 + p
        small = new.astype(np.uint8 if bound < 256 else np.uint16)
        small %= small.dtype.type(p)
        wide = np.float32 if q**self.d < (1 << 24) else np.float64
        new_codes = (small.astype(wide) @ self._digit_pw.astype(wide)).astype(np.int64)
        return new_pos * q**self.d + new_codes

    def image(self, lc_pos: int, codes: np.ndarray, s: int, t: int) -> np.ndarray:
        """Global indices of the images of the members (lc_pos, codes)."""
        return self.image_from_digits(lc_pos, self.digits_of(codes), s, t)


@dataclass
class Orbits:
    """Orbit data for a squarefree family under :class:`AffineAction`.

    ``least[i]`` is the least global index in the orbit of member i (or -1
    when member i is not squarefree).
    """

    base: PrimePower
    d: int
    least: np.ndarray

    @property
    def representatives(self) -> np.ndarray:
        idx = np.arange(self.least.size, dtype=np.int64)
        return idx[self.least == idx]

    def stabilizer(self, index: int) -> list[tuple[int, int]]:
        act = AffineAction(self.base, self.d)
        q = self.base.q
        pos, code = divmod(int(index), q**self.d)
        arr = np.array([code], dtype=np.int64)
        return [g for g in affine_group(self.base) if int(act.image(pos, arr, *g)[0]) == index]


@functools.lru_cache(maxsize=32)
def orbits(base: PrimePower, d: int) -> Orbits:
    """Least orbit member for every squarefree member of the canonical family."""
    q = base.q
    size = q**d
    act = AffineAction(base, d)
    sf = squarefree_mask(base, d)
    codes = np.flatnonzero(sf).astype(np.int64)
    least = np.full(2 * size, -1, dtype=np.int64)
    digits = act.digits_of(codes)
    for pos in (0, 1):
        cur = pos * size + codes
        for g in affine_group(base)[1:]:
            np.minimum(cur, act.image_from_digits(pos, digits, *g), out=cur)
        least[pos * size + codes] = cur
    return Orbits(base, d, least)


# -- character values ---------------------------------------------------------


class _Packer:
    """Digit packing for F_{q^k} with s bits per base-p digit."""

    def __init__(self, F: ExtensionField, s: int) -> None:
        self.F = F
        self.s = s
        p, n = F.p, F.n
        codes = np.arange(F.order, dtype=np.int64)
        packed = np.zeros(F.order, dtype=np.int64)
        for j in range(n):
            packed |= ((codes // p**j) % p) << (s * j)
        self.pack = packed
        per = max(1, _GROUP_BITS // s)
        self.groups = []
        for j0 in range(0, n, per):
            j1 = min(n, j0 + per)
            width = (j1 - j0) * s
            vals = np.arange(1 << width, dtype=np.int64)
            table = np.zeros(1 << width, dtype=np.int64)
            for j in range(j0, j1):
                table += (((vals >> (s * (j - j0))) & ((1 << s) - 1)) % p) * p**j
            self.groups.append((s * j0, (1 << width) - 1, table))

    def unpack(self, V: np.ndarray) -> np.ndarray:
        out = None
        for shift, mask, table in self.groups:
            part = table[(V >> shift) & mask]
            out = part if out is None else out + part
        return out


@functools.lru_cache(maxsize=16)
def _packer(base: PrimePower, k: int, s: int) -> _Packer:
    return _Packer(field_for(base, k, ceiling=base.q**k), s)


def _bits_for(p: int, terms: int) -> int:
    return max(1, (terms * (p - 1)).bit_length())


def chi_block(base: PrimePower, k: int, coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """chi(g(x)) for monic g with coefficient rows ``coeffs`` (N, d) at codes ``xs``.

    Returns an int8 array (N, len(xs)).  The field must already be within
    the caller's ceiling.
    """
    F = field_for(base, k, ceiling=base.q**k)
    N, d = coeffs.shape
    xs = np.asarray(xs, dtype=np.int64)
    s = _bits_for(F.p, d + 1)
    if s * F.n > 62:
        return _chi_block_horner(F, coeffs, xs)
    P = _packer(base, k, s)
    emb = F.embedding
    Q1 = F.order - 1
    logx = F.log_table[xs]
    zero = xs == 0
    total = np.broadcast_to(P.pack[_xpow(F, logx, zero, d, Q1)][None, :], (N, xs.size)).copy()
    for i in range(d):
        xi = _xpow(F, logx, zero, i, Q1)
        T = P.pack[F.mul(emb[:, None], xi[None, :])]
        total += T[coeffs[:, i]]
    return F.chi_table[P.unpack(total)]


def _xpow(F: ExtensionField, logx: np.ndarray, zero: np.ndarray, i: int, Q1: int) -> np.ndarray:
    if i == 0:
        return np.ones(logx.shape, dtype=np.int64)
    return np.where(zero, 0, F.exp_table[(logx * i) % Q1])


def _chi_block_horner(F: ExtensionField, coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    emb = F.embedding
    N, d = coeffs.shape
    acc = np.ones((N, xs.size), dtype=np.int64)
    for i in reversed(range(d)):
        acc = F.add(F.mul(acc, xs[None, :]), emb[coeffs[:, i]][:, None])
    return F.chi_table[acc]


@functools.lru_cache(maxsize=16)
def frobenius_points(base: PrimePower, k: int) -> tuple[np.ndarray, np.ndarray]:
    """One point per Frobenius orbit of F_{q^k}, with the orbit sizes.

    For g over F_q, chi(g(x)) is constant on orbits x -> x^q, so weighted
    sums over these points equal sums over the whole field.
    """
    F = field_for(base, k, ceiling=base.q**k)
    Q1 = F.order - 1
    logs = np.arange(Q1, dtype=np.int64)
    least = logs.copy()
    size = np.zeros(Q1, dtype=np.int64)
    cur = logs.copy()
    for i in range(1, k + 1):
        cur = (cur * base.q) % Q1
        np.minimum(least, cur, out=least)
        size[(size == 0) & (cur == logs)] = i
    keep = least == logs
    xs = np.concatenate([[0], F.exp_table[logs[keep]]]).astype(np.int64)
    weights = np.concatenate([[1], size[keep]]).astype(np.int64)
    order = np.argsort(xs)
    return xs[order], weights[order]


def _column_chunks(base: PrimePower, k: int, rows: int):
    xs, w = frobenius_points(base, k)
    width = max(1, _BLOCK_ENTRIES // max(rows, 1))
    for start in range(0, xs.size, width):
        yield xs[start : start + width], w[start : start + width]


def character_sums(base: PrimePower, k: int, coeffs: np.ndarray) -> np.ndarray:
    """sum over F_{q^k} of chi(g(x)) for each monic row of ``coeffs``."""
    out = np.zeros(coeffs.shape[0], dtype=np.int64)
    for start in range(0, coeffs.shape[0], 4096):
        rows = coeffs[start : start + 4096]
        for xs, w in _column_chunks(base, k, rows.shape[0]):
            out[start : start + rows.shape[0]] += chi_block(base, k, rows, xs).astype(np.int64) @ w
    return out


def cross_sums(
    base: PrimePower, k: int, A: np.ndarray, B: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Character sums of monic rows A, B and of all products a*b over F_{q^k}.

    Returns (S_A, S_B, S_AB) with S_AB[i, j] = sum chi(a_i(x)) chi(b_j(x)).
    """
    Q = base.q**k
    SA = np.zeros(A.shape[0], dtype=np.int64)
    SB = np.zeros(B.shape[0], dtype=np.int64)
    SAB = np.zeros((A.shape[0], B.shape[0]), dtype=np.float64)
    dtype = np.float32 if Q < (1 << 24) else np.float64
    for xs, w in _column_chunks(base, k, A.shape[0] + B.shape[0]):
        ca = chi_block(base, k, A, xs)
        cb = chi_block(base, k, B, xs)
        SA += ca.astype(np.int64) @ w
        SB += cb.astype(np.int64) @ w
        SAB += ca.astype(dtype) @ (cb.astype(dtype) * w.astype(dtype)).T
    return SA, SB, np.rint(SAB).astype(np.int64)


def common_root_matrix(base: PrimePower, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """True where monic rows a_i and b_j share a root in some extension.

    A shared root has degree at most m = min(deg a, deg b) over F_q, so it
    lies in F_{q^j} for some j in (m/2, m].  Roots come in Frobenius orbits,
    so orbit representatives suffice.
    """
    m = min(A.shape[1], B.shape[1])
    out = np.zeros((A.shape[0], B.shape[0]), dtype=bool)
    if m == 0:
        return out
    for j in range(m // 2 + 1, m + 1):
        acc = np.zeros(out.shape, dtype=np.float64)
        for xs, _ in _column_chunks(base, j, A.shape[0] + B.shape[0]):
            za = (chi_block(base, j, A, xs) == 0).astype(np.float32)
            zb = (chi_block(base, j, B, xs) == 0).astype(np.float32)
            acc += za @ zb.T
        out |= acc > 0.5
    return out


def lc_character(base: PrimePower, lcs: tuple[int, ...]) -> np.ndarray:
    F = field_for(base)
    return F.chi_table[np.asarray(lcs, dtype=np.int64)].astype(np.int64)


def decode(base: PrimePower, d: int, lcs: tuple[int, ...], index: int) -> tuple[int, ...]:
    """Coefficient tuple (constant first) of the member lc * g."""
    q = base.q
    F = field_for(base)
    pos, code = divmod(int(index), q**d)
    lc = lcs[pos]
    coeffs = []
    for _ in range(d):
        code, r = divmod(code, q)
        coeffs.append(F.smul(lc, r))
    return tuple(coeffs) + (lc,)


def encode(base: PrimePower, lcs: tuple[int, ...], f: tuple[int, ...]) -> int:
    q, d = base.q, len(f) - 1
    F = field_for(base)
    inv = F.sinv(f[-1])
    code = sum(F.smul(int(c), inv) * q**i for i, c in enumerate(f[:-1]))
    return lcs.index(f[-1]) * q**d + code


# re-exported for callers that only need the field
__all__ = [
    "AffineAction",
    "Orbits",
    "affine_group",
    "all_lcs",
    "canonical_lcs",
    "character_sums",
    "chi_block",
    "common_root_matrix",
    "cross_sums",
    "decode",
    "encode",
    "lc_character",
    "make_field",
    "monic_coeffs",
    "nonsquare_code",
    "orbits",
    "squarefree_mask",
]
