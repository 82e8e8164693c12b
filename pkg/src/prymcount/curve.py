"""Double covers y^2 = f(x) of the projective line and brute-force point counts."""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import poly
from .ff import FieldError, PrimePower, field_for, make_field
from .poly import Poly


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class HyperellipticModel:
    """The smooth projective model of y^2 = twist * f(x) over F_q.

    ``f`` holds codes of F_q, constant term first.  Infinity is a branch
    point exactly when deg f is odd.
    """

    base: PrimePower
    f: Poly
    twist: int = 1

    def __post_init__(self) -> None:
        f = poly.trim(self.f)
        object.__setattr__(self, "f", f)
        if self.twist % self.base.q == 0 or not 0 < self.twist < self.base.q:
            raise CurveError(f"twist must be a nonzero element code, got {self.twist}")
        if len(f) < 2:
            raise CurveError("f must have degree at least 1")
        if any(not 0 <= c < self.base.q for c in f):
            raise CurveError("coefficient code out of range")
        F = field_for(self.base)
        if not poly.is_squarefree(F, f):
            raise CurveError(f"f = {f} is not squarefree")

    @property
    def poly(self) -> Poly:
        """twist * f."""
        if self.twist == 1:
            return self.f
        return poly.scale(field_for(self.base), self.f, self.twist)

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    @property
    def infinity_branch(self) -> bool:
        return self.degree % 2 == 1

    @property
    def branch_degree(self) -> int:
        return self.degree + (self.degree % 2)

    @property
    def leading(self) -> int:
        return self.poly[-1]

    def serialize(self) -> str:
        return f"{self.base.p},{self.base.e};{poly.to_str(self.poly)}"

    @classmethod
    def parse(cls, text: str) -> "HyperellipticModel":
        head, _, coeffs = text.partition(";")
        p, e = (int(x) for x in head.split(","))
        return cls(PrimePower(p, e), poly.from_str(coeffs))


@dataclass(frozen=True)
class PointCount:
    k: int
    n: int


def genus(C: HyperellipticModel) -> int:
    return (C.degree + 1) // 2 - 1


def character_sum(base: PrimePower, f: Poly, k: int, ceiling: int | None = None) -> int:
    """sum over x in F_{q^k} of chi(f(x))."""
    return _character_sum(base, tuple(f), k, ceiling)


@functools.lru_cache(maxsize=65536)
def _character_sum(base: PrimePower, f: Poly, k: int, ceiling: int | None) -> int:
    F = field_for(base, k, ceiling)
    vals = poly.evaluate_embedded(F, f, np.arange(F.order, dtype=np.int64))
    return int(F.chi_table[vals].sum(dtype=np.int64))


def infinity_points(base: PrimePower, f: Poly, k: int, ceiling: int | None = None) -> int:
    """Points above infinity on y^2 = f over F_{q^k}: 1 if deg f odd, else 1 + chi(lc)."""
    if (len(f) - 1) % 2 == 1:
        return 1
    return 1 + leading_character(base, f[-1], k)


def leading_character(base: PrimePower, c: int, k: int) -> int:
    """chi_{F_{q^k}} of an element of F_q: chi(c)^k."""
    chi = int(field_for(base).chi_table[c])
    return chi**k


def count_points(C: HyperellipticModel, k: int = 1, ceiling: int | None = None) -> PointCount:
    """N_k(C) by summing 1 + chi(f(x)) over F_{q^k} plus the points at infinity."""
    if k < 1:
        raise CurveError("k must be positive")
    f = C.poly
    q_k = C.base.q**k
    n = q_k + character_sum(C.base, f, k, ceiling) + infinity_points(C.base, f, k)
    g = genus(C)
    dev = n - q_k - 1
    assert dev * dev <= 4 * g * g * q_k, "Weil bound violated"
    return PointCount(k, n)


def branch_divisor_disjoint(C1: HyperellipticModel, C2: HyperellipticModel) -> bool:
    if C1.base != C2.base:
        raise FieldError("curves over different fields")
    if C1.infinity_branch and C2.infinity_branch:
        return False
    F = field_for(C1.base)
    return len(poly.gcd(F, C1.f, C2.f)) == 1


def nonsquare(base: PrimePower) -> int:
    """Least code of a non-square in F_q."""
    F = field_for(base)
    for c in range(1, base.q):
        if F.chi_table[c] == -1:
            return c
    raise FieldError("no non-square")  # pragma: no cover


def all_squarefree(base: PrimePower, degree: int, leading: tuple[int, ...] | None = None):
    """Yield squarefree polynomials of exact degree in increasing code order.

    ``leading`` restricts the leading coefficient (default: all nonzero).
    Brute force; intended for small q and degree.
    """
    F = make_field(base.p, base.e)
    q = base.q
    lcs = leading if leading is not None else tuple(range(1, q))
    for lc in lcs:
        for code in range(q**degree):
            coeffs = []
            c = code
            for _ in range(degree):
                c, r = divmod(c, q)
                coeffs.append(r)
            f = tuple(coeffs) + (lc,)
            if poly.is_squarefree(F, f):
                yield f
