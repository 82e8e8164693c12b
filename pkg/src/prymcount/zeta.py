"""Weil polynomials of abelian varieties over F_q, kept as exact integers.

For an abelian variety of dimension g the Weil polynomial is

    f(t) = t^{2g} + a_1 t^{2g-1} + ... + a_g t^g + q a_{g-1} t^{g-1} + ... + q^g

and only a_1..a_g are stored.  With roots w_i, conj(w_i) and
x_i = -(w_i + conj(w_i)) the trace data used throughout is
tau_k = -sum(w_i^k + conj(w_i)^k), so tau_1 = a_1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Sequence

import numpy as np

from .ff import PrimePower


class WeilError(ValueError):
    pass


def _as_q(q: int | PrimePower) -> int:
    return q.q if isinstance(q, PrimePower) else int(q)


@dataclass(frozen=True)
class WeilPolynomial:
    q: int
    g: int
    a: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", _as_q(self.q))
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if len(self.a) != self.g:
            raise WeilError(f"expected {self.g} coefficients, got {len(self.a)}")

    @property
    def coefficients(self) -> list[int]:
        """c_0..c_{2g} with f(t) = sum c_i t^{2g-i}."""
        g, q = self.g, self.q
        c = [1] + list(self.a) + [0] * g
        for i in range(g):
            c[2 * g - i] = q ** (g - i) * c[i]
        return c

    def power_sums(self, depth: int) -> list[int]:
        """p_k = sum of k-th powers of all 2g roots, for k = 1..depth."""
        c = self.coefficients
        n = 2 * self.g
        p: list[int] = []
        for k in range(1, depth + 1):
            s = k * c[k] if k <= n else 0
            for i in range(1, min(k - 1, n) + 1):
                s += c[i] * p[k - i - 1]
            p.append(-s)
        return p

    def tau(self, k: int = 1) -> int:
        return tau_k(self, k)

    def __mul__(self, other: "WeilPolynomial") -> "WeilPolynomial":
        if self.q != other.q:
            raise WeilError("Weil polynomials over different fields")
        c1, c2 = self.coefficients, other.coefficients
        prod = [0] * (len(c1) + len(c2) - 1)
        for i, x in enumerate(c1):
            for j, y in enumerate(c2):
                prod[i + j] += x * y
        g = self.g + other.g
        return WeilPolynomial(self.q, g, tuple(prod[1 : g + 1]))

    def real_polynomial(self) -> list[int]:
        """h with f(t) = t^g h(t + q/t), as coefficients constant term first.

        The roots of h are the -x_i.
        """
        g, q = self.g, self.q
        c = self.coefficients
        # Dickson-type polynomials D_j with t^j + (q/t)^j = D_j(t + q/t)
        dick = [[2], [0, 1]]
        for j in range(2, g + 1):
            prev, prev2 = dick[j - 1], dick[j - 2]
            nxt = [0] + prev
            for i, v in enumerate(prev2):
                nxt[i] -= q * v
            dick.append(nxt)
        h = [0] * (g + 1)
        h[0] = c[g]
        for j in range(1, g + 1):
            for i, v in enumerate(dick[j]):
                h[i] += c[g - j] * v
        return h

    def is_valid(self) -> bool:
        """All roots of modulus sqrt(q), i.e. h real-rooted in [-2sqrt(q), 2sqrt(q)]."""
        if self.g == 0:
            return True
        if self.g == 1:
            return self.a[0] ** 2 <= 4 * self.q
        if self.g == 2:
            return ruck_admissible(self.q, self.a[0], self.a[1])
        return _real_rooted_in_window(self.real_polynomial(), self.q)

    def serialize(self) -> str:
        return f"{self.q};{self.g};{','.join(str(x) for x in self.a)}"

    @classmethod
    def parse(cls, text: str) -> "WeilPolynomial":
        q, g, a = text.split(";")
        coeffs = tuple(int(x) for x in a.split(",")) if a.strip() else ()
        return cls(int(q), int(g), coeffs)

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coefficients):
            d = 2 * self.g - i
            terms.append(f"{c}*t^{d}" if d else str(c))
        return " + ".join(terms)


def trivial(q: int | PrimePower) -> WeilPolynomial:
    """The Weil polynomial 1 of a zero-dimensional variety."""
    return WeilPolynomial(_as_q(q), 0, ())


def _real_rooted_in_window(h: list[int], q: int) -> bool:
    import sympy

    u = sympy.Symbol("u")
    P = sympy.Poly(list(reversed(h)), u)
    roots = P.real_roots()
    if len(roots) != P.degree():
        return False
    bound = 4 * q
    return all(bool(r**2 <= bound) for r in roots)


def from_counts(q: int | PrimePower, g: int, counts: Sequence[int]) -> WeilPolynomial:
    """Weil polynomial of a genus-g curve with N_k = counts[k-1], k = 1..g.

    Power sums p_k = q^k + 1 - N_k go through Newton's identities in exact
    integer arithmetic; a non-integral coefficient raises WeilError.
    """
    q = _as_q(q)
    if g < 0:
        raise WeilError("g must be nonnegative")
    if len(counts) < g:
        raise WeilError(f"need {g} point counts, got {len(counts)}")
    p = [q**k + 1 - int(counts[k - 1]) for k in range(1, g + 1)]
    c = [1]
    for k in range(1, g + 1):
        s = p[k - 1] + sum(c[i] * p[k - i - 1] for i in range(1, k))
        if s % k:
            raise WeilError(f"counts {list(counts)} give a non-integral coefficient a_{k}")
        c.append(-s // k)
    return WeilPolynomial(q, g, tuple(c[1:]))


def predicted_counts(W: WeilPolynomial, depth: int) -> list[int]:
    """N_k = q^k + 1 + tau_k for k = 1..depth."""
    return [W.q**k + 1 - pk for k, pk in enumerate(W.power_sums(depth), start=1)]


def num_points(W: WeilPolynomial) -> int:
    """#A(F_q) = f_A(1)."""
    return sum(W.coefficients)


def tau_k(W: WeilPolynomial, k: int) -> int:
    if k < 1:
        raise WeilError("k must be positive")
    if W.g == 0:
        return 0
    return -W.power_sums(k)[-1]


def ruck_admissible(q: int | PrimePower, a1: int, a2: int) -> bool:
    """|a1| <= 2m and 2|a1|sqrt(q) - 2q <= a2 <= a1^2/4 + 2q, decided exactly."""
    q = _as_q(q)
    m = isqrt(4 * q)
    if abs(a1) > 2 * m:
        return False
    if 4 * a2 > a1 * a1 + 8 * q:
        return False
    rhs = a2 + 2 * q
    if rhs < 0:
        return False
    return 4 * a1 * a1 * q <= rhs * rhs


@dataclass(frozen=True)
class SurfaceType:
    """Type [x1, x2] of an abelian surface, x_{1,2} = (a1 +- sqrt(disc))/2."""

    q: int
    a1: int
    a2: int

    @property
    def disc(self) -> int:
        return self.a1 * self.a1 - 4 * (self.a2 - 2 * self.q)

    @property
    def is_integral(self) -> bool:
        d = self.disc
        return d >= 0 and isqrt(d) ** 2 == d and (self.a1 + isqrt(d)) % 2 == 0

    def integral_roots(self) -> tuple[int, int]:
        if not self.is_integral:
            raise WeilError("type is not integral")
        r = isqrt(self.disc)
        return ((self.a1 + r) // 2, (self.a1 - r) // 2)

    @property
    def roots(self) -> tuple[float, float]:
        r = self.disc**0.5
        return ((self.a1 + r) / 2, (self.a1 - r) / 2)

    def num_points(self) -> int:
        return self.q**2 + 1 + (self.q + 1) * self.a1 + self.a2

    def __str__(self) -> str:
        if self.is_integral:
            x1, x2 = self.integral_roots()
            return f"[{x1},{x2}]"
        return f"[({self.a1}+sqrt({self.disc}))/2,({self.a1}-sqrt({self.disc}))/2]"


def surface_roots(q: int | PrimePower, a1: int, a2: int) -> SurfaceType:
    q = _as_q(q)
    if not ruck_admissible(q, a1, a2):
        raise WeilError(f"(a1, a2) = ({a1}, {a2}) is not admissible for q = {q}")
    return SurfaceType(q, a1, a2)


# -- vectorized versions over many varieties at once --------------------------


def from_counts_array(q: int, g: int, counts: np.ndarray) -> np.ndarray:
    """Row-wise :func:`from_counts`: counts (N, >=g) -> coefficients (N, g)."""
    counts = np.asarray(counts, dtype=np.int64)
    N = counts.shape[0]
    p = np.stack([q**k + 1 - counts[:, k - 1] for k in range(1, g + 1)], axis=1) if g else np.zeros((N, 0), np.int64)
    c = np.zeros((N, g + 1), dtype=np.int64)
    c[:, 0] = 1
    for k in range(1, g + 1):
        s = p[:, k - 1].copy()
        for i in range(1, k):
            s += c[:, i] * p[:, k - i - 1]
        if np.any(s % k):
            raise WeilError(f"non-integral coefficient a_{k} in a batch of counts")
        c[:, k] = -(s // k)
    return c[:, 1:]


def full_coefficients_array(q: int, a: np.ndarray) -> np.ndarray:
    """(N, 2g+1) coefficients c_0..c_{2g} from (N, g)."""
    N, g = a.shape
    c = np.zeros((N, 2 * g + 1), dtype=np.int64)
    c[:, 0] = 1
    c[:, 1 : g + 1] = a
    for i in range(g):
        c[:, 2 * g - i] = q ** (g - i) * c[:, i]
    return c


def tau_array(q: int, a: np.ndarray, depth: int) -> np.ndarray:
    """(N, depth) array of tau_k = -p_k for Weil polynomials with rows a."""
    a = np.asarray(a, dtype=np.int64)
    N, g = a.shape
    out = np.zeros((N, depth), dtype=np.int64)
    if g == 0:
        return out
    c = full_coefficients_array(q, a)
    n = 2 * g
    p = np.zeros((N, depth), dtype=np.int64)
    for k in range(1, depth + 1):
        s = k * c[:, k] if k <= n else np.zeros(N, dtype=np.int64)
        for i in range(1, min(k - 1, n) + 1):
            s = s + c[:, i] * p[:, k - i - 1]
        p[:, k - 1] = -s
    return -p


def num_points_array(q: int, a: np.ndarray) -> np.ndarray:
    return full_coefficients_array(q, np.asarray(a, dtype=np.int64)).sum(axis=1)


def product_array(q: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise products of Weil polynomials, returned as (N, g_a + g_b)."""
    ca = full_coefficients_array(q, a)
    cb = full_coefficients_array(q, b)
    g = a.shape[1] + b.shape[1]
    out = np.zeros((ca.shape[0], 2 * g + 1), dtype=np.int64)
    for i in range(ca.shape[1]):
        for j in range(cb.shape[1]):
            out[:, i + j] += ca[:, i] * cb[:, j]
    return out[:, 1 : g + 1]
