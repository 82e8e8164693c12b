"""Finite fields F_{q^k} for odd q = p^e, small enough to enumerate.

Every field is F_p[t]/(modulus) with the modulus of degree e*k chosen as
the least monic irreducible polynomial in the order of its integer code.
Elements are integer codes ``sum(c_i * p**i)`` of their coordinate
vectors (c_0, ..., c_{n-1}) in the basis 1, t, ..., t^{n-1}.

Multiplication goes through exp/log tables built from a primitive element,
so the quadratic character is just the parity of the discrete log.  All
table operations accept either Python ints or numpy arrays of codes.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

DEFAULT_CEILING = 13**6
CEILING_ENV = "PRYMCOUNT_CEILING"

# full q x q addition/multiplication tables are kept below this size
_TABLE_LIMIT = 1024
_BLOCK = 1024


class FieldError(ValueError):
    pass


class CeilingError(FieldError):
    """Field or enumeration larger than the configured ceiling."""


def enumeration_ceiling() -> int:
    raw = os.environ.get(CEILING_ENV)
    if raw:
        return int(raw)
    return DEFAULT_CEILING


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class PrimePower:
    """An odd prime power q = p^e."""

    p: int
    e: int = 1
    q: int = field(init=False)

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.p == 2:
            raise FieldError("characteristic 2 is not supported")
        if self.e < 1:
            raise FieldError(f"exponent must be positive, got {self.e}")
        object.__setattr__(self, "q", self.p**self.e)

    @classmethod
    def from_q(cls, q: int) -> "PrimePower":
        """Factor q as p^e; raises FieldError unless q is an odd prime power."""
        if q < 3:
            raise FieldError(f"{q} is not an odd prime power")
        factors = prime_factors(q)
        if len(factors) != 1:
            raise FieldError(f"{q} is not a prime power")
        p = factors[0]
        e = 0
        n = q
        while n % p == 0:
            n //= p
            e += 1
        return cls(p, e)

    def __str__(self) -> str:
        return str(self.q)


# -- polynomials over F_p on coefficient lists (low degree first) ----------
# Only used to pick moduli and primitive elements.


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, m, p)


def _ppowmod(a: list[int], n: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, m, p)
    while n:
        if n & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        n >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _code_to_poly(code: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        code, r = divmod(code, p)
        out.append(r)
    return out


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Ben-Or test: f has no factor of degree d for d <= deg(f)/2."""
    f = _trim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(n // 2):
        xp = _ppowmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(f, _trim(diff), p)
        if len(g) > 1:
            return False
    return True


def least_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Least monic irreducible polynomial of degree n over F_p, by code order."""
    if n == 1:
        return (0, 1)
    for code in range(p**n):
        f = _code_to_poly(code, p, n) + [1]
        if f[0] == 0:
            continue
        if is_irreducible_mod_p(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {n} over F_{p}")  # pragma: no cover


class ExtensionField:
    """F_{q^k} with q = p^e, stored as F_p[t]/(modulus) of degree n = e*k.

    Construct through :func:`make_field`, which caches instances.
    """

    def __init__(self, base: PrimePower, k: int, ceiling: int | None = None) -> None:
        if k < 1:
            raise FieldError(f"extension degree must be positive, got {k}")
        ceiling = enumeration_ceiling() if ceiling is None else ceiling
        self.base = base
        self.k = k
        self.p = base.p
        self.n = base.e * k
        self.order = self.p**self.n
        if self.order > ceiling:
            raise CeilingError(f"field of size {self.p}^{self.n} exceeds ceiling {ceiling}")
        self.modulus = least_irreducible(self.p, self.n)
        self._pw_list = [self.p**i for i in range(self.n)]
        self._powers = np.array(self._pw_list, dtype=np.int64)
        self._build_tables()
        self._add_table: np.ndarray | None = None
        self._mul_table: np.ndarray | None = None
        if self.order <= _TABLE_LIMIT:
            codes = np.arange(self.order, dtype=np.int64)
            self._add_table = self._digit_add(codes[:, None], codes[None, :]).astype(np.int32)
            self._mul_table = self._log_mul(codes[:, None], codes[None, :]).astype(np.int32)
        self._embed: np.ndarray | None = None

    def __repr__(self) -> str:
        return f"ExtensionField(q={self.base.q}, k={self.k}, modulus={self.modulus})"

    @property
    def q(self) -> int:
        return self.base.q

    # -- construction --------------------------------------------------------

    def _mult_matrix(self, elem: list[int]) -> np.ndarray:
        """Matrix M with digits(v) @ M = digits(v * elem) mod p."""
        m = list(self.modulus)
        rows = []
        cur = _pmod(elem, m, self.p)
        for _ in range(self.n):
            rows.append(cur + [0] * (self.n - len(cur)))
            cur = _pmulmod(cur, [0, 1], m, self.p)
        return np.array(rows, dtype=np.int64)

    def _find_primitive(self) -> list[int]:
        m = list(self.modulus)
        group = self.order - 1
        exps = [group // r for r in prime_factors(group)] if group > 1 else []
        for code in range(1, self.order):
            g = _trim(_code_to_poly(code, self.p, self.n))
            if all(_ppowmod(g, ex, m, self.p) != [1] for ex in exps):
                return g
        raise FieldError("no primitive element")  # pragma: no cover

    def _build_tables(self) -> None:
        p, n, group = self.p, self.n, self.order - 1
        self.generator = self._find_primitive()
        digits = np.zeros((group, n), dtype=np.int64)
        digits[0, 0] = 1
        step = self._mult_matrix(self.generator)
        head = min(group, _BLOCK)
        for i in range(1, head):
            digits[i] = digits[i - 1] @ step % p
        if group > head:
            jump_elem = _trim([int(c) for c in digits[head - 1]])
            jump = self._mult_matrix(_pmulmod(jump_elem, self.generator, list(self.modulus), p))
            start = head
            while start < group:
                stop = min(start + head, group)
                digits[start:stop] = digits[start - head : stop - head] @ jump % p
                start = stop
        exp = (digits @ self._powers).astype(np.int64)
        log = np.full(self.order, -1, dtype=np.int64)
        log[exp] = np.arange(group, dtype=np.int64)
        self.exp_table = exp
        self.log_table = log
        chi = np.zeros(self.order, dtype=np.int8)
        nz = np.arange(1, self.order)
        chi[nz] = np.where(log[nz] % 2 == 0, 1, -1)
        self.chi_table = chi
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()

    # -- vectorized arithmetic on codes ---------------------------------------

    def _digit_add(self, a, b, sign: int = 1):
        p = self.p
        if self.n == 1:
            return (a + sign * b) % p
        out = 0
        for pw in self._pw_list:
            da = (a // pw) % p
            db = (b // pw) % p
            out = out + ((da + sign * db) % p) * pw
        return out

    def _log_mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la = self.log_table[a]
        lb = self.log_table[b]
        prod = self.exp_table[(la + lb) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    def add(self, a, b):
        if self._add_table is not None:
            return self._add_table[a, b]
        return self._digit_add(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))

    def sub(self, a, b):
        return self._digit_add(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), -1)

    def mul(self, a, b):
        if self._mul_table is not None:
            return self._mul_table[a, b]
        return self._log_mul(a, b)

    def chi(self, a):
        return self.chi_table[a]

    # -- scalar arithmetic on ints -------------------------------------------

    def sadd(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        return int(self._digit_add(a, b))

    def ssub(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a - b) % self.p
        return int(self._digit_add(a, b, -1))

    def sneg(self, a: int) -> int:
        return self.ssub(0, a)

    def smul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp_list[(self._log_list[a] + self._log_list[b]) % (self.order - 1)]

    def sinv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp_list[(-self._log_list[a]) % (self.order - 1)]

    def spow(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n > 0 else 1
        return self._exp_list[(self._log_list[a] * n) % (self.order - 1)]

    def schi(self, a: int) -> int:
        return int(self.chi_table[a])

    def one(self) -> int:
        return 1

    # -- embedding of F_q ----------------------------------------------------

    @property
    def embedding(self) -> np.ndarray:
        """Array mapping codes of F_q to codes of this field (cached)."""
        if self._embed is None:
            self._embed = self._compute_embedding()
        return self._embed

    def _compute_embedding(self) -> np.ndarray:
        base = self.base
        if self.k == 1:
            return np.arange(base.q, dtype=np.int64)
        small = make_field(base.p, base.e, 1)
        if base.e == 1:
            return np.arange(base.q, dtype=np.int64)
        # root of the F_q modulus inside the subfield of order q
        step = (self.order - 1) // (base.q - 1)
        candidates = sorted(self._exp_list[j * step] for j in range(base.q - 1))
        root = None
        for r in candidates:
            acc = 0
            for c in reversed(small.modulus):
                acc = self.sadd(self.smul(acc, r), c)
            if acc == 0:
                root = r
                break
        assert root is not None
        out = np.zeros(base.q, dtype=np.int64)
        for code in range(base.q):
            coords = _code_to_poly(code, base.p, base.e)
            acc = 0
            for c in reversed(coords):
                acc = self.sadd(self.smul(acc, root), c)
            out[code] = acc
        return out

    def embed(self, code: int) -> int:
        return int(self.embedding[code])

    # -- elements --------------------------------------------------------------

    def element(self, value: int | Sequence[int]) -> "FieldElement":
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, int(value) % self.order)
        coords = [int(c) % self.p for c in value]
        if len(coords) != self.n:
            raise FieldError(f"expected {self.n} coordinates, got {len(coords)}")
        return FieldElement(self, int(np.dot(coords, self._powers)))

    def __iter__(self) -> Iterator["FieldElement"]:
        return (FieldElement(self, c) for c in range(self.order))

    def __len__(self) -> int:
        return self.order


@dataclass(frozen=True)
class FieldElement:
    field: ExtensionField
    value: int

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(_code_to_poly(self.value, self.field.p, self.field.n))

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.field.sadd(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.ssub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.ssub(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.sneg(self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.smul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self.field.sinv(self._other(other))

    def __pow__(self, n: int):
        if n < 0:
            return FieldElement(self.field, self.field.spow(self.field.sinv(self.value), -n))
        return FieldElement(self.field, self.field.spow(self.value, n))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.sinv(self.value))

    def frobenius(self) -> "FieldElement":
        return self ** self.field.p

    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"F{self.field.order}({self.value})"


@functools.lru_cache(maxsize=None)
def _make_field_cached(p: int, e: int, k: int) -> ExtensionField:
    return ExtensionField(PrimePower(p, e), k, ceiling=p ** (e * k))


def make_field(p: int, e: int = 1, k: int = 1, ceiling: int | None = None) -> ExtensionField:
    """The field F_{(p^e)^k}; instances are cached and immutable.

    Raises FieldError for a non-prime or even p, CeilingError when
    p^(e*k) is above the enumeration ceiling.
    """
    ceiling = enumeration_ceiling() if ceiling is None else ceiling
    PrimePower(p, e)  # validation
    if k < 1:
        raise FieldError(f"extension degree must be positive, got {k}")
    if p ** (e * k) > ceiling:
        raise CeilingError(f"field of size {p}^{e * k} exceeds ceiling {ceiling}")
    return _make_field_cached(p, e, k)


def field_for(base: PrimePower, k: int = 1, ceiling: int | None = None) -> ExtensionField:
    return make_field(base.p, base.e, k, ceiling)


def quadratic_character(a: FieldElement) -> int:
    """0 for zero, 1 for a nonzero square, -1 otherwise, via a^((Q-1)/2)."""
    if a.value == 0:
        return 0
    r = a ** ((a.field.order - 1) // 2)
    return 1 if r.value == 1 else -1


def enumerate_elements(F: ExtensionField) -> list[FieldElement]:
    """All elements of F in increasing code order."""
    if F.order > enumeration_ceiling():
        raise CeilingError(f"field of size {F.order} exceeds ceiling")
    return list(F)
