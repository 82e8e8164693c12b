"""Dense univariate polynomials over a finite field.

A polynomial is a tuple of field codes, constant term first, with no
trailing zeros; ``()`` is the zero polynomial.  Every function takes the
coefficient field as its first argument.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .ff import ExtensionField

Poly = tuple[int, ...]


def trim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(int(c) for c in a)


def degree(a: Poly) -> int:
    return len(a) - 1


def add(F: ExtensionField, a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return trim(F.sadd(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n))


def sub(F: ExtensionField, a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return trim(F.ssub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n))


def scale(F: ExtensionField, a: Poly, c: int) -> Poly:
    return trim(F.smul(x, c) for x in a)


def mul(F: ExtensionField, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = F.sadd(out[i + j], F.smul(ai, bj))
    return trim(out)


def divmod_(F: ExtensionField, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv = F.sinv(b[-1])
    quot = [0] * max(0, len(a) - db)
    while len(r) - 1 >= db and r:
        c = F.smul(r[-1], inv)
        shift = len(r) - 1 - db
        quot[shift] = c
        for i, bi in enumerate(b):
            r[shift + i] = F.ssub(r[shift + i], F.smul(c, bi))
        r = list(trim(r))
    return trim(quot), trim(r)


def monic(F: ExtensionField, a: Poly) -> Poly:
    if not a:
        return a
    return scale(F, a, F.sinv(a[-1]))


def gcd(F: ExtensionField, a: Poly, b: Poly) -> Poly:
    """Monic gcd (``()`` only when both inputs are zero)."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(F, a, b)[1]
    return monic(F, a)


def derivative(F: ExtensionField, a: Poly) -> Poly:
    out = []
    for i in range(1, len(a)):
        c = 0
        for _ in range(i % F.p):
            c = F.sadd(c, a[i])
        out.append(c)
    return trim(out)


def is_squarefree(F: ExtensionField, a: Poly) -> bool:
    if not a:
        return False
    if len(a) == 1:
        return True
    return len(gcd(F, a, derivative(F, a))) == 1


def evaluate(F: ExtensionField, a: Poly, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.sadd(F.smul(acc, x), c)
    return acc


def evaluate_embedded(big: ExtensionField, a: Poly, xs) -> np.ndarray:
    """Evaluate a polynomial over the base field of ``big`` at codes ``xs`` of ``big``.

    ``xs`` is an array of codes in ``big``; returns codes in ``big``.
    """
    emb = big.embedding
    xs = np.asarray(xs, dtype=np.int64)
    acc = np.zeros_like(xs)
    for c in reversed(a):
        acc = big.add(big.mul(acc, xs), int(emb[c]))
    return np.asarray(acc, dtype=np.int64)


def compose_affine(F: ExtensionField, a: Poly, s: int, t: int) -> Poly:
    """a(s*x + t)."""
    lin = trim((t, s))
    acc: Poly = ()
    for c in reversed(a):
        acc = add(F, mul(F, acc, lin), trim((c,)))
    return acc


def to_str(a: Poly) -> str:
    return ",".join(str(c) for c in a)


def from_str(s: str) -> Poly:
    s = s.strip()
    if not s:
        return ()
    return trim(int(x) for x in s.split(","))
