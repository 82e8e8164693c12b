"""Exact extremal point counts of Prym varieties of dimension 1 and 2.

Everything here is integer arithmetic.  With m = floor(2 sqrt(q)) the
fractional part {2 sqrt(q)} is compared with thresholds (sqrt(r) + u)/v by
nested squaring, so case selection never depends on floating point.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import isqrt

from .bounds import ge_sqrt
from .ff import PrimePower
from .zeta import ruck_admissible

# (r, u, v) with threshold (sqrt(r) + u) / v
THRESHOLDS = {"sqrt5": (5, -1, 2), "sqrt2": (2, -1, 1), "sqrt3": (3, -1, 1)}


def _frac_at_least(q: int, m: int, r: int, u: int, v: int) -> bool:
    """{2 sqrt(q)} >= (sqrt(r) + u)/v, i.e. 2v sqrt(q) - (vm + u) >= sqrt(r)."""
    B = v * m + u
    # A = 2v sqrt(q) - B must be nonnegative before squaring
    if not ge_sqrt(-B, -2 * v, q):
        return False
    # A^2 = 4v^2 q + B^2 - 4vB sqrt(q) >= r
    return ge_sqrt(4 * v * v * q + B * B - r, 4 * v * B, q)


@dataclass(frozen=True)
class SqrtClass:
    q: PrimePower
    m: int
    is_square: bool
    frac_flags: dict

    @property
    def b(self) -> int:
        return self.q.q + 1 + self.m

    @property
    def b_prime(self) -> int:
        return self.q.q + 1 - self.m

    @property
    def generic(self) -> bool:
        """e = 1, e even, or p does not divide m."""
        return self.q.e == 1 or self.q.e % 2 == 0 or self.m % self.q.p != 0


def _as_pp(q) -> PrimePower:
    return q if isinstance(q, PrimePower) else PrimePower.from_q(int(q))


def sqrt_class(q) -> SqrtClass:
    pp = _as_pp(q)
    m = isqrt(4 * pp.q)
    flags = {name: _frac_at_least(pp.q, m, *t) for name, t in THRESHOLDS.items()}
    return SqrtClass(pp, m, pp.e % 2 == 0, flags)


def elliptic_trace_exists(q, t: int) -> bool:
    """Whether some elliptic curve over F_q has Frobenius trace t (N = q + 1 - t)."""
    pp = _as_pp(q)
    qq, p, e = pp.q, pp.p, pp.e
    if t * t > 4 * qq:
        return False
    if t % p:
        return True
    if e % 2 == 0:
        r = isqrt(qq)
        if abs(t) == 2 * r:
            return True
        if abs(t) == r and p % 3 != 1:
            return True
        return t == 0 and p % 4 != 1
    if t == 0:
        return True
    return p == 3 and abs(t) == 3 ** ((e + 1) // 2)


@dataclass(frozen=True)
class ExactValue:
    value: int
    bullet: str


def elliptic_extremes(q) -> tuple[ExactValue, ExactValue]:
    """Largest and smallest #E(F_q) over elliptic curves E/F_q."""
    sc = sqrt_class(q)
    qq, m = sc.q.q, sc.m
    if sc.generic:
        tag = "e=1 or e even or p does not divide m"
        return ExactValue(qq + 1 + m, tag), ExactValue(qq + 1 - m, tag)
    tag = "e odd > 1 and p divides m"
    return ExactValue(qq + m, tag), ExactValue(qq + 2 - m, tag)


def prym_max_2(q) -> ExactValue:
    """Largest #P(F_q) over Prym surfaces."""
    sc = sqrt_class(q)
    qq, m, b = sc.q.q, sc.m, sc.b
    if sc.generic:
        return ExactValue(b * b, "e=1 or e even or p does not divide m")
    if sc.frac_flags["sqrt5"]:
        return ExactValue(b * b - b - 1, "p | m, e odd > 1, {2sqrt(q)} >= (sqrt5-1)/2")
    return ExactValue((qq + m) ** 2, "p | m, e odd > 1, {2sqrt(q)} < (sqrt5-1)/2")


def prym_min_2(q) -> ExactValue:
    """Smallest #P(F_q) over Prym surfaces."""
    sc = sqrt_class(q)
    qq, m, bp = sc.q.q, sc.m, sc.b_prime
    if sc.generic:
        return ExactValue(bp * bp, "e=1 or e even or p does not divide m")
    if sc.frac_flags["sqrt5"]:
        return ExactValue(bp * bp + bp - 1, "p | m, e odd > 1, {2sqrt(q)} >= (sqrt5-1)/2")
    if sc.frac_flags["sqrt2"]:
        return ExactValue((qq + 2 - m) ** 2 - 2, "p | m, e odd > 1, sqrt2-1 <= {2sqrt(q)} < (sqrt5-1)/2")
    return ExactValue((qq + 2 - m) ** 2, "p | m, e odd > 1, {2sqrt(q)} < sqrt2-1")


# -- tables -------------------------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    a1: int
    a2: int
    type_tag: str
    count_formula: str
    count_value: int
    needs: str | None = None  # frac flag required for the type to be real

    def surface_count(self, q: int) -> int:
        return q * q + 1 + (q + 1) * self.a1 + self.a2


def _rows(q: int, m: int, sign: int) -> list[tuple]:
    """(a1, a2, type, formula, value, needs) in table order."""
    if sign > 0:
        b = q + 1 + m
        return [
            (2 * m, m * m + 2 * q, "[m,m]", "b^2", b * b, None),
            (2 * m - 1, m * m - m + 2 * q, "[m,m-1]", "b(b-1)", b * (b - 1), None),
            (2 * m - 1, m * m - m - 1 + 2 * q, "[m+phi1,m+phi2]", "b^2-b-1", b * b - b - 1, "sqrt5"),
            (2 * m - 2, m * m - 2 * m + 1 + 2 * q, "[m-1,m-1]", "(b-1)^2", (b - 1) ** 2, None),
            (2 * m - 2, m * m - 2 * m + 2 * q, "[m,m-2]", "b(b-2)", b * (b - 2), None),
            (2 * m - 2, m * m - 2 * m - 1 + 2 * q, "[m-1+sqrt2,m-1-sqrt2]", "(b-1)^2-2", (b - 1) ** 2 - 2, "sqrt2"),
            (2 * m - 2, m * m - 2 * m - 2 + 2 * q, "[m-1+sqrt3,m-1-sqrt3]", "(b-1)^2-3", (b - 1) ** 2 - 3, "sqrt3"),
        ]
    bp = q + 1 - m
    return [
        (-2 * m, m * m + 2 * q, "[-m,-m]", "b'^2", bp * bp, None),
        (-2 * m + 1, m * m - m - 1 + 2 * q, "[-m-phi1,-m-phi2]", "b'^2+b'-1", bp * bp + bp - 1, "sqrt5"),
        (-2 * m + 1, m * m - m + 2 * q, "[-m,-m+1]", "b'(b'+1)", bp * (bp + 1), None),
        (-2 * m + 2, m * m - 2 * m - 2 + 2 * q, "[-m+1+sqrt3,-m+1-sqrt3]", "(b'+1)^2-3", (bp + 1) ** 2 - 3, "sqrt3"),
        (-2 * m + 2, m * m - 2 * m - 1 + 2 * q, "[-m+1+sqrt2,-m+1-sqrt2]", "(b'+1)^2-2", (bp + 1) ** 2 - 2, "sqrt2"),
        (-2 * m + 2, m * m - 2 * m + 2 * q, "[-m,-m+2]", "b'(b'+2)", bp * (bp + 2), None),
        (-2 * m + 2, m * m - 2 * m + 1 + 2 * q, "[-m+1,-m+1]", "(b'+1)^2", (bp + 1) ** 2, None),
    ]


def table_max(q) -> list[TableRow]:
    """The seven (a1, a2) with a1 >= 2m - 2 and the largest surface counts."""
    sc = sqrt_class(q)
    return [TableRow(*r) for r in _rows(sc.q.q, sc.m, +1)]


def table_min(q) -> list[TableRow]:
    """The seven (a1, a2) with a1 <= -2m + 2 and the smallest counts; needs q > 5."""
    sc = sqrt_class(q)
    if sc.q.q <= 5:
        raise ValueError(f"the minimizing table is not ordered for q = {sc.q.q} <= 5")
    return [TableRow(*r) for r in _rows(sc.q.q, sc.m, -1)]


def integral_type(row: TableRow, q: int) -> tuple[int, int] | None:
    disc = row.a1 * row.a1 - 4 * (row.a2 - 2 * q)
    if disc < 0 or isqrt(disc) ** 2 != disc:
        return None
    r = isqrt(disc)
    return ((row.a1 + r) // 2, (row.a1 - r) // 2)


def is_real_type(row: TableRow, q) -> bool:
    sc = sqrt_class(q)
    return row.needs is None or sc.frac_flags[row.needs]


def row_exists(row: TableRow, q) -> str:
    """'yes', 'no' or 'undetermined' for an abelian surface with this (a1, a2).

    Integral types [x1, x2] exist exactly when elliptic curves of traces
    -x1 and -x2 do; irrational types need a real type, and p not dividing a2
    then suffices.
    """
    sc = sqrt_class(q)
    qq = sc.q.q
    if not is_real_type(row, q) or not ruck_admissible(qq, row.a1, row.a2):
        return "no"
    xs = integral_type(row, qq)
    if xs is not None:
        ok = all(elliptic_trace_exists(sc.q, -x) for x in xs)
        return "yes" if ok else "no"
    return "yes" if row.a2 % sc.q.p else "undetermined"


def prym_note(row: TableRow, q) -> str:
    """How a surface in this isogeny class is realized as a Prym variety."""
    sc = sqrt_class(q)
    qq = sc.q.q
    xs = integral_type(row, qq)
    if xs is None:
        return "Jacobian of a genus-2 curve; add a genus-0 factor"
    x1, x2 = xs
    if x1 != x2:
        return "product of elliptic curves with different traces; needs a disjoint pair"
    n = qq + 1 + x1
    if n in (1, 2, 4):
        return "E x E with #E in {1,2,4}; needs a disjoint pair from a moved branch locus"
    return "E x E' with E' the translate by a point of order > 2"


def replay(q, side: str) -> tuple[int, TableRow]:
    """Walk the table from the top and return the first existing row's count.

    Rows whose existence is undetermined stop the walk with an error.
    """
    rows = table_max(q) if side == "max" else table_min(q)
    for row in rows:
        ex = row_exists(row, q)
        if ex == "undetermined":
            raise ValueError(f"existence of {row.type_tag} undetermined for q = {q}")
        if ex == "yes":
            return row.count_value, row
    raise ValueError("no table row exists")  # pragma: no cover


def tables_csv(q, side: str = "max") -> str:
    rows = table_max(q) if side == "max" else table_min(q)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a1", "a2", "type", "count", "exists", "prym_realizable_note"])
    for row in rows:
        ex = row_exists(row, q)
        note = prym_note(row, q) if ex == "yes" else ("not a real type" if not is_real_type(row, q) else "")
        w.writerow([row.a1, row.a2, row.type_tag, row.count_value, ex, note])
    return buf.getvalue()
