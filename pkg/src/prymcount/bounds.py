"""Closed-form bounds on the number of points and the trace of a Prym variety.

Throughout, ``q`` is the field size, ``g`` the dimension of the variety and
``tau`` the opposite of its trace, so #A = q^g + ... with tau = a_1.
Real-valued results are floats; every integer threshold (floors of
tau / 2 sqrt(q), parity tests, applicability) is decided exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import isqrt

TOL = 1e-9


class WindowError(ValueError):
    """tau outside the Weil window [-2g sqrt(q), 2g sqrt(q)]."""


# -- exact comparisons with sqrt(q) -------------------------------------------


def ge_sqrt(a: int, b: int, q: int) -> bool:
    """a >= b * sqrt(q) for integers a, b and q >= 0, decided exactly."""
    if b <= 0:
        return a >= 0 or a * a <= b * b * q
    return a >= 0 and a * a >= b * b * q


def le_sqrt(a: int, b: int, q: int) -> bool:
    """a <= b * sqrt(q)."""
    return ge_sqrt(-a, -b, q)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def floor_ratio(tau: int, q: int) -> int:
    """The integer n with 2n sqrt(q) <= tau < 2(n+1) sqrt(q)."""
    n = math.floor(tau / (2 * math.sqrt(q)))
    while not ge_sqrt(tau, 2 * n, q):
        n -= 1
    while ge_sqrt(tau, 2 * (n + 1), q):
        n += 1
    return n


def _is_int(x) -> bool:
    return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)


def _floor_ratio_any(tau, q: int) -> int:
    if _is_int(tau):
        return floor_ratio(int(tau), q)
    return math.floor(float(tau) / (2 * math.sqrt(q)))


def in_window(q: int, g: int, tau) -> bool:
    if _is_int(tau):
        t = int(tau)
        return t * t <= 4 * g * g * q
    return abs(float(tau)) <= 2 * g * math.sqrt(q) * (1 + TOL) + TOL


def _check_window(q: int, g: int, tau) -> None:
    if g < 1:
        raise ValueError("g must be at least 1")
    if not in_window(q, g, tau):
        raise WindowError(f"tau = {tau} outside [-2g sqrt(q), 2g sqrt(q)] for q={q}, g={g}")


# -- bounds on #A from tau ----------------------------------------------------


def weil_interval(q: int, g: int) -> tuple[float, float]:
    if g < 1:
        raise ValueError("g must be at least 1")
    r = math.sqrt(q)
    return ((q + 1 - 2 * r) ** g, (q + 1 + 2 * r) ** g)


def upper_M(q: int, g: int, tau) -> float:
    """(q + 1 + tau/g)^g, nondecreasing in tau."""
    _check_window(q, g, tau)
    return (q + 1 + float(tau) / g) ** g


def r_s(q: int, g: int, tau) -> tuple[int, int]:
    n = _floor_ratio_any(tau, q)
    return (g + n) // 2, (g - 1 - n) // 2


def lower_m(q: int, g: int, tau) -> float:
    """Piecewise-affine lower bound for #A in terms of tau.

    (q+1+tau-2(r-s)sqrt(q)) (q+1+2sqrt(q))^r (q+1-2sqrt(q))^s with
    r = floor((g + n)/2), s = floor((g-1-n)/2), n = floor(tau / 2sqrt(q)).
    """
    _check_window(q, g, tau)
    r, s = r_s(q, g, tau)
    sq = math.sqrt(q)
    return (q + 1 + float(tau) - 2 * (r - s) * sq) * (q + 1 + 2 * sq) ** r * (q + 1 - 2 * sq) ** s


def perret_upper(q: int, g: int, NX: int, NY: int) -> float:
    """(q + 1 + (N(Y) - N(X))/g)^g.

    Equal to upper_M(q, g, NY - NX) inside the Weil window; evaluated as a
    plain formula (no window check) so inconsistent inputs still get a value.
    """
    if g < 1:
        raise ValueError("g must be at least 1")
    return (q + 1 + (NY - NX) / g) ** g


def perret_delta(q: int, g: int, tau) -> int:
    """0 when tau/(2 sqrt(q)) + g is an even integer, else 1."""
    if _is_int(tau):
        t = int(tau)
        if t == 0:
            return 0 if g % 2 == 0 else 1
        if not is_square(q):
            return 1
        two_s = 2 * isqrt(q)
        if t % two_s:
            return 1
        return 0 if (t // two_s + g) % 2 == 0 else 1
    x = float(tau) / (2 * math.sqrt(q)) + g
    k = round(x)
    return 0 if abs(x - k) <= 1e-12 and k % 2 == 0 else 1


def perret_lower(q: int, g: int, tau) -> float:
    """((sqrt(q)+1)/(sqrt(q)-1))^(tau/(2 sqrt(q)) - 2 delta) (q-1)^g."""
    _check_window(q, g, tau)
    sq = math.sqrt(q)
    expo = float(tau) / (2 * sq) - 2 * perret_delta(q, g, tau)
    return ((sq + 1) / (sq - 1)) ** expo * (q - 1) ** g


# -- windows for tau(P) -------------------------------------------------------


@dataclass(frozen=True)
class TraceWindow:
    lo: float
    hi: float
    provenance: tuple[str, str]

    def contains(self, tau: float, tol: float = TOL) -> bool:
        return self.lo - tol <= tau <= self.hi + tol


def weil_window(q: int, g: int) -> TraceWindow:
    w = 2 * g * math.sqrt(q)
    return TraceWindow(-w, w, ("weil", "weil"))


def trace_window_nx(NX: int, q: int | None = None, g: int | None = None) -> TraceWindow:
    """|tau(P)| <= N(X), intersected with the Weil window when q, g are given."""
    if NX < 0:
        raise ValueError("N(X) must be nonnegative")
    if q is None or g is None:
        return TraceWindow(-float(NX), float(NX), ("trace-nx", "trace-nx"))
    w = 2 * g * math.sqrt(q)
    if NX <= w:
        return TraceWindow(-float(NX), float(NX), ("trace-nx", "trace-nx"))
    return TraceWindow(-w, w, ("weil", "weil"))


def phi_radicand(q: int, g: int, NX: int) -> Fraction:
    t = NX - q - 1
    return Fraction(g * (q * q - 1)) - Fraction(g * t * t, g + 1) - 2 * g * t + 4 * g * g * q


def phi(q: int, g: int, NX: int) -> float | None:
    """Square root of the second trace bound's radicand; None when it is negative."""
    rad = phi_radicand(q, g, NX)
    if rad < 0:
        return None
    return math.sqrt(rad)


@dataclass(frozen=True)
class PsiWindow:
    bound: float
    sharper_than_weil: bool
    note: str


def psi(q: int, g: int) -> float:
    """g/(2g+1) (q - g + sqrt((q-g)^2 + (2g+1)(4gq + q^2 + 6q + 1)))."""
    return g / (2 * g + 1) * (q - g + math.sqrt((q - g) ** 2 + (2 * g + 1) * (4 * g * q + q * q + 6 * q + 1)))


def psi_sharper(q: int, g: int) -> bool:
    """g >= (q sqrt(q) + 3q - sqrt(q) + 1)/(4 sqrt(q)), i.e. sqrt(q)(4g - q + 1) >= 3q + 1."""
    return le_sqrt(3 * q + 1, 4 * g - q + 1, q)


def psi_window(q: int, g: int) -> PsiWindow:
    return PsiWindow(
        psi(q, g),
        psi_sharper(q, g),
        f"constrains |tau(P)| when |tau(P)| >= q - g = {q - g}",
    )


def psi_interval(q: int, g: int) -> tuple[float, float] | None:
    """(m(-psi), M(psi)) when g >= q, else None."""
    if g < q:
        return None
    p = psi(q, g)
    lo, hi = lower_m(q, g, -p), upper_M(q, g, p)
    wlo, whi = weil_interval(q, g)
    assert wlo * (1 - TOL) - TOL <= lo <= hi <= whi * (1 + TOL) + TOL
    return lo, hi


def ihara_bound(q: int, genus_total: int) -> float:
    """Ihara's bound for a curve of genus G = genus_total, written with g = G - 1."""
    if genus_total < 1:
        raise ValueError("genus must be at least 1")
    G = genus_total
    return 0.5 * (2 * q - (G - 1) + 1 + math.sqrt((8 * q + 1) * G * G + (4 * q * q - 4 * q) * G))


def nx_intervals(q: int, g: int, NX: int):
    """Intervals for #P from |tau| <= N(X) and from |tau| <= phi(N(X)).

    Both windows are clamped to the Weil window before applying m and M;
    the second entry is None when phi's radicand is negative.
    """
    if NX < 0:
        raise ValueError("N(X) must be nonnegative")
    w = 2 * g * math.sqrt(q)
    t1 = NX if NX * NX <= 4 * g * g * q else w
    first = (lower_m(q, g, -t1), upper_M(q, g, t1))
    f = phi(q, g, NX)
    second = None
    if f is not None:
        t2 = min(f, w)
        second = (lower_m(q, g, -t2), upper_M(q, g, t2))
    return first, second


# -- report -------------------------------------------------------------------


@dataclass
class BoundEntry:
    name: str
    kind: str
    value: float | None
    applicable: bool
    inputs: dict = field(default_factory=dict)


@dataclass
class BoundReport:
    q: int
    g: int
    tau: int | None
    entries: list[BoundEntry] = field(default_factory=list)

    def add(self, name: str, kind: str, value, applicable: bool = True, **inputs) -> None:
        v = None if value is None else float(value)
        self.entries.append(BoundEntry(name, kind, v, applicable and v is not None, inputs))

    def get(self, name: str, kind: str | None = None) -> BoundEntry:
        for e in self.entries:
            if e.name == name and (kind is None or e.kind == kind):
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"q": self.q, "g": self.g, "tau": self.tau, "entries": [asdict(e) for e in self.entries]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        return cls(d["q"], d["g"], d["tau"], [BoundEntry(**e) for e in d["entries"]])


def bound_report(q: int, g: int, tau: int | None = None, NX: int | None = None) -> BoundReport:
    """Every bound that applies to (q, g) and the optional tau and N(X).

    Window violations make the affected entries not applicable instead of
    raising.
    """
    rep = BoundReport(q, g, tau)
    lo, hi = weil_interval(q, g)
    rep.add("weil", "lower", lo)
    rep.add("weil", "upper", hi)
    if tau is not None:
        ok = in_window(q, g, tau)
        rep.add("M", "upper", upper_M(q, g, tau) if ok else None, ok, tau=tau)
        rep.add("m", "lower", lower_m(q, g, tau) if ok else None, ok, tau=tau)
        rep.add("perret-lower", "lower", perret_lower(q, g, tau) if ok else None, ok, tau=tau)
        if NX is not None:
            NY = NX + tau
            rep.add("perret-upper", "upper", perret_upper(q, g, NX, NY) if ok else None, ok, NX=NX, NY=NY)
    if NX is not None:
        win = trace_window_nx(NX, q, g)
        rep.add("trace-nx", "trace", win.hi, True, NX=NX)
        rep.add("trace-phi", "trace", phi(q, g, NX), True, NX=NX)
        first, second = nx_intervals(q, g, NX)
        rep.add("nx-interval", "lower", first[0], NX=NX, window="trace-nx")
        rep.add("nx-interval", "upper", first[1], NX=NX, window="trace-nx")
        rep.add("phi-interval", "lower", second[0] if second else None, NX=NX, window="trace-phi")
        rep.add("phi-interval", "upper", second[1] if second else None, NX=NX, window="trace-phi")
    pw = psi_window(q, g)
    rep.add("trace-psi", "trace", pw.bound, True, sharper_than_weil=pw.sharper_than_weil, region=f"|tau|>={q - g}")
    piv = psi_interval(q, g)
    rep.add("psi-interval", "lower", piv[0] if piv else None, piv is not None)
    rep.add("psi-interval", "upper", piv[1] if piv else None, piv is not None)
    rep.add("ihara", "points", ihara_bound(q, g + 1), True, genus=g + 1)
    return rep
