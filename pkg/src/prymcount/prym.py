"""Double covers Y -> X of hyperelliptic curves built from a split branch locus.

Given squarefree f1, f2 over F_q with disjoint branch divisors, X is
y^2 = f1 f2, X_i is y^2 = f_i, and Y is the normalization of the fibre
product of X and X_1 over the line.  Y -> X is an unramified double cover
whose Prym variety is isomorphic to J(X_1) x J(X_2).

Y is never written down: its point counts come from the character-product
formula, which serves as an oracle independent of any Weil polynomial.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import poly
from .curve import (
    CurveError,
    HyperellipticModel,
    branch_divisor_disjoint,
    count_points,
    genus,
    leading_character,
)
from .ff import PrimePower, field_for
from .poly import Poly
from .zeta import WeilPolynomial, from_counts, num_points, tau_k, trivial


class CoveringError(ValueError):
    pass


def _as_base(q) -> PrimePower:
    return q if isinstance(q, PrimePower) else PrimePower.from_q(int(q))


@dataclass(frozen=True)
class LegendreCovering:
    base: PrimePower
    f1: Poly
    f2: Poly

    def __post_init__(self) -> None:
        f1, f2 = poly.trim(self.f1), poly.trim(self.f2)
        object.__setattr__(self, "f1", f1)
        object.__setattr__(self, "f2", f2)
        if len(f1) < 2 or len(f2) < 2:
            raise CoveringError("both branch divisors must be nonempty (degree >= 1)")
        try:
            X1, X2 = HyperellipticModel(self.base, f1), HyperellipticModel(self.base, f2)
        except CurveError as exc:
            raise CoveringError(str(exc)) from exc
        if not branch_divisor_disjoint(X1, X2):
            raise CoveringError(f"branch divisors of {f1} and {f2} meet")
        assert X1.branch_degree % 2 == 0 and X2.branch_degree % 2 == 0

    @property
    def X1(self) -> HyperellipticModel:
        return HyperellipticModel(self.base, self.f1)

    @property
    def X2(self) -> HyperellipticModel:
        return HyperellipticModel(self.base, self.f2)

    @property
    def X(self) -> HyperellipticModel:
        F = field_for(self.base)
        return HyperellipticModel(self.base, poly.mul(F, self.f1, self.f2))

    @property
    def h(self) -> int:
        return genus(self.X1)

    @property
    def kk(self) -> int:
        return genus(self.X2)

    @property
    def g_X(self) -> int:
        return self.h + self.kk + 1

    @property
    def genus_Y(self) -> int:
        return 2 * self.g_X - 1

    @property
    def prym_dim(self) -> int:
        return self.h + self.kk

    @property
    def key(self) -> tuple:
        """Deterministic ordering used for witness tie-breaks."""
        return (len(self.f1), self.f1, len(self.f2), self.f2)

    def serialize(self) -> str:
        return f"{self.base.q};{poly.to_str(self.f1)};{poly.to_str(self.f2)}"

    @classmethod
    def parse(cls, text: str) -> "LegendreCovering":
        q, f1, f2 = text.split(";")
        return cls(PrimePower.from_q(int(q)), poly.from_str(f1), poly.from_str(f2))


def build_covering(q, f1, f2) -> LegendreCovering:
    """Validate (f1, f2) and return the covering; genus(Y) = 2 g_X - 1 is checked."""
    cov = LegendreCovering(_as_base(q), tuple(f1), tuple(f2))
    assert genus(cov.X) == cov.g_X, "branch points of X must be the union of both divisors"
    return cov


def curve_weil(C: HyperellipticModel, ceiling: int | None = None) -> WeilPolynomial:
    g = genus(C)
    if g == 0:
        return trivial(C.base.q)
    return from_counts(C.base.q, g, [count_points(C, k, ceiling).n for k in range(1, g + 1)])


def prym_weil(cov: LegendreCovering, ceiling: int | None = None) -> WeilPolynomial:
    """Weil polynomial of J(X_1) x J(X_2)."""
    return curve_weil(cov.X1, ceiling) * curve_weil(cov.X2, ceiling)


def _infinity_Y(cov: LegendreCovering, k: int) -> int:
    out = 1
    for f in (cov.f1, cov.f2):
        eps = 0 if (len(f) - 1) % 2 else leading_character(cov.base, f[-1], k)
        out *= 1 + eps
    return out


def count_Y(cov: LegendreCovering, k: int = 1, ceiling: int | None = None) -> int:
    """N_k(Y) = sum over x of (1 + chi(f1(x)))(1 + chi(f2(x))) plus the points at infinity.

    Above infinity Y has (1 + e1)(1 + e2) points, where e_i is 0 when
    deg f_i is odd and chi(lc(f_i))^k otherwise.
    """
    if k < 1:
        raise CoveringError("k must be positive")
    F = field_for(cov.base, k, ceiling)
    xs = np.arange(F.order, dtype=np.int64)
    c1 = F.chi_table[poly.evaluate_embedded(F, cov.f1, xs)].astype(np.int64)
    c2 = F.chi_table[poly.evaluate_embedded(F, cov.f2, xs)].astype(np.int64)
    n = int(((1 + c1) * (1 + c2)).sum()) + _infinity_Y(cov, k)
    assert n % 2 == 0 and n >= 0
    return n


@dataclass
class FactorizationReport:
    ok: bool
    depth: int
    discrepancies: list = field(default_factory=list)
    parity_failures: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_factorization(cov: LegendreCovering, depth: int, ceiling: int | None = None) -> FactorizationReport:
    """Check N_k(Y) = q^k + 1 + tau_k(J_X) + tau_k(P) for k = 1..depth.

    N_k(Y) is counted directly; J_X and P come from Weil polynomials fitted
    to the first few point counts of X, X_1, X_2.  Also checks that
    tau_k(P) and tau_k(J_X) have the same parity.
    """
    q = cov.base.q
    WX = curve_weil(cov.X, ceiling)
    WP = prym_weil(cov, ceiling)
    rep = FactorizationReport(True, depth)
    for k in range(1, depth + 1):
        tx = tau_k(WX, k)
        tp = tau_k(WP, k)
        ny = count_Y(cov, k, ceiling)
        expected = q**k + 1 + tx + tp
        if ny != expected:
            rep.discrepancies.append((k, ny, expected))
        if (tp - tx) % 2:
            rep.parity_failures.append((k, tp, tx))
    rep.ok = not rep.discrepancies and not rep.parity_failures
    return rep


@dataclass(frozen=True)
class PrymDatum:
    covering: LegendreCovering
    fP: WeilPolynomial
    counts_X: tuple[int, ...]
    counts_Y: tuple[int, ...]

    @property
    def num_points(self) -> int:
        return num_points(self.fP)


def prym_datum(cov: LegendreCovering, depth: int = 1, ceiling: int | None = None) -> PrymDatum:
    cx = tuple(count_points(cov.X, k, ceiling).n for k in range(1, depth + 1))
    cy = tuple(count_Y(cov, k, ceiling) for k in range(1, depth + 1))
    fP = prym_weil(cov, ceiling)
    for k in range(1, depth + 1):
        assert tau_k(fP, k) == cy[k - 1] - cx[k - 1]
    return PrymDatum(cov, fP, cx, cy)


# -- targeted search ----------------------------------------------------------


def _genus_candidates(base: PrimePower, gen: int, target: WeilPolynomial | None, trace: int | None):
    """Squarefree f with genus(y^2 = f) = gen matching the target, in search order.

    Order: degree 2gen+1 before 2gen+2, leading coefficient 1 before the
    least non-square, then monic code.
    """
    from . import universe as U

    lcs = U.canonical_lcs(base)
    F = field_for(base)
    q = base.q
    for d in (2 * gen + 1, 2 * gen + 2):
        sf = U.squarefree_mask(base, d)
        codes = np.flatnonzero(sf)
        co = U.monic_coeffs(base, d)[codes]
        sums = [U.character_sums(base, k, co) for k in range(1, max(gen, 1) + 1)]
        for pos, lc in enumerate(lcs):
            chi = int(F.chi_table[lc])
            counts = []
            for k in range(1, max(gen, 1) + 1):
                inf = 1 if d % 2 else 1 + chi**k
                counts.append(q**k + chi**k * sums[k - 1] + inf)
            mask = np.ones(codes.size, dtype=bool)
            if trace is not None:
                mask &= counts[0] == q + 1 - trace
            if target is not None and gen > 0:
                expect = [q**k + 1 + tau_k(target, k) for k in range(1, gen + 1)]
                for k in range(gen):
                    mask &= counts[k] == expect[k]
            for code in codes[mask]:
                yield U.decode(base, d, lcs, pos * q**d + int(code))


def find_covering(
    q, target1: WeilPolynomial | None, target2: WeilPolynomial | None, genus1: int, genus2: int,
    trace1: int | None = None, trace2: int | None = None,
) -> LegendreCovering | None:
    """First covering (in search order) whose factors X_1, X_2 match the targets."""
    base = _as_base(q)
    F = field_for(base)
    seconds = list(_genus_candidates(base, genus2, target2, trace2))
    for f1 in _genus_candidates(base, genus1, target1, trace1):
        odd1 = (len(f1) - 1) % 2 == 1
        for f2 in seconds:
            if odd1 and (len(f2) - 1) % 2 == 1:
                continue
            if len(poly.gcd(F, f1, f2)) == 1:
                return LegendreCovering(base, f1, f2)
    return None


def find_disjoint_pair(q, t1: int, t2: int, genus1: int, genus2: int) -> LegendreCovering | None:
    """A covering whose X_1, X_2 have Frobenius traces t1, t2 (N(X_i) = q + 1 - t_i).

    Genera are 0, 1 or 2.  Returns None when the search space is exhausted.
    """
    base = _as_base(q)
    qq = base.q
    for t, gen in ((t1, genus1), (t2, genus2)):
        if gen not in (0, 1, 2):
            raise ValueError(f"genus must be 0, 1 or 2, got {gen}")
        if gen == 0 and t != 0:
            raise ValueError("a genus-0 factor has trace 0")
        if t * t > 4 * max(gen, 1) ** 2 * qq:
            raise ValueError(f"|t| = {abs(t)} exceeds 2g sqrt(q) for q = {qq}")
    return find_covering(base, None, None, genus1, genus2, trace1=t1, trace2=t2)


# -- witness files ------------------------------------------------------------

WITNESS_FIELDS = ["q", "f1", "f2", "fP", "N1X", "N1Y"]


def _coeffs(a) -> str:
    return " ".join(str(int(c)) for c in a)


def witness_row(cov: LegendreCovering, fP: WeilPolynomial | None = None) -> dict:
    fP = fP if fP is not None else prym_weil(cov)
    return {
        "q": cov.base.q,
        "f1": _coeffs(cov.f1),
        "f2": _coeffs(cov.f2),
        "fP": _coeffs(fP.a),
        "N1X": count_points(cov.X, 1).n,
        "N1Y": count_Y(cov, 1),
    }


def witnesses_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=WITNESS_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def write_witnesses(path: str | Path, rows: list[dict]) -> None:
    Path(path).write_text(witnesses_csv(rows))


def read_witnesses(path: str | Path) -> list[LegendreCovering]:
    out = []
    with open(path, newline="") as fh:
        for r in csv.DictReader(fh):
            base = PrimePower.from_q(int(r["q"]))
            f1 = tuple(int(c) for c in r["f1"].split())
            f2 = tuple(int(c) for c in r["f2"].split())
            out.append(LegendreCovering(base, f1, f2))
    return out
