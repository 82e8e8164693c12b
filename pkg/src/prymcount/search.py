"""Exhaustive and targeted searches over Legendre coverings.

A covering is a pair (f1, f2) whose branch degrees form a *shape*
(b1, b2) with b1 <= b2; f1 ranges over the smaller slot (the partner) and
f2 over the larger one (the anchor).  With canonicalization on, anchors
run over orbit representatives under x -> s x + t and square rescaling,
and partners are reduced modulo the anchor's stabilizer; equal slots are
additionally reduced modulo swapping.  Each removed pair is isomorphic to
a kept one, so every point-count statistic is preserved.

Work is split into chunks (shape, anchor degree, anchor leading class,
block).  Each chunk computes character sums for all its pairs at once,
derives every count and Weil polynomial, checks every bound, and folds
the results into a JSON-serializable record that can be checkpointed.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from . import bounds as B
from . import exact as E
from . import universe as U
from .ff import CeilingError, PrimePower, enumeration_ceiling, field_for
from .prym import (
    LegendreCovering,
    find_covering,
    find_disjoint_pair,
    prym_weil,
    witness_row,
)
from .zeta import (
    WeilPolynomial,
    from_counts_array,
    num_points_array,
    product_array,
    ruck_admissible,
    tau_array,
    trivial,
)

MAX_PAIRS = 1 << 21
MAX_VIOLATIONS = 50


def shapes_for(dim: int) -> tuple[tuple[int, int], ...]:
    """Branch-degree splits (b1 <= b2) of 2(dim + 2) into two even parts >= 2."""
    total = 2 * (dim + 2)
    return tuple((b, total - b) for b in range(2, total // 2 + 1, 2))


def _as_base(q) -> PrimePower:
    return q if isinstance(q, PrimePower) else PrimePower.from_q(int(q))


@dataclass(frozen=True)
class EnumerationSpec:
    q: PrimePower
    prym_dim: int
    shapes: tuple | None = None
    canonicalize: bool = True
    ceiling: int | None = None
    depth: int = 2

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", _as_base(self.q))
        if self.prym_dim < 0:
            raise ValueError("prym_dim must be nonnegative")
        shapes = shapes_for(self.prym_dim) if self.shapes is None else self.shapes
        norm = []
        for b1, b2 in shapes:
            b1, b2 = sorted((int(b1), int(b2)))
            if b1 < 2 or b1 % 2 or b2 % 2:
                raise ValueError(f"branch degrees must be even and >= 2, got {(b1, b2)}")
            if b1 + b2 != 2 * (self.prym_dim + 2):
                raise ValueError(f"shape {(b1, b2)} does not give Prym dimension {self.prym_dim}")
            if (b1, b2) not in norm:
                norm.append((b1, b2))
        object.__setattr__(self, "shapes", tuple(norm))
        if self.depth < 1:
            raise ValueError("depth must be positive")

    @property
    def g_X(self) -> int:
        return self.prym_dim + 1

    @property
    def lcs(self) -> tuple[int, ...]:
        return U.canonical_lcs(self.q) if self.canonicalize else U.all_lcs(self.q)

    def fingerprint(self) -> str:
        return json.dumps(
            [self.q.q, self.prym_dim, list(map(list, self.shapes)), self.canonicalize, self.depth],
            separators=(",", ":"),
        )

    def check_ceiling(self) -> None:
        ceiling = self.ceiling if self.ceiling is not None else enumeration_ceiling()
        q = self.q.q
        need = [q**self.depth]
        for b1, b2 in self.shapes:
            need.append(q ** min(b1, b2))  # common-root test
            need.append(q**b2)  # family size
        if max(need) > ceiling:
            raise CeilingError(f"enumeration needs sizes up to {max(need)} > ceiling {ceiling}")


# -- families ------------------------------------------------------------------


@dataclass(frozen=True)
class Chunk:
    shape: tuple[int, int]
    degree: int
    lc_pos: int
    block: int

    @property
    def id(self) -> str:
        return f"{self.shape[0]}-{self.shape[1]}:{self.degree}:{self.lc_pos}:{self.block}"


def _members(spec: EnumerationSpec, d: int) -> np.ndarray:
    """Global indices of all squarefree members of degree d."""
    q = spec.q.q
    codes = np.flatnonzero(U.squarefree_mask(spec.q, d)).astype(np.int64)
    return np.concatenate([pos * q**d + codes for pos in range(len(spec.lcs))])


def _anchors(spec: EnumerationSpec, d: int) -> np.ndarray:
    if spec.canonicalize:
        return U.orbits(spec.q, d).representatives
    return _members(spec, d)


def _block_size(spec: EnumerationSpec, shape: tuple[int, int]) -> int:
    b1 = shape[0]
    partners = sum(_members(spec, d).size for d in (b1 - 1, b1))
    return max(1, MAX_PAIRS // max(partners, 1))


def chunks(spec: EnumerationSpec) -> list[Chunk]:
    out = []
    q = spec.q.q
    for shape in spec.shapes:
        bs = _block_size(spec, shape)
        for d in (shape[1] - 1, shape[1]):
            anc = _anchors(spec, d)
            for pos in range(len(spec.lcs)):
                n = int(np.count_nonzero(anc // q**d == pos))
                for blk in range((n + bs - 1) // bs):
                    out.append(Chunk(shape, d, pos, blk))
    return out


def _chunk_anchors(spec: EnumerationSpec, chunk: Chunk) -> np.ndarray:
    q = spec.q.q
    anc = _anchors(spec, chunk.degree)
    anc = anc[anc // q**chunk.degree == chunk.lc_pos]
    bs = _block_size(spec, chunk.shape)
    return anc[chunk.block * bs : (chunk.block + 1) * bs]


# -- pair batches -------------------------------------------------------------


@dataclass
class PairBatch:
    """All valid pairs between a block of anchors (f2) and partners (f1) of one degree each."""

    spec: EnumerationSpec
    shape: tuple[int, int]
    da: int
    db: int
    anchor: np.ndarray  # global index of f2, per pair
    partner: np.ndarray  # global index of f1, per pair
    NX1: np.ndarray  # (n, depth)
    NX2: np.ndarray
    NX: np.ndarray
    NY: np.ndarray

    @property
    def size(self) -> int:
        return int(self.anchor.size)

    def coverings(self) -> Iterator[LegendreCovering]:
        base, lcs = self.spec.q, self.spec.lcs
        for a, b in zip(self.anchor.tolist(), self.partner.tolist()):
            f1 = U.decode(base, self.db, lcs, b)
            f2 = U.decode(base, self.da, lcs, a)
            yield LegendreCovering(base, f1, f2)

    def coefficient_keys(self) -> np.ndarray:
        """Columns (f1 coefficients, f2 coefficients) for lexicographic ordering."""
        base, q, lcs = self.spec.q, self.spec.q.q, self.spec.lcs
        F = field_for(base)
        cols = []
        for idx, d in ((self.partner, self.db), (self.anchor, self.da)):
            pos, code = np.divmod(idx, q**d)
            lc = np.asarray(lcs, dtype=np.int64)[pos]
            for i in range(d):
                cols.append(F.mul(lc, (code // q**i) % q))
            cols.append(lc)
        return np.stack(cols, axis=1)


def _stabilizer_mask(spec: EnumerationSpec, A: np.ndarray, da: int, P: np.ndarray, db: int) -> np.ndarray:
    """valid[i, j]: partner j is least in its orbit under the stabilizer of anchor i."""
    q = spec.q.q
    act_a = U.AffineAction(spec.q, da)
    act_b = U.AffineAction(spec.q, db)
    valid = np.ones((A.size, P.size), dtype=bool)
    pos_a, code_a = np.divmod(A, q**da)
    dig_a = act_a.digits_of(code_a)
    pos_b, code_b = np.divmod(P, q**db)
    dig_b = act_b.digits_of(code_b)
    for g in U.affine_group(spec.q)[1:]:
        img_a = np.empty_like(A)
        for pos in np.unique(pos_a):
            sel = pos_a == pos
            img_a[sel] = act_a.image_from_digits(int(pos), dig_a[sel], *g)
        fixed = np.flatnonzero(img_a == A)
        if fixed.size == 0:
            continue
        img_b = np.empty_like(P)
        for pos in np.unique(pos_b):
            sel = pos_b == pos
            img_b[sel] = act_b.image_from_digits(int(pos), dig_b[sel], *g)
        valid[fixed] &= (P <= img_b)[None, :]
    return valid


def _swap_mask(spec: EnumerationSpec, A: np.ndarray, da: int, P: np.ndarray, db: int, valid: np.ndarray) -> np.ndarray:
    """Keep one ordering of each unordered pair when both factors share a slot."""
    if not spec.canonicalize:
        if db != da:
            return valid & (db > da)
        return valid & (P[None, :] > A[:, None])
    if db != da:
        return valid & (db > da)
    orep = U.orbits(spec.q, db).least[P]
    keep = valid & (orep[None, :] > A[:, None])
    tie = valid & (orep[None, :] == A[:, None])
    ti, tj = np.nonzero(tie)
    if ti.size:
        q = spec.q.q
        act = U.AffineAction(spec.q, da)
        a, b = A[ti], P[tj]
        cand = np.full(a.size, np.iinfo(np.int64).max, dtype=np.int64)
        pa, ca = np.divmod(a, q**da)
        pb, cb = np.divmod(b, q**da)
        da_dig, db_dig = act.digits_of(ca), act.digits_of(cb)
        for g in U.affine_group(spec.q):
            img_a = np.empty_like(a)
            img_b = np.empty_like(b)
            for pos in (0, 1):
                sa, sb = pa == pos, pb == pos
                if sa.any():
                    img_a[sa] = act.image_from_digits(pos, da_dig[sa], *g)
                if sb.any():
                    img_b[sb] = act.image_from_digits(pos, db_dig[sb], *g)
            # g maps b onto a, so the swapped pair (b, a) becomes (a, g a)
            hit = img_b == a
            cand[hit] = np.minimum(cand[hit], img_a[hit])
        keep[ti, tj] = b <= cand
    return keep


def pair_batches(spec: EnumerationSpec, chunk: Chunk) -> Iterator[PairBatch]:
    base, q, D = spec.q, spec.q.q, spec.depth
    A = _chunk_anchors(spec, chunk)
    if A.size == 0:
        return
    da = chunk.degree
    b1 = chunk.shape[0]
    lc_chi = U.lc_character(base, spec.lcs)
    for db in (b1 - 1, b1):
        if da % 2 and db % 2:
            continue
        P = _members(spec, db)
        ua, ia = np.unique(A % q**da, return_inverse=True)
        up, ip = np.unique(P % q**db, return_inverse=True)
        MA = U.monic_coeffs(base, da)[ua]
        MP = U.monic_coeffs(base, db)[up]
        valid = ~U.common_root_matrix(base, MA, MP)[ia][:, ip]
        if spec.canonicalize:
            valid &= _stabilizer_mask(spec, A, da, P, db)
        if chunk.shape[0] == chunk.shape[1]:
            valid = _swap_mask(spec, A, da, P, db, valid)
        ii, jj = np.nonzero(valid)
        if ii.size == 0:
            continue
        e2 = lc_chi[A // q**da][ii]
        e1 = lc_chi[P // q**db][jj]
        n = ii.size
        NX1 = np.empty((n, D), dtype=np.int64)
        NX2 = np.empty((n, D), dtype=np.int64)
        NX = np.empty((n, D), dtype=np.int64)
        NY = np.empty((n, D), dtype=np.int64)
        for k in range(1, D + 1):
            SA, SP, SAP = U.cross_sums(base, k, MA, MP)
            s2 = e2**k * SA[ia[ii]]
            s1 = e1**k * SP[ip[jj]]
            s12 = (e1 * e2) ** k * SAP[ia[ii], ip[jj]]
            odd1, odd2 = db % 2 == 1, da % 2 == 1
            inf1 = 1 if odd1 else 1 + e1**k
            inf2 = 1 if odd2 else 1 + e2**k
            infX = 1 if (da + db) % 2 else 1 + (e1 * e2) ** k
            infY = (1 + (0 if odd1 else e1**k)) * (1 + (0 if odd2 else e2**k))
            qk = q**k
            NX1[:, k - 1] = qk + s1 + inf1
            NX2[:, k - 1] = qk + s2 + inf2
            NX[:, k - 1] = qk + s12 + infX
            NY[:, k - 1] = qk + s1 + s2 + s12 + infY
        yield PairBatch(spec, chunk.shape, da, db, A[ii], P[jj], NX1, NX2, NX, NY)


def enumerate_coverings(spec: EnumerationSpec) -> Iterator[LegendreCovering]:
    """Every valid (f1, f2) up to the chosen reduction, in chunk order."""
    spec.check_ceiling()
    for ch in chunks(spec):
        for batch in pair_batches(spec, ch):
            yield from batch.coverings()


# -- per-batch derived data and checks ----------------------------------------


@dataclass
class Derived:
    aX1: np.ndarray
    aX2: np.ndarray
    aP: np.ndarray
    tauP: np.ndarray
    nP: np.ndarray


def derive(batch: PairBatch) -> Derived:
    q = batch.spec.q.q
    D = batch.NX.shape[1]
    h = batch.shape[0] // 2 - 1
    kk = batch.shape[1] // 2 - 1
    if max(h, kk) > D:
        raise ValueError(f"depth {D} too small for genus {max(h, kk)} factors")
    aX1 = from_counts_array(q, h, batch.NX1[:, :h])
    aX2 = from_counts_array(q, kk, batch.NX2[:, :kk])
    tauP = tau_array(q, aX1, D) + tau_array(q, aX2, D)
    nP = num_points_array(q, aX1) * num_points_array(q, aX2)
    aP = product_array(q, aX1, aX2)
    return Derived(aX1, aX2, aP, tauP, nP)


def check_covering(q: int, g: int, tau: int, NX: int, NY: int, N2Y: int | None, nP: int) -> list[str]:
    """Names of the bounds violated by one covering's data (expected: none)."""
    tol = B.TOL
    bad = []
    lo, hi = B.weil_interval(q, g)
    if not lo - tol <= nP <= hi + tol:
        bad.append("weil")
    if not B.in_window(q, g, tau):
        bad.append("weil-window")
    else:
        if not B.lower_m(q, g, tau) - tol <= nP <= B.upper_M(q, g, tau) + tol:
            bad.append("trace-interval")
        if nP < B.perret_lower(q, g, tau) - tol:
            bad.append("perret-lower")
        if nP > B.perret_upper(q, g, NX, NY) + tol:
            bad.append("perret-upper")
    if N2Y is not None and not 0 <= NY <= 2 * NX <= N2Y:
        bad.append("count-chain")
    if abs(tau) > NX:
        bad.append("trace-nx")
    # |tau| <= phi(NX), exact after clearing the denominator g + 1
    t = NX - q - 1
    rad = g * (g + 1) * (q * q - 1) - g * t * t - 2 * g * (g + 1) * t + 4 * g * g * (g + 1) * q
    if rad < 0 or (g + 1) * tau * tau > rad:
        bad.append("trace-phi")
    first, second = B.nx_intervals(q, g, NX)
    if not first[0] - tol <= nP <= first[1] + tol:
        bad.append("nx-interval")
    if second is None or not second[0] - tol <= nP <= second[1] + tol:
        bad.append("phi-interval")
    if abs(tau) >= q - g and abs(tau) > B.psi(q, g) + tol:
        bad.append("trace-psi")
    piv = B.psi_interval(q, g)
    if piv is not None and not piv[0] - tol <= nP <= piv[1] + tol:
        bad.append("psi-interval")
    if NX > B.ihara_bound(q, g + 1) + tol:
        bad.append("ihara")
    return bad


def _lexmin_rows(keys: np.ndarray, groups: np.ndarray) -> dict:
    """For each group id, the row with lexicographically least key."""
    order = np.lexsort(keys.T[::-1])
    g_sorted = groups[order]
    uniq, first = np.unique(g_sorted, return_index=True)
    return {int(u): int(order[f]) for u, f in zip(uniq, first)}


def _serialize_row(batch: PairBatch, row: int) -> tuple[tuple, str]:
    base, lcs = batch.spec.q, batch.spec.lcs
    f1 = U.decode(base, batch.db, lcs, int(batch.partner[row]))
    f2 = U.decode(base, batch.da, lcs, int(batch.anchor[row]))
    cov = LegendreCovering(base, f1, f2)
    return cov.key, cov.serialize()


def _key_json(key: tuple) -> list:
    return [key[0], list(key[1]), key[2], list(key[3])]


def fold_batch(batch: PairBatch, out: dict) -> None:
    """Accumulate one batch into a chunk record."""
    spec = batch.spec
    q, g, D = spec.q.q, spec.prym_dim, spec.depth
    dv = derive(batch)
    n = batch.size
    out["n"] += n
    keys = batch.coefficient_keys()

    # identities that hold pair by pair
    fails = np.zeros(n, dtype=bool)
    for k in range(D):
        fails |= batch.NY[:, k] != batch.NX[:, k] + dv.tauP[:, k]
        tau_jx = batch.NX[:, k] - q ** (k + 1) - 1
        fails |= (dv.tauP[:, k] - tau_jx) % 2 != 0
        fails |= batch.NY[:, k] % 2 != 0
    gx = spec.g_X
    if D >= gx:
        aX = from_counts_array(q, gx, batch.NX[:, :gx])
        tX = tau_array(q, aX, D)
        for k in range(D):
            qk = q ** (k + 1)
            fails |= batch.NX[:, k] != qk + 1 + tX[:, k]
            fails |= batch.NY[:, k] != qk + 1 + tX[:, k] + dv.tauP[:, k]
    if fails.any():
        out["factorization_failures"] += int(fails.sum())
        for row in np.flatnonzero(fails)[:MAX_VIOLATIONS]:
            _add_violation(out, "factorization", [], _serialize_row(batch, int(row))[1])

    # extremes
    for name, pick in (("max", np.max), ("min", np.min)):
        val = int(pick(dv.nP))
        rows = np.flatnonzero(dv.nP == val)
        best = _lexmin_rows(keys[rows], np.zeros(rows.size, dtype=np.int64))[0]
        key, ser = _serialize_row(batch, int(rows[best]))
        _update_extreme(out, name, val, key, ser)

    # isogeny-class census of P
    aP = dv.aP
    classes, inv = np.unique(aP, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    counts = np.bincount(inv, minlength=classes.shape[0])
    firsts = _lexmin_rows(keys, inv)
    for c in range(classes.shape[0]):
        label = ",".join(str(int(x)) for x in classes[c])
        key, ser = _serialize_row(batch, firsts[c])
        entry = out["census"].get(label)
        if entry is None:
            out["census"][label] = [int(counts[c]), _key_json(key), ser]
        else:
            entry[0] += int(counts[c])
            if _key_json(key) < entry[1]:
                entry[1], entry[2] = _key_json(key), ser

    # bounds, once per distinct data tuple
    N2Y = batch.NY[:, 1] if D >= 2 else np.full(n, -1)
    tup = np.stack([dv.tauP[:, 0], batch.NX[:, 0], batch.NY[:, 0], N2Y, dv.nP], axis=1)
    uniq, tinv = np.unique(tup, axis=0, return_inverse=True)
    tinv = tinv.reshape(-1)
    first_rows = None
    for u in range(uniq.shape[0]):
        tau, nx, ny, n2y, nP = (int(x) for x in uniq[u])
        bad = check_covering(q, g, tau, nx, ny, n2y if D >= 2 else None, nP)
        out["checked_tuples"] += 1
        if bad:
            if first_rows is None:
                first_rows = _lexmin_rows(keys, tinv)
            ser = _serialize_row(batch, first_rows[u])[1]
            for name in bad:
                _add_violation(out, name, [tau, nx, ny, n2y, nP], ser)


def _add_violation(out: dict, name: str, data: list, witness: str) -> None:
    out["violation_count"] += 1
    if len(out["violations"]) < MAX_VIOLATIONS:
        out["violations"].append({"check": name, "data": data, "witness": witness})


def _update_extreme(out: dict, name: str, val: int, key: tuple, ser: str) -> None:
    cur = out[name]
    better = cur is None or (val > cur[0] if name == "max" else val < cur[0])
    if better or (val == cur[0] and _key_json(key) < cur[1]):
        out[name] = [val, _key_json(key), ser]


def _empty_record() -> dict:
    return {
        "n": 0,
        "max": None,
        "min": None,
        "census": {},
        "violations": [],
        "violation_count": 0,
        "factorization_failures": 0,
        "checked_tuples": 0,
    }


def process_chunk(spec: EnumerationSpec, chunk: Chunk) -> dict:
    rec = _empty_record()
    for batch in pair_batches(spec, chunk):
        fold_batch(batch, rec)
    rec["chunk"] = chunk.id
    return rec


def merge_records(records: list[dict]) -> dict:
    """Associative, order-independent fold of chunk records."""
    out = _empty_record()
    for rec in records:
        out["n"] += rec["n"]
        out["violation_count"] += rec["violation_count"]
        out["factorization_failures"] += rec["factorization_failures"]
        out["checked_tuples"] += rec["checked_tuples"]
        for v in rec["violations"]:
            if len(out["violations"]) < MAX_VIOLATIONS:
                out["violations"].append(v)
        for name in ("max", "min"):
            if rec[name] is not None:
                val, key, ser = rec[name]
                _update_extreme(out, name, val, tuple(key), ser)
        for label, (cnt, key, ser) in rec["census"].items():
            entry = out["census"].get(label)
            if entry is None:
                out["census"][label] = [cnt, key, ser]
            else:
                entry[0] += cnt
                if key < entry[1]:
                    entry[1], entry[2] = key, ser
    out["violations"].sort(key=lambda v: (v["check"], v["witness"]))
    return out


# -- reports ------------------------------------------------------------------


@dataclass
class ExtremesReport:
    q: int
    dim: int
    attained_max: int | None
    attained_min: int | None
    witnesses: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    n_coverings: int = 0
    census: dict = field(default_factory=dict)
    factorization_failures: int = 0
    canonicalize: bool = True
    shapes: list = field(default_factory=list)

    def negative_virtual(self) -> list[str]:
        """Census classes with N_1(P) = q + 1 + a1 < 0."""
        return [lab for lab in self.census if self.q + 1 + int(lab.split(",")[0]) < 0] if self.dim else []

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)


def _run_chunk(args) -> dict:
    spec, chunk = args
    return process_chunk(spec, chunk)


def attained_extremes(
    spec: EnumerationSpec,
    jobs: int = 1,
    checkpoint: str | Path | None = None,
) -> ExtremesReport:
    """Fold #P over every covering of the spec, checking every bound on the way.

    With ``checkpoint`` set, each finished chunk is appended to that JSONL
    file and chunks already present (for the same spec) are skipped.
    """
    spec.check_ceiling()
    todo = chunks(spec)
    done: dict[str, dict] = {}
    fp = spec.fingerprint()
    if checkpoint is not None and Path(checkpoint).exists():
        for line in Path(checkpoint).read_text().splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if rec.get("spec") == fp:
                done[rec["result"]["chunk"]] = rec["result"]
    pending = [c for c in todo if c.id not in done]

    def _save(rec: dict) -> None:
        done[rec["chunk"]] = rec
        if checkpoint is not None:
            with open(checkpoint, "a") as fh:
                fh.write(json.dumps({"spec": fp, "result": rec}, sort_keys=True) + "\n")

    if jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rec in pool.map(_run_chunk, [(spec, c) for c in pending]):
                _save(rec)
    else:
        for c in pending:
            _save(process_chunk(spec, c))
    merged = merge_records([done[c.id] for c in todo])
    wit = {}
    for name in ("max", "min"):
        if merged[name] is not None:
            wit[name] = merged[name][2]
    rep = ExtremesReport(
        q=spec.q.q,
        dim=spec.prym_dim,
        attained_max=merged["max"][0] if merged["max"] else None,
        attained_min=merged["min"][0] if merged["min"] else None,
        witnesses=wit,
        violations=merged["violations"],
        n_coverings=merged["n"],
        census={k: merged["census"][k] for k in sorted(merged["census"])},
        factorization_failures=merged["factorization_failures"],
        canonicalize=spec.canonicalize,
        shapes=[list(s) for s in spec.shapes],
    )
    neg = rep.negative_virtual()
    if neg:
        rep.witnesses["negative_virtual"] = min((rep.census[k][1], rep.census[k][2]) for k in neg)[1]
    return rep


# -- elliptic curves ----------------------------------------------------------


@dataclass
class EllipticCensus:
    q: int
    counts: dict  # N -> number of models y^2 = f, deg f in {3, 4}

    @property
    def max(self) -> int:
        return max(self.counts)

    @property
    def min(self) -> int:
        return min(self.counts)

    def traces(self) -> set[int]:
        return {self.q + 1 - n for n in self.counts}


def elliptic_census(q, ceiling: int | None = None) -> EllipticCensus:
    """#E(F_q) over every squarefree f of degree 3 or 4 and every leading coefficient."""
    base = _as_base(q)
    qq = base.q
    ceiling = ceiling if ceiling is not None else enumeration_ceiling()
    if qq**4 > ceiling:
        raise CeilingError(f"q^4 = {qq**4} exceeds ceiling {ceiling}")
    F = field_for(base)
    lc_chis = F.chi_table[np.arange(1, qq)].astype(np.int64)
    counts: Counter = Counter()
    for d in (3, 4):
        codes = np.flatnonzero(U.squarefree_mask(base, d))
        S = U.character_sums(base, 1, U.monic_coeffs(base, d)[codes])
        for chi in (1, -1):
            mult = int(np.count_nonzero(lc_chis == chi))
            inf = 1 if d % 2 else 1 + chi
            vals, cnt = np.unique(qq + chi * S + inf, return_counts=True)
            for v, c in zip(vals.tolist(), cnt.tolist()):
                counts[int(v)] += c * mult
    return EllipticCensus(qq, dict(sorted(counts.items())))


# -- theorem verification -----------------------------------------------------

FULL_LIMIT = {1: 13, 2: 9}


@dataclass
class TheoremReport:
    q: int
    dim: int
    mode: str
    ok: bool
    predicted: dict
    attained: dict
    witnesses: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)


def _predicted(q: int, dim: int) -> dict:
    if dim == 1:
        hi, lo = E.elliptic_extremes(q)
    else:
        hi, lo = E.prym_max_2(q), E.prym_min_2(q)
    return {"max": hi.value, "min": lo.value, "max_case": hi.bullet, "min_case": lo.bullet}


def _surface_witness(q: int, row: E.TableRow) -> LegendreCovering | None:
    xs = E.integral_type(row, q)
    if xs is not None:
        x1, x2 = xs
        return find_disjoint_pair(q, -x1, -x2, 1, 1)
    target = WeilPolynomial(q, 2, (row.a1, row.a2))
    return find_covering(q, trivial(q), target, 0, 2)


def _walk_table(q: int, side: str, notes: list) -> tuple[int | None, LegendreCovering | None, list[E.TableRow]]:
    """First table row (from the top) that exists and has a covering witness."""
    rows = E.table_max(q) if side == "max" else E.table_min(q)
    skipped = []
    for row in rows:
        ex = E.row_exists(row, q)
        if ex == "no":
            skipped.append(row)
            continue
        if ex == "undetermined":
            notes.append(f"{side}: existence of {row.type_tag} undetermined; row skipped")
            skipped.append(row)
            continue
        cov = _surface_witness(q, row)
        if cov is None:
            notes.append(f"{side}: {row.type_tag} exists but no covering witness was found")
            skipped.append(row)
            continue
        return row.count_value, cov, skipped
    return None, None, skipped


def _no_better_surface(q: int, side: str, value: int, skipped: list[E.TableRow]) -> list[str]:
    """Every admissible (a1, a2) beyond ``value`` must be a skipped, non-existent table row."""
    m = math.isqrt(4 * q)
    bad = []
    allowed = {(r.a1, r.a2) for r in skipped if E.row_exists(r, q) == "no"}
    for a1 in range(-2 * m, 2 * m + 1):
        for a2 in range(-2 * q - 4 * m * m, a1 * a1 // 4 + 2 * q + 1):
            if not ruck_admissible(q, a1, a2):
                continue
            n = q * q + 1 + (q + 1) * a1 + a2
            beyond = n > value if side == "max" else n < value
            if beyond and (a1, a2) not in allowed:
                bad.append(f"{side}: admissible ({a1},{a2}) with {n} points is not excluded")
    return bad


def verify_theorem(
    q,
    dim: int,
    mode: str = "auto",
    jobs: int = 1,
    checkpoint: str | Path | None = None,
    witness_path: str | Path | None = None,
    ceiling: int | None = None,
) -> TheoremReport:
    """Compare the exact extremes with exhaustive search or with constructed witnesses.

    ``mode`` is "full", "attainment" or "auto" (full when q is small enough
    for exhaustive enumeration at this dimension).
    """
    base = _as_base(q)
    qq = base.q
    if dim not in (1, 2):
        raise ValueError("dim must be 1 or 2")
    if mode == "auto":
        mode = "full" if qq <= FULL_LIMIT[dim] else "attainment"
    if mode not in ("full", "attainment"):
        raise ValueError(f"unknown mode {mode!r}")
    pred = _predicted(qq, dim)
    notes: list[str] = []
    violations: list = []
    wit_covs: list[tuple[str, LegendreCovering]] = []
    attained: dict = {}
    if mode == "full":
        spec = EnumerationSpec(base, dim, ceiling=ceiling)
        rep = attained_extremes(spec, jobs=jobs, checkpoint=checkpoint)
        attained = {"max": rep.attained_max, "min": rep.attained_min, "coverings": rep.n_coverings}
        violations = list(rep.violations)
        if rep.factorization_failures:
            violations.append({"check": "factorization", "count": rep.factorization_failures})
        for name, ser in sorted(rep.witnesses.items()):
            wit_covs.append((name, LegendreCovering.parse(ser)))
        if dim == 1:
            cen = elliptic_census(base, ceiling)
            attained["elliptic_max"], attained["elliptic_min"] = cen.max, cen.min
            if (cen.max, cen.min) != (pred["max"], pred["min"]):
                violations.append({"check": "elliptic-census", "data": [cen.max, cen.min]})
        if dim == 2 and qq <= 9 and "negative_virtual" not in rep.witnesses:
            violations.append({"check": "negative-virtual", "data": []})
        ok = attained["max"] == pred["max"] and attained["min"] == pred["min"] and not violations
    else:
        ok = True
        if dim == 1:
            m = math.isqrt(4 * qq)
            for side, n in (("max", pred["max"]), ("min", pred["min"])):
                cov = find_disjoint_pair(base, 0, qq + 1 - n, 0, 1)
                if cov is None:
                    ok = False
                    notes.append(f"{side}: no covering with #P = {n}")
                    continue
                attained[side] = n
                wit_covs.append((side, cov))
            for t in range(-m, m + 1):
                n = qq + 1 - t
                if (n > pred["max"] or n < pred["min"]) and E.elliptic_trace_exists(base, t):
                    ok = False
                    violations.append({"check": "elliptic-existence", "data": [t]})
        else:
            if qq <= 5:
                raise ValueError("attainment mode for dimension 2 needs q > 5; use full mode")
            for side in ("max", "min"):
                val, cov, skipped = _walk_table(qq, side, notes)
                attained[side] = val
                if cov is not None:
                    wit_covs.append((side, cov))
                    nP = _num_points(cov)
                    if nP != val:
                        violations.append({"check": "witness-count", "data": [side, nP, val]})
                if val != pred[side]:
                    ok = False
                if val is not None:
                    extra = _no_better_surface(qq, side, val, skipped)
                    violations.extend({"check": "table-logic", "data": [s]} for s in extra)
            ok = ok and not violations
        notes.append("attainment mode: witnesses from targeted search plus the table case analysis")
    rows = [dict(witness_row(c), role=name) for name, c in wit_covs]
    if witness_path is not None:
        _write_role_witnesses(witness_path, rows)
    return TheoremReport(qq, dim, mode, bool(ok), pred, attained, rows, violations, notes)


def _num_points(cov: LegendreCovering) -> int:
    from .zeta import num_points

    return num_points(prym_weil(cov))


def _write_role_witnesses(path: str | Path, rows: list[dict]) -> None:
    import csv

    from .prym import WITNESS_FIELDS

    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=WITNESS_FIELDS + ["role"], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)


# -- batch factorization check ------------------------------------------------


@dataclass
class FactorizationSummary:
    q: int
    dim: int
    depth: int
    coverings: int
    failures: int
    violations: list


def verify_factorization_all(q, dim: int, depth: int | None = None, ceiling: int | None = None,
                             canonicalize: bool = True) -> FactorizationSummary:
    """Check N_k(Y) = q^k + 1 + tau_k(J_X) + tau_k(P) for k <= depth on every covering.

    Default depth is 2 genus(Y) = 2(2 g_X - 1).  All N_k are direct counts;
    J_X and P come from Weil polynomials fitted to the first counts.
    """
    base = _as_base(q)
    gx = dim + 1
    depth = depth if depth is not None else 2 * (2 * gx - 1)
    spec = EnumerationSpec(base, dim, canonicalize=canonicalize, ceiling=ceiling, depth=depth)
    spec.check_ceiling()
    merged = merge_records([process_chunk(spec, c) for c in chunks(spec)])
    return FactorizationSummary(base.q, dim, depth, merged["n"], merged["factorization_failures"],
                                [v for v in merged["violations"]])
