"""Command-line front end.

Exit codes: 0 success, 1 failed verification (or bound violations found
during enumeration), 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import exact as E
from .bounds import bound_report
from .ff import CeilingError, FieldError, PrimePower
from .prym import witness_row, witnesses_csv
from .search import EnumerationSpec, attained_extremes, verify_factorization_all, verify_theorem

FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class CommandConfig:
    command: str
    q: PrimePower
    fmt: str = "text"
    ceiling: int | None = None
    jobs: int = 1
    out: str | None = None


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _fmt_num(v) -> str:
    if v is None:
        return "n/a"
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def cmd_bounds(cfg: CommandConfig, args) -> int:
    rep = bound_report(cfg.q.q, args.g, args.tau, args.nx)
    if cfg.fmt == "json":
        _emit(_dumps(rep.to_dict()), cfg.out)
    elif cfg.fmt == "csv":
        lines = ["name,kind,value,applicable"]
        lines += [f"{e.name},{e.kind},{'' if e.value is None else repr(e.value)},{e.applicable}" for e in rep.entries]
        _emit("\n".join(lines), cfg.out)
    else:
        head = f"q={rep.q} g={rep.g}" + (f" tau={rep.tau}" if rep.tau is not None else "")
        lines = [head] + [
            f"{e.name:<13}{e.kind:<7}{_fmt_num(e.value)}" + ("" if e.applicable else "  (not applicable)")
            for e in rep.entries
        ]
        _emit("\n".join(lines), cfg.out)
    return 0


def _exact_values(q: PrimePower, dim: int) -> dict:
    if dim == 1:
        hi, lo = E.elliptic_extremes(q)
    else:
        hi, lo = E.prym_max_2(q), E.prym_min_2(q)
    sc = E.sqrt_class(q)
    return {
        "q": q.q,
        "dim": dim,
        "m": sc.m,
        "max": hi.value,
        "min": lo.value,
        "max_case": hi.bullet,
        "min_case": lo.bullet,
        "frac_flags": dict(sorted(sc.frac_flags.items())),
    }


def cmd_exact(cfg: CommandConfig, args) -> int:
    d = _exact_values(cfg.q, args.dim)
    if cfg.fmt == "json":
        _emit(_dumps(d), cfg.out)
    elif cfg.fmt == "csv":
        cols = ["q", "dim", "m", "max", "min", "max_case", "min_case"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerow([d[c] for c in cols])
        _emit(buf.getvalue().rstrip("\n"), cfg.out)
    else:
        _emit(
            f"q={d['q']} dim={d['dim']} m={d['m']}\n"
            f"max {d['max']}  [{d['max_case']}]\n"
            f"min {d['min']}  [{d['min_case']}]",
            cfg.out,
        )
    return 0


def cmd_tables(cfg: CommandConfig, args) -> int:
    sides = ("max", "min") if args.side == "both" else (args.side,)
    if cfg.fmt == "csv":
        _emit("".join(E.tables_csv(cfg.q, s) for s in sides).rstrip("\n"), cfg.out)
        return 0
    data = {}
    for s in sides:
        rows = E.table_max(cfg.q) if s == "max" else E.table_min(cfg.q)
        data[s] = [
            {
                "a1": r.a1,
                "a2": r.a2,
                "type": r.type_tag,
                "formula": r.count_formula,
                "count": r.count_value,
                "exists": E.row_exists(r, cfg.q),
            }
            for r in rows
        ]
        data[s + "_value"] = E.replay(cfg.q, s)[0]
    if cfg.fmt == "json":
        _emit(_dumps({"q": cfg.q.q, **data}), cfg.out)
    else:
        lines = []
        for s in sides:
            lines.append(f"{s} table, q={cfg.q.q} (value {data[s + '_value']})")
            for r in data[s]:
                lines.append(f"  ({r['a1']:>4},{r['a2']:>6})  {r['type']:<26}{r['formula']:<12}{r['count']:>10}  {r['exists']}")
        _emit("\n".join(lines), cfg.out)
    return 0


def cmd_enumerate(cfg: CommandConfig, args) -> int:
    spec = EnumerationSpec(cfg.q, args.dim, canonicalize=not args.no_canonical, ceiling=cfg.ceiling)
    rep = attained_extremes(spec, jobs=cfg.jobs, checkpoint=args.checkpoint)
    if cfg.fmt == "json":
        _emit(rep.to_json(), cfg.out)
    elif cfg.fmt == "csv":
        from .prym import LegendreCovering

        rows = [witness_row(LegendreCovering.parse(s)) for _, s in sorted(rep.witnesses.items())]
        _emit(witnesses_csv(rows).rstrip("\n"), cfg.out)
    else:
        lines = [
            f"q={rep.q} dim={rep.dim} coverings={rep.n_coverings} isogeny types={len(rep.census)}",
            f"attained max {rep.attained_max}",
            f"attained min {rep.attained_min}",
        ]
        lines += [f"witness {k}: {v}" for k, v in sorted(rep.witnesses.items())]
        lines.append(f"violations {len(rep.violations)}")
        _emit("\n".join(lines), cfg.out)
    return 1 if rep.violations or rep.factorization_failures else 0


def cmd_verify(cfg: CommandConfig, args) -> int:
    rep = verify_theorem(cfg.q, args.dim, mode=args.mode, jobs=cfg.jobs, witness_path=args.witnesses,
                         ceiling=cfg.ceiling)
    ok = rep.ok
    fact = None
    if args.factorization:
        fact = verify_factorization_all(cfg.q, args.dim, ceiling=cfg.ceiling)
        ok = ok and fact.failures == 0
    if cfg.fmt == "json":
        d = json.loads(rep.to_json())
        if fact is not None:
            d["factorization"] = {"depth": fact.depth, "coverings": fact.coverings, "failures": fact.failures}
        d["ok"] = bool(ok)
        _emit(_dumps(d), cfg.out)
    else:
        lines = [
            f"q={rep.q} dim={rep.dim} mode={rep.mode} {'PASS' if ok else 'FAIL'}",
            f"predicted max {rep.predicted['max']} min {rep.predicted['min']}",
            f"attained  max {rep.attained.get('max')} min {rep.attained.get('min')}",
        ]
        if fact is not None:
            lines.append(f"factorization depth {fact.depth}: {fact.coverings} coverings, {fact.failures} failures")
        lines += [f"violation {v}" for v in rep.violations]
        lines += [f"note {n}" for n in rep.notes]
        _emit("\n".join(lines), cfg.out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prymcount", description="Point counts of Prym varieties over finite fields.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, required=True, help="odd prime power")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--ceiling", type=int, help="largest field or family size to enumerate")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="every bound for (q, g)")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--tau", type=int)
    p.add_argument("--nx", type=int, help="N_1(X)")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("exact", parents=[common], help="exact extremes for dimension 1 or 2")
    p.add_argument("--dim", type=int, choices=(1, 2), default=2)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("tables", parents=[common], help="candidate isogeny types near the extremes")
    p.add_argument("--side", choices=("max", "min", "both"), default="both")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("enumerate", parents=[common], help="exhaustive search over coverings")
    p.add_argument("--dim", type=int, choices=(1, 2), default=2)
    p.add_argument("--no-canonical", action="store_true", help="skip the affine reduction")
    p.add_argument("--checkpoint", help="append-only JSONL file for resumable runs")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", parents=[common], help="check the exact extremes")
    p.add_argument("--dim", type=int, choices=(1, 2), default=2)
    p.add_argument("--mode", choices=("auto", "full", "attainment"), default="auto")
    p.add_argument("--witnesses", help="write witness coverings (CSV) here")
    p.add_argument("--factorization", action="store_true",
                   help="also check the point-count factorization on every covering")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        q = PrimePower.from_q(args.q)
        if args.ceiling is not None and args.ceiling < 1:
            raise ValueError("ceiling must be positive")
        if args.jobs < 1:
            raise ValueError("jobs must be positive")
        if args.command == "bounds" and args.g < 1:
            raise ValueError("g must be positive")
        if args.command == "tables" and args.side != "max" and q.q <= 5:
            raise ValueError("the minimizing table needs q > 5")
    except (FieldError, ValueError) as exc:
        print(f"prymcount: error: {exc}", file=sys.stderr)
        return 2
    cfg = CommandConfig(args.command, q, args.format, args.ceiling, args.jobs, args.out)
    try:
        return args.func(cfg, args)
    except CeilingError as exc:
        print(f"prymcount: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"prymcount: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
