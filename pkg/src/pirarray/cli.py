"""Command-line entry point: ``pirarray construct|verify|bounds|compare``.

Exit codes: 0 success, 1 bad input, 2 verification failure, 3 size guard hit
(a dry-run summary is printed instead of building the code).
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from . import bounds, constructions, verifier
from .model import CodeFormatError, deserialize, rate, serialize

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_DRY_RUN = 3


class UsageError(Exception):
    pass


def decimal_str(x: Fraction, digits: int = 20) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, default=str))
    else:
        print("\n".join(lines))


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    out = [fmt.format(*header).rstrip(), fmt.format(*["-" * w for w in widths]).rstrip()]
    out += [fmt.format(*map(str, r)).rstrip() for r in rows]
    return out


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.kind} needs {' '.join(missing)}")


# -- construct -----------------------------------------------------------------


def cmd_construct(args) -> int:
    limit = args.max_columns if args.max_columns is not None else constructions.max_columns_default()
    try:
        if args.kind == "small-s":
            _need(args, "t", "d")
            code, witness = constructions.construct_small_s(args.t, args.d, args.q)
            bound = bounds.best_upper_bound(args.t, args.d)
        elif args.kind in ("be", "modified"):
            _need(args, "s", "t")
            build = constructions.construct_be if args.kind == "be" else constructions.construct_modified
            code, witness = build(args.s, args.t, args.q, max_columns=limit)
            bound = bounds.best_upper_bound(args.t, (args.s - 1) * args.t)
        else:
            code, witness = constructions.intro_example_code(args.q)
            bound = bounds.best_upper_bound(code.t, code.p - code.t)
    except constructions.SizeGuardExceeded as exc:
        closed = bounds.be_closed_form if args.kind == "be" else bounds.modified_closed_form
        m, k = closed(args.s, args.t)
        r = rate(k, m)
        _emit(args, {"dry_run": True, "kind": args.kind, "m": m, "k": k, "rate": _frac(r), "limit": exc.limit},
              [f"dry run: {exc}", f"m={m} k={k} rate={_frac(r)} ({decimal_str(r)})"])
        return EXIT_DRY_RUN
    report = verifier.verify_witness(code, witness)
    r = rate(report.k, code.m)
    relation = "=" if r == bound.value else ("<" if r < bound.value else ">")
    if args.out:
        Path(args.out).write_text(serialize(code, witness), encoding="utf-8")
    lines = [
        f"kind={args.kind} t={code.t} p={code.p} q={code.q}",
        f"m={code.m} k={report.k}",
        f"rate={_frac(r)} ({decimal_str(r)})",
        f"bound={_frac(bound.value)} ({decimal_str(bound.value)}) [{bound.source}] rate {relation} bound"
        + (" (tight)" if relation == "=" else ""),
    ]
    if args.out:
        lines.append(f"wrote {args.out}")
    _emit(args, {"kind": args.kind, "t": code.t, "p": code.p, "q": code.q, "m": code.m, "k": report.k,
                 "rate": _frac(r), "bound": _frac(bound.value), "bound_source": bound.source,
                 "witness_ok": report.ok}, lines)
    return EXIT_OK if report.ok else EXIT_VERIFY


# -- verify --------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        code, witness = deserialize(Path(args.path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except CodeFormatError as exc:
        raise UsageError(f"parse error: {exc}") from None
    if args.mode == "witness":
        if witness is None:
            raise UsageError("file has no witness; use --mode brute")
        report = verifier.verify_witness(code, witness)
        lines = [f"m={code.m} t={code.t} p={code.p} q={code.q}", f"k={report.k}",
                 "per-item: " + " ".join(f"{i}:{n}" for i, n in report.per_item.items())]
        lines += [f"FAIL item {f.item} subset {list(f.subset)}: {f.reason}" for f in report.failures]
        lines.append("witness OK" if report.ok else f"{len(report.failures)} failure(s)")
        _emit(args, {"m": code.m, "k": report.k, "per_item": report.per_item,
                     "failures": [vars(f) for f in report.failures]}, lines)
        return EXIT_OK if report.ok else EXIT_VERIFY
    try:
        per_item = {i: verifier.brute_force_k(code, i, args.cap) for i in range(code.p)}
    except verifier.CapExceededError as exc:
        raise UsageError(str(exc)) from None
    k = min(per_item.values())
    declared = witness.k if witness is not None else None
    ok = declared is None or k >= declared
    lines = [f"m={code.m} t={code.t} p={code.p} q={code.q}", f"k={k} (brute force)",
             "per-item: " + " ".join(f"{i}:{n}" for i, n in per_item.items())]
    if declared is not None:
        lines.append(f"declared k={declared}: " + ("OK" if ok else "brute force found fewer"))
    _emit(args, {"m": code.m, "k": k, "per_item": per_item, "declared_k": declared}, lines)
    return EXIT_OK if ok else EXIT_VERIFY


# -- bounds --------------------------------------------------------------------


def _grid_small_s(args) -> tuple[dict, list[str]]:
    rows, data = [], []
    for d in range(1, 6):
        for t in range(max(2, d * d - d + 1), 31):
            if d > t:
                continue
            prm = constructions.small_s_params(t, d)
            r, ub = Fraction(prm.k, prm.m), bounds.ub_small_s(t, d)
            rel = "=" if r == ub else ("<" if r < ub else ">")
            rows.append([t, d, prm.m, prm.k, _frac(r), _frac(ub), rel])
            data.append({"t": t, "d": d, "m": prm.m, "k": prm.k, "rate": _frac(r), "ub": _frac(ub), "tight": rel})
    return {"grid": "small-s", "rows": data}, _table(["t", "d", "m", "k", "rate", "ub_small_s", "tight"], rows)


def _grid_large_s(args) -> tuple[dict, list[str]]:
    rows, data = [], []
    for p in range(5, 31):
        for t in range(2, p):
            d = p - t
            if d <= t:
                continue
            a, b = bounds.ub_large_s(t, d), bounds.ub_small_s(t, d)
            rel = "<" if a < b else ">="
            rows.append([t, d, _frac(a), _frac(b), rel])
            data.append({"t": t, "d": d, "ub_large_s": _frac(a), "ub_small_s": _frac(b), "improves": a < b})
    return {"grid": "large-s", "rows": data}, _table(["t", "d", "ub_large_s", "ub_small_s", "cmp"], rows)


def cmd_bounds(args) -> int:
    if args.grid:
        payload, lines = (_grid_small_s if args.grid == "small-s" else _grid_large_s)(args)
        _emit(args, payload, lines)
        return EXIT_OK
    if args.s is None and (args.t is None or args.d is None):
        raise UsageError("bounds needs --s, or --t and --d, or --grid")
    try:
        s = Fraction(args.s) if args.s is not None else None
        values = bounds.catalog(args.t, args.d, s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = [[v.source, v.kind, ",".join(map(str, v.params)), _frac(v.value), decimal_str(v.value)] for v in values]
    _emit(args, {"rows": [{"source": v.source, "kind": v.kind, "params": [str(x) for x in v.params],
                           "value": _frac(v.value)} for v in values]},
          _table(["source", "kind", "params", "value", "decimal"], rows))
    return EXIT_OK


# -- compare -------------------------------------------------------------------


def cmd_compare(args) -> int:
    try:
        rep = bounds.compare_section42(args.s, args.t)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d = (args.s - 1) * args.t
    floor, ub = bounds.floor_rate(args.s, args.t), bounds.ub_large_s(args.t, d)
    improves = bounds.ub_improvement_check(args.t, d)
    sandwich = floor < rep.rate < ub
    rows = [[f"case {c.case}", ",".join(f"{k}={v}" for k, v in c.params.items()), _frac(c.theirs),
             _frac(c.margin), "yes" if c.strict else "NO"] for c in rep.rows]
    lines = [f"s={args.s} t={args.t} modified rate={_frac(rep.rate)} ({decimal_str(rep.rate)})"]
    lines += _table(["family", "params", "their rate", "margin", "strict"], rows)
    lines += [f"skipped {note}" for note in rep.skipped]
    lines.append(f"floor {_frac(floor)} < rate < ub_large_s {_frac(ub)}: {'yes' if sandwich else 'NO'}")
    lines.append(f"ub_large_s < ub_small_s at (t={args.t}, d={d}): {'yes' if improves else 'NO'}")
    ok = rep.all_strict and sandwich and improves
    _emit(args, {"s": args.s, "t": args.t, "rate": _frac(rep.rate),
                 "rows": [{"case": c.case, "params": c.params, "theirs": _frac(c.theirs),
                           "margin": _frac(c.margin), "strict": c.strict} for c in rep.rows],
                 "skipped": list(rep.skipped), "sandwich": sandwich, "ub_improves": improves, "ok": ok}, lines)
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pirarray", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["table", "json"], default="table")

    c = sub.add_parser("construct", help="build a code and its witness")
    c.add_argument("kind", choices=["small-s", "be", "modified", "intro-example"])
    c.add_argument("--t", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--s", type=int)
    c.add_argument("--q", type=int, default=2, help="prime field size (default 2)")
    c.add_argument("--out", help="write the code file here")
    c.add_argument("--max-columns", type=int, help="size guard; env PIR_MAX_COLUMNS also works")
    common(c)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a code file")
    v.add_argument("path")
    v.add_argument("--mode", choices=["witness", "brute"], default="witness")
    v.add_argument("--cap", type=int, default=verifier.DEFAULT_BRUTE_CAP, help="max columns for brute force")
    common(v)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", help="tabulate bounds and rates")
    b.add_argument("--s")
    b.add_argument("--t", type=int)
    b.add_argument("--d", type=int)
    b.add_argument("--grid", choices=["small-s", "large-s"])
    common(b)
    b.set_defaults(func=cmd_bounds)

    k = sub.add_parser("compare", help="compare the modified construction with earlier families")
    k.add_argument("--s", type=int, required=True)
    k.add_argument("--t", type=int, required=True)
    common(k)
    k.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if getattr(args, "max_columns", None) is not None and args.max_columns < 1:
        print("error: --max-columns must be positive", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "cap", None) is not None and args.cap < 1:
        print("error: --cap must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
