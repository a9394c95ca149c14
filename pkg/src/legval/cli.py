"""Command-line front end.

Subcommands: ``eval`` (exact values), ``valuate`` (exact valuations),
``predict`` (closed-form predictors), ``verify`` (predictor-vs-oracle
campaigns), ``mine`` (kernel relation search), ``rank`` (kernel rank
estimate), ``oeis-check`` (b-file comparison).

Exit codes: 0 all checks passed or skipped, 1 a mathematical mismatch was
found, 2 usage or parse errors.  Output is byte-identical across runs in
csv/jsonl modes, except for a timestamp field suppressible with
``--no-timestamp``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from .arith import Prime, format_rational, parse_rational
from .miner import (
    DEFAULT_MIN_SUPPORT,
    ValuationTable,
    build_table,
    estimate_kernel_rank,
    format_relation,
    mine_relations,
)
from .oeis import BFileError, oeis_check
from .predictors import (
    PredictionContext,
    predict_b_conjecture1,
    predict_by_recurrence,
    predict_cube_sum_v3,
    predict_strauss_shallit,
    predict_vp_Q,
    predict_vp_cigler,
    predict_vp_legendre_at_2,
    predict_vp_legendre_at_p_cases,
    predict_vp_legendre_at_p_digits,
    predict_vp_legendre_general,
    predict_vp_legendre_general_oneline,
)
from .sequences import SequenceKind, SequenceSpec, iter_sequence_valuations, iter_sequence_values
from .verify import THEOREM_IDS, UsageError, VerificationReport, run_verification

PREDICTOR_IDS = (
    "thm3", "thm3-oneline", "thm4", "thm4-digits", "thm4-rec", "thm5",
    "q", "cigler", "conj1", "conj2", "strauss",
)


def _parse_range(text: str) -> tuple[int, int]:
    """Inclusive 'a..b' range; a bare 'k' means k..k."""
    parts = text.split("..")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise UsageError(f"malformed range {text!r}; expected 'a..b' or 'a'") from None
    if lo < 0 or hi < lo:
        raise UsageError(f"bad index range {text!r}")
    return lo, hi


def _prime(value: int) -> Prime:
    try:
        return Prime(value)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _spec_from_args(args: argparse.Namespace) -> SequenceSpec:
    kind = SequenceKind(args.seq)
    r = getattr(args, "r", None)
    try:
        if r is not None:
            return SequenceSpec(kind, r)
        return SequenceSpec(kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _timestamp(args: argparse.Namespace) -> str:
    return "" if args.no_timestamp else datetime.now(timezone.utc).isoformat()


class _Output:
    """Writes to --out or stdout."""

    def __init__(self, args: argparse.Namespace):
        self._path = args.out

    def __enter__(self) -> io.TextIOBase:
        if self._path:
            self._handle = open(self._path, "w", encoding="utf-8", newline="")
            return self._handle
        self._handle = None
        return sys.stdout

    def __exit__(self, *exc) -> None:
        if self._handle is not None:
            self._handle.close()


def _emit(args: argparse.Namespace, fieldnames: list[str], rows: list[dict],
          text_lines: list[str]) -> None:
    with _Output(args) as out:
        if args.format == "text":
            for line in text_lines:
                out.write(line + "\n")
        elif args.format == "csv":
            writer = csv.DictWriter(out, fieldnames=fieldnames, lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        else:
            for row in rows:
                out.write(json.dumps(row, sort_keys=True) + "\n")


def _stream_rows(args: argparse.Namespace, column: str, pairs) -> None:
    rows = [{"n": n, column: str(v)} for n, v in pairs]
    text = [f"{row['n']} {row[column]}" for row in rows]
    _emit(args, ["n", column], rows, text)


def cmd_eval(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    lo, hi = _parse_range(args.n)
    values = iter_sequence_values(spec, hi + 1, lo)
    _stream_rows(args, "value", ((n, format_rational(v)) for n, v in zip(range(lo, hi + 1), values)))
    return 0


def cmd_valuate(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    p = _prime(args.p)
    lo, hi = _parse_range(args.n)
    vals = iter_sequence_valuations(spec, p, hi + 1, lo)
    _stream_rows(args, "valuation", zip(range(lo, hi + 1), vals))
    return 0


def _predictor_fn(args: argparse.Namespace):
    name = args.predictor
    p = _prime(args.p) if args.p is not None else None
    r = args.r

    def need_p() -> Prime:
        if p is None:
            raise UsageError(f"predictor {name} requires --p")
        return p

    def need_ctx() -> PredictionContext:
        if p is None or r is None:
            raise UsageError(f"predictor {name} requires --p and --r")
        try:
            return PredictionContext(p, r)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    if name == "thm3":
        ctx = need_ctx()
        return lambda n: predict_vp_legendre_general(ctx, n)
    if name == "thm3-oneline":
        ctx = need_ctx()
        return lambda n: predict_vp_legendre_general_oneline(ctx, n)
    if name == "thm4":
        pp = need_p()
        return lambda n: predict_vp_legendre_at_p_cases(pp, n)
    if name == "thm4-digits":
        pp = need_p()
        return lambda n: predict_vp_legendre_at_p_digits(pp, n)
    if name == "thm4-rec":
        pp = need_p()
        return lambda n: predict_by_recurrence(pp, n)
    if name == "thm5":
        return predict_vp_legendre_at_2
    if name == "q":
        pp = need_p()
        if r is None:
            raise UsageError("predictor q requires --r")
        return lambda n: predict_vp_Q(pp, r, n)
    if name == "cigler":
        pp = need_p()
        return lambda n: predict_vp_cigler(pp, n)
    if name == "conj1":
        return predict_b_conjecture1
    if name == "conj2":
        return predict_cube_sum_v3
    if name == "strauss":
        return predict_strauss_shallit
    raise UsageError(f"unknown predictor {name!r}")


def cmd_predict(args: argparse.Namespace) -> int:
    fn = _predictor_fn(args)
    lo, hi = _parse_range(args.n)
    try:
        pairs = [(n, fn(n)) for n in range(lo, hi + 1)]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _stream_rows(args, "predicted", pairs)
    return 0


def _report_rows(args: argparse.Namespace, report: VerificationReport) -> tuple[list[str], list[dict], list[str]]:
    stamp = _timestamp(args)
    params = " ".join(f"{k}={v}" for k, v in report.parameters.items())
    fields = ["theorem", "parameters", "checked", "mismatch_count", "status", "timestamp"]
    row = {
        "theorem": report.theorem_id,
        "parameters": params,
        "checked": report.checked,
        "mismatch_count": len(report.mismatches),
        "status": report.status,
        "timestamp": stamp,
    }
    if args.format == "jsonl":
        row = dict(row)
        row["mismatches"] = [
            {"n": m.n, "predicted": m.predicted, "actual": m.actual, "detail": m.detail}
            for m in report.mismatches
        ]
        if not stamp:
            row.pop("timestamp")
    text = []
    if stamp:
        text.append(f"# generated-at {stamp}")
    text.append(
        f"{report.theorem_id} {params}: {report.status} "
        f"({report.checked} checked, {len(report.mismatches)} mismatches)")
    for m in report.mismatches:
        extra = f" [{m.detail}]" if m.detail else ""
        text.append(f"  n={m.n} predicted={m.predicted} actual={m.actual}{extra}")
    return fields, [row], text


def cmd_verify(args: argparse.Namespace) -> int:
    lo, hi = _parse_range(args.n)
    p = _prime(args.p) if args.p is not None else None
    report = run_verification(
        args.theorem, lo, hi, p=p, r=args.r, jobs=args.jobs, against=args.against)
    fields, rows, text = _report_rows(args, report)
    _emit(args, fields, rows, text)
    return 0 if report.passed else 1


def _cached_table(args: argparse.Namespace, spec: SequenceSpec, p: Prime, N: int) -> ValuationTable:
    if not args.cache:
        return build_table(spec, p, N, jobs=args.jobs)
    cache_dir = Path(args.cache)
    cache_dir.mkdir(parents=True, exist_ok=True)
    safe = spec.canonical().replace("/", "_")
    path = cache_dir / f"{safe}_p{int(p)}.table"
    if path.exists():
        try:
            cached = ValuationTable.load(path)
        except ValueError:
            cached = None
        if cached is not None and cached.spec == spec and cached.p == p and cached.N >= N:
            return cached.truncated(N)
    table = build_table(spec, p, N, jobs=args.jobs)
    table.save(path)
    return table


def cmd_mine(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    p = _prime(args.p)
    if args.max_e < 0:
        raise UsageError("--max-e must be >= 0")
    N = args.N if args.N is not None else int(p) ** args.max_e * args.min_support * 4
    c_bound = args.c_bound if args.c_bound is not None else 2 * int(p)
    table = _cached_table(args, spec, p, N)
    try:
        mined = mine_relations(table, args.max_e, args.min_support, c_bound=c_bound)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    stamp = _timestamp(args)
    meta = (
        f"spec={spec.canonical()} p={int(p)} N={N} max_e={args.max_e} "
        f"min_support={args.min_support} c_bound={c_bound}")
    fields = ["relation", "e", "i", "e2", "j", "c", "support", "violations", "skipped", "timestamp"]
    rows = []
    for rel in mined:
        c = rel.candidate
        rows.append({
            "relation": format_relation(c, p),
            "e": c.e, "i": c.i, "e2": c.e2, "j": c.j, "c": c.c,
            "support": rel.support, "violations": rel.violations,
            "skipped": rel.skipped, "timestamp": stamp,
        })
    if args.format == "jsonl":
        head = {"record": "metadata", "search": meta,
                "note": "search bounds are artifact-chosen defaults"}
        if stamp:
            head["timestamp"] = stamp
        for row in rows:
            if not stamp:
                row.pop("timestamp")
        rows = [head] + rows
    text = []
    if stamp:
        text.append(f"# generated-at {stamp}")
    text.append(f"# mining {meta} (search bounds are artifact-chosen defaults)")
    for rel in mined:
        text.append(
            f"{format_relation(rel.candidate, p)}   "
            f"[support={rel.support} skipped={rel.skipped}]")
    if not mined:
        text.append("# no relations found")
    _emit(args, fields, rows, text)
    return 0


def cmd_rank(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    p = _prime(args.p)
    if args.prefix_len < 1 or args.max_e < 0:
        raise UsageError("--prefix-len must be >= 1 and --max-e >= 0")
    deepest = int(p) ** args.max_e
    needed = deepest * (args.prefix_len - 1) + deepest - 1
    N = args.N if args.N is not None else needed
    if N < needed:
        raise UsageError(f"--N too small: rank needs indices up to {needed}")
    table = _cached_table(args, spec, p, N)
    est = estimate_kernel_rank(table, args.max_e, args.prefix_len)
    stamp = _timestamp(args)
    basis = " ".join(f"({e},{i})" for e, i in est.basis_labels)
    dropped = " ".join(f"({e},{i})" for e, i in est.dropped)
    fields = ["spec", "p", "max_e", "prefix_len", "rank", "basis", "dropped", "timestamp"]
    row = {
        "spec": spec.canonical(), "p": int(p), "max_e": est.max_e,
        "prefix_len": est.prefix_len, "rank": est.rank,
        "basis": basis, "dropped": dropped, "timestamp": stamp,
    }
    if args.format == "jsonl" and not stamp:
        row.pop("timestamp")
    text = []
    if stamp:
        text.append(f"# generated-at {stamp}")
    text.append(
        f"rank {spec.canonical()} p={int(p)} max_e={est.max_e} "
        f"prefix_len={est.prefix_len}: {est.rank}")
    text.append(f"  basis: {basis}")
    if dropped:
        text.append(f"  dropped (infinite entries): {dropped}")
    _emit(args, fields, [row], text)
    return 0


def cmd_oeis_check(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    p = _prime(args.p) if args.p is not None else None
    report = oeis_check(spec, args.bfile, p=p, offset=args.offset, limit=args.limit)
    fields, rows, text = _report_rows(args, report)
    _emit(args, fields, rows, text)
    return 0 if report.passed else 1


def _add_seq_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seq", required=True, choices=[k.value for k in SequenceKind],
                     help="which sequence")
    sub.add_argument("--r", type=parse_rational, default=None,
                     help="evaluation point for legendre/q/cigler, e.g. 3 or 9/5")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="legval",
        description="Exact Legendre-family evaluation, p-adic valuation "
                    "predictors, verification campaigns, and kernel relation mining.")
    parser.add_argument("--format", choices=("text", "csv", "jsonl"), default="text")
    parser.add_argument("--out", metavar="PATH", help="write output to a file instead of stdout")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="omit the timestamp field for byte-identical output")
    parser.add_argument("--jobs", type=int, default=1, metavar="K",
                        help="worker processes for table sweeps")
    parser.add_argument("--cache", metavar="DIR",
                        help="directory for persisted valuation tables (mine/rank)")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="exact sequence values over a range")
    _add_seq_options(s)
    s.add_argument("--n", required=True, help="inclusive range a..b")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("valuate", help="exact p-adic valuations over a range")
    _add_seq_options(s)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--n", required=True)
    s.set_defaults(func=cmd_valuate)

    s = sub.add_parser("predict", help="closed-form valuation predictions")
    s.add_argument("--predictor", required=True, choices=PREDICTOR_IDS)
    s.add_argument("--p", type=int, default=None)
    s.add_argument("--r", type=parse_rational, default=None)
    s.add_argument("--n", required=True)
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("verify", help="compare a predictor with the exact oracle")
    s.add_argument("--theorem", required=True, choices=THEOREM_IDS)
    s.add_argument("--p", type=int, default=None)
    s.add_argument("--r", type=parse_rational, default=None)
    s.add_argument("--n", required=True)
    s.add_argument("--against", choices=("oracle", "digits"), default="oracle",
                   help="conj1 only: compare with the exact oracle or the digit formula")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("mine", help="search a valuation table for kernel relations")
    _add_seq_options(s)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--N", type=int, default=None, help="table length (default scales with the search)")
    s.add_argument("--max-e", type=int, default=2, dest="max_e")
    s.add_argument("--min-support", type=int, default=DEFAULT_MIN_SUPPORT, dest="min_support")
    s.add_argument("--c-bound", type=int, default=None, dest="c_bound",
                   help="offset bound |c| (default 2p)")
    s.set_defaults(func=cmd_mine)

    s = sub.add_parser("rank", help="estimate kernel rank by exact elimination")
    _add_seq_options(s)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--max-e", type=int, default=3, dest="max_e")
    s.add_argument("--prefix-len", type=int, default=100, dest="prefix_len")
    s.add_argument("--N", type=int, default=None)
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("oeis-check", help="compare a local OEIS b-file with a sequence")
    _add_seq_options(s)
    s.add_argument("--p", type=int, default=None,
                   help="compare valuations instead of raw values")
    s.add_argument("--bfile", required=True)
    s.add_argument("--offset", type=int, default=0,
                   help="our index = b-file index + offset")
    s.add_argument("--limit", type=int, default=None,
                   help="ignore b-file entries mapping beyond this index")
    s.set_defaults(func=cmd_oeis_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
