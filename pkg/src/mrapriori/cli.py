"""Command-line entry point: ``mrapriori {mine,bench,speedup,generate}``.

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import logging
import os
import statistics
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

from .apriori import run_sequential
from .candidate_store import HashTreeParams, StoreKind
from .core import MiningError, SupportThreshold
from .dataio import (
    TOKEN,
    GeneratorConfig,
    generate_synthetic,
    read_transactions,
    write_frequent,
    write_frequent_csv,
    write_transactions,
)
from .mapreduce import JobConfig, run_driver

log = logging.getLogger("mrapriori")

BENCH_COLUMNS = ["structure", "min_support", "lines_per_split", "num_mappers", "num_reducers",
                 "iteration", "wall_time_ms", "candidates", "frequent"]
SPEEDUP_COLUMNS = ["structure", "min_support", "num_mappers", "wall_time_ms", "speedup"]


class UsageError(Exception):
    pass


def _threshold(text):
    try:
        return SupportThreshold.parse(text)
    except MiningError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _structure(text):
    try:
        return StoreKind.parse(text)
    except MiningError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _table_width(text):
    value = _positive(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"child max size must be >= 2, got {text!r}")
    return value


def _leaf_size(text):
    if text.lower() in ("unlimited", "none", "inf"):
        return None
    return _positive(text)


def _listed(convert):
    # accept "a,b c" style lists
    def parse(text):
        return [convert(part) for part in text.split(",") if part]
    return parse


def _flatten(groups):
    return [x for group in groups for x in group]


def _add_input_args(p):
    src = p.add_argument_group("input")
    src.add_argument("--input", "-i", help="FIMI transaction file")
    src.add_argument("--tokens", action="store_true",
                     help="items are arbitrary tokens, mapped to ids by first appearance")
    src.add_argument("--generate", action="store_true", help="use synthetic data instead of --input")
    gen = p.add_argument_group("synthetic data (with --generate)")
    _add_generator_args(gen)


def _add_generator_args(gen):
    d = GeneratorConfig()
    gen.add_argument("--seed", type=int, default=d.seed)
    gen.add_argument("--num-transactions", type=_positive, default=d.num_transactions)
    gen.add_argument("--num-items", type=_positive, default=d.num_items)
    gen.add_argument("--avg-transaction-len", type=float, default=d.avg_transaction_len)
    gen.add_argument("--num-patterns", type=_positive, default=d.num_patterns)
    gen.add_argument("--avg-pattern-len", type=float, default=d.avg_pattern_len)
    gen.add_argument("--pattern-prob", type=float, default=d.pattern_prob)


def _add_store_args(p):
    p.add_argument("--child-max-size", type=_table_width, default=20,
                   help="hash tree table width (default 20)")
    p.add_argument("--leaf-max-size", type=_leaf_size, default=None,
                   help="hash tree leaf split threshold (default unlimited)")


def _add_job_args(p):
    p.add_argument("--reducers", type=_positive, default=4)
    p.add_argument("--workers", type=_positive, default=os.cpu_count() or 1,
                   help="maximum concurrently running mappers")
    p.add_argument("--share-candidates", action="store_true",
                   help="build C_k once per job instead of once per mapper")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mrapriori", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine frequent itemsets")
    _add_input_args(p)
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--min-support", "-s", type=_threshold, required=True,
                   help='fraction of transactions, or "count:N"')
    p.add_argument("--structure", type=_structure, default=StoreKind.TRIE,
                   help="hashtree, trie or hashtabletrie")
    p.add_argument("--mode", choices=["seq", "mr"], default="seq")
    p.add_argument("--lines-per-split", type=_positive, default=5000)
    p.add_argument("--emit", choices=["fimi", "csv"], default="fimi")
    p.add_argument("--cache-file", action="store_true",
                   help="(mr) pass each level to mappers through a frequent-level file")
    _add_job_args(p)
    _add_store_args(p)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("bench", help="time Apriori across structures, supports and split sizes")
    _add_input_args(p)
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--min-support", "-s", type=_listed(_threshold), nargs="+", required=True)
    p.add_argument("--structure", type=_listed(_structure), nargs="+",
                   default=[list(StoreKind)])
    p.add_argument("--lines-per-split", type=_listed(_positive), nargs="+", default=[[5000]])
    p.add_argument("--repetitions", type=_positive, default=3)
    _add_job_args(p)
    _add_store_args(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("speedup", help="speedup = T(1 mapper) / T(N mappers) from a bench CSV")
    p.add_argument("--input", "-i", required=True, help="bench CSV")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_speedup)

    p = sub.add_parser("generate", help="write a synthetic FIMI transaction file")
    p.add_argument("--output", "-o", default="-")
    _add_generator_args(p)
    p.set_defaults(func=cmd_generate)
    return parser


@contextmanager
def _sink(path):
    if path == "-":
        yield sys.stdout
        sys.stdout.flush()
        return
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        yield fh


def _generator_config(args) -> GeneratorConfig:
    return GeneratorConfig(
        seed=args.seed, num_transactions=args.num_transactions, num_items=args.num_items,
        avg_transaction_len=args.avg_transaction_len, num_patterns=args.num_patterns,
        avg_pattern_len=args.avg_pattern_len, pattern_prob=args.pattern_prob)


def _load(args):
    if args.generate:
        return generate_synthetic(_generator_config(args))
    if not args.input:
        raise UsageError("one of --input or --generate is required")
    db, _ = read_transactions(args.input, TOKEN if args.tokens else "integer")
    return db


def _params(args) -> HashTreeParams:
    return HashTreeParams(args.child_max_size, args.leaf_max_size)


def cmd_mine(args) -> int:
    db = _load(args)
    if not len(db):
        raise MiningError("input database is empty")
    params = _params(args)
    if args.mode == "seq":
        result = run_sequential(db, args.min_support, args.structure, params)
    else:
        config = JobConfig(
            lines_per_split=args.lines_per_split, num_reducers=args.reducers,
            store_kind=args.structure, store_params=params, worker_limit=args.workers,
            share_candidates=args.share_candidates, cache_dir="" if args.cache_file else None)
        result, reports = run_driver(db, args.min_support, config)
        for r in reports:
            log.info("iteration %d: %d mappers, %d candidates, %d frequent, %.1f ms",
                     r.iteration, r.num_mappers, r.candidates_generated, r.frequent_found,
                     r.wall_time * 1000)
    with _sink(args.output) as out:
        if args.emit == "csv":
            write_frequent_csv(result, len(db), out)
        else:
            write_frequent(result, len(db), out)
    log.info("%d frequent itemsets over %d iterations", result.num_frequent, result.iterations)
    return 0


def bench_rows(db, thresholds, structures, splits, repetitions, num_reducers, workers,
               params, share_candidates=False) -> list[dict]:
    """Median-of-repetitions timings: one row per iteration plus a total row per setup."""
    rows = []
    for kind in structures:
        for threshold in thresholds:
            for lines in splits:
                config = JobConfig(lines_per_split=lines, num_reducers=num_reducers,
                                   store_kind=kind, store_params=params, worker_limit=workers,
                                   share_candidates=share_candidates)
                per_iter, totals, reports = [], [], None
                for _ in range(repetitions):
                    started = time.perf_counter()
                    _, reports = run_driver(db, threshold, config)
                    totals.append(time.perf_counter() - started)
                    per_iter.append([r.wall_time for r in reports])
                base = {
                    "structure": kind.value,
                    "min_support": str(threshold),
                    "lines_per_split": lines,
                    "num_mappers": reports[0].num_mappers,
                    "num_reducers": num_reducers,
                }
                for i, r in enumerate(reports):
                    rows.append({**base, "iteration": r.iteration,
                                 "wall_time_ms": _ms(statistics.median(t[i] for t in per_iter)),
                                 "candidates": r.candidates_generated,
                                 "frequent": r.frequent_found})
                rows.append({**base, "iteration": "total",
                             "wall_time_ms": _ms(statistics.median(totals)),
                             "candidates": sum(r.candidates_generated for r in reports),
                             "frequent": sum(r.frequent_found for r in reports)})
                log.info("%s support=%s lines=%d: %s ms", kind.value, threshold, lines,
                         rows[-1]["wall_time_ms"])
    return rows


def _ms(seconds: float) -> str:
    return f"{seconds * 1000:.3f}"


def cmd_bench(args) -> int:
    db = _load(args)
    if not len(db):
        raise MiningError("input database is empty")
    rows = bench_rows(db, _flatten(args.min_support), _flatten(args.structure),
                      _flatten(args.lines_per_split), args.repetitions, args.reducers,
                      args.workers, _params(args), args.share_candidates)
    with _sink(args.output) as out:
        writer = csv.DictWriter(out, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return 0


def _decimal(value: Fraction, places: int) -> str:
    scale = 10 ** places
    q = round(value * scale)
    return f"{q // scale}.{q % scale:0{places}d}"


def speedup_rows(bench_rows_: list[dict]) -> list[dict]:
    totals = {}
    order = []
    for row in bench_rows_:
        if row["iteration"] != "total":
            continue
        group = (row["structure"], row["min_support"])
        if group not in totals:
            totals[group] = {}
            order.append(group)
        totals[group].setdefault(int(row["num_mappers"]), row["wall_time_ms"])
    out = []
    for structure, support in order:
        times = totals[(structure, support)]
        if 1 not in times:
            raise MiningError(f"no 1-mapper baseline for structure={structure} min_support={support}")
        base = Fraction(times[1])
        for n in sorted(times):
            t = Fraction(times[n])
            if t <= 0:
                raise MiningError(f"non-positive time for structure={structure} "
                                  f"min_support={support} num_mappers={n}")
            out.append({"structure": structure, "min_support": support, "num_mappers": n,
                        "wall_time_ms": times[n], "speedup": _decimal(base / t, 4)})
    return out


def cmd_speedup(args) -> int:
    with open(args.input, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(BENCH_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise MiningError(f"bench CSV lacks columns: {sorted(missing)}")
        rows = speedup_rows(list(reader))
    with _sink(args.output) as out:
        writer = csv.DictWriter(out, fieldnames=SPEEDUP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return 0


def cmd_generate(args) -> int:
    db = generate_synthetic(_generator_config(args))
    with _sink(args.output) as out:
        write_transactions(db, out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (MiningError, OSError, ValueError) as exc:
        print(f"mrapriori: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
