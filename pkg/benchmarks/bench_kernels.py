"""Compiled vs pure-Python support counting, per candidate structure.

    python3 benchmarks/bench_kernels.py --num-transactions 5000 --repetitions 3

Each row times ``store.count(db)`` for one level-2 candidate set, after the
store layout is frozen.  Both
backends must agree on counts and operation counters; the script exits
non-zero if they do not.
"""
from __future__ import annotations

import argparse
import statistics
import sys
import time

from mrapriori import kernels
from mrapriori.apriori import frequent_one
from mrapriori.candidate_store import StoreKind, generate_candidates
from mrapriori.core import FrequentLevel, SupportThreshold, resolve_threshold
from mrapriori.dataio import GeneratorConfig, generate_synthetic


def time_count(level: FrequentLevel, kind: StoreKind, db, backend: str, repetitions: int):
    samples = []
    with kernels.use(backend):
        for _ in range(repetitions):
            store = generate_candidates(level, kind)
            store._freeze()  # layout building is shared Python code; time the kernel only
            started = time.perf_counter()
            ops = store.count(db)
            samples.append(time.perf_counter() - started)
    return statistics.median(samples), ops, store.extract_counted()


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--num-transactions", type=int, default=5000)
    p.add_argument("--num-items", type=int, default=300)
    p.add_argument("--min-support", type=float, default=0.01)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args(argv)

    db = generate_synthetic(GeneratorConfig(seed=args.seed, num_transactions=args.num_transactions,
                                            num_items=args.num_items, num_patterns=50))
    min_count = resolve_threshold(SupportThreshold(relative=args.min_support), db)
    l1 = frequent_one(db, min_count)
    backends = kernels.available()
    print(f"{len(db)} transactions, |L1|={len(l1)}, backends={backends}")
    print(f"{'structure':<14}{'backend':<10}{'seconds':>10}{'speedup':>9}")
    ok = True
    for kind in StoreKind:
        results = {b: time_count(l1, kind, db, b, args.repetitions) for b in backends}
        base = results["python"][0]
        for b, (secs, _, _) in results.items():
            print(f"{kind.value:<14}{b:<10}{secs:>10.4f}{base / secs:>8.1f}x")
        outcomes = [(ops, counted) for _, ops, counted in results.values()]
        if any(o != outcomes[0] for o in outcomes):
            print(f"backend mismatch for {kind.value}", file=sys.stderr)
            ok = False
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
