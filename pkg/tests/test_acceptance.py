"""Exit criteria.  Each test prints one ``ACCEPTANCE <n> PASS|FAIL`` line.

Run alone with ``pytest tests/test_acceptance.py -s``.
"""
import csv
import io
import os
import random
import time
from itertools import combinations

import pytest

from mrapriori import kernels
from mrapriori.apriori import brute_force_mine, run_sequential
from mrapriori.candidate_store import HashTree, HashTreeParams, StoreKind, Trie, generate_candidates
from mrapriori.cli import main
from mrapriori.core import FrequentLevel, SupportThreshold, TransactionDatabase, is_subset
from mrapriori.dataio import GeneratorConfig, generate_synthetic, read_transactions, write_transactions
from mrapriori.mapreduce import JobConfig, run_driver, split_input

from .conftest import random_db

FIVE_ITEM_C3 = [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 3, 5),
           (1, 4, 5), (2, 3, 4), (2, 3, 5), (2, 4, 5), (3, 4, 5)]


@pytest.fixture
def verdict(capsys):
    def emit(n, name, ok, detail=""):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'} {name}"
                  + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {n} failed: {name} {detail}"
    return emit


def test_1_oracle_equivalence(verdict):
    rng = random.Random(20240601)
    thresholds = [0.1, 0.2, 0.3, 0.5]
    mismatches = []
    runs = 0
    started = time.perf_counter()
    for i in range(200):
        db = random_db(rng, n_tx=25, n_items=12)
        threshold = SupportThreshold(relative=thresholds[i % 4])
        expected = brute_force_mine(db, threshold)
        for kind in StoreKind:
            runs += 1
            if run_sequential(db, threshold, kind) != expected:
                mismatches.append((i, kind, "seq"))
            for lines in (1, 3, len(db)):
                for reducers in (1, 4):
                    runs += 1
                    config = JobConfig(lines_per_split=lines, num_reducers=reducers, store_kind=kind)
                    result, _ = run_driver(db, threshold, config)
                    if result != expected:
                        mismatches.append((i, kind, lines, reducers))
    elapsed = time.perf_counter() - started
    verdict(1, "oracle equivalence", not mismatches and elapsed < 120,
            f"{runs} runs over 200 databases, {len(mismatches)} mismatches, {elapsed:.1f}s")


def test_2_five_items_candidate_set(verdict):
    l2 = FrequentLevel(2, [(p, 1) for p in combinations(range(1, 6), 2)])
    got = {kind.value: list(generate_candidates(l2, kind, HashTreeParams(3, None)))
           for kind in StoreKind}
    verdict(2, "five-item candidate set", all(v == FIVE_ITEM_C3 for v in got.values()),
            ", ".join(f"{k}={len(v)}" for k, v in got.items()))


def test_3_trie_prefix_sharing(verdict):
    trie = Trie(3)
    for c in FIVE_ITEM_C3:
        trie.insert(c)
    oracle = 1 + len({c[:i] for c in FIVE_ITEM_C3 for i in (1, 2, 3)})
    verdict(3, "trie prefix sharing", trie.node_count() == oracle == 20,
            f"nodes={trie.node_count()} oracle={oracle}")


def test_4_mapper_count_relation(verdict, tmp_path):
    db = generate_synthetic(GeneratorConfig(seed=5, num_transactions=100_000, num_items=200,
                                            avg_transaction_len=3, num_patterns=10,
                                            avg_pattern_len=2))
    path = tmp_path / "t100k.dat"
    with path.open("w") as fh:
        write_transactions(db, fh)
    db, _ = read_transactions(path)
    expected = {100_000: 1, 50_000: 2, 20_000: 5, 10_000: 10, 5_000: 20}
    got = {chunk: len(split_input(db, chunk)) for chunk in expected}
    verdict(4, "chunk -> mapper relation", len(db) == 100_000 and got == expected, str(got))


def test_5_speedup_arithmetic(verdict, tmp_path, capsys):
    totals = [(100_000, 1, 2907), (50_000, 2, 1649), (20_000, 5, 720), (10_000, 10, 425),
              (5_000, 20, 350)]
    path = tmp_path / "bench.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["structure", "min_support", "lines_per_split", "num_mappers", "num_reducers",
                    "iteration", "wall_time_ms", "candidates", "frequent"])
        for chunk, mappers, t in totals:
            w.writerow(["hashtree", "0.02", chunk, mappers, 4, "total", t, 0, 0])
    assert main(["speedup", "-i", str(path)]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    got = [float(r["speedup"]) for r in rows]
    expected = [1.0000, 1.7629, 4.0375, 6.8400, 8.3057]
    ok = len(got) == 5 and all(abs(g - e) <= 1e-4 for g, e in zip(got, expected))
    verdict(5, "speedup arithmetic", ok, " ".join(r["speedup"] for r in rows))


def test_6_probe_economy(verdict):
    def measure():
        db = generate_synthetic(GeneratorConfig(seed=42, num_transactions=2000, num_items=100,
                                                avg_transaction_len=10, num_patterns=1,
                                                pattern_prob=0.0))
        l1 = run_sequential(db, SupportThreshold(relative=0.005)).level(1)
        trie = generate_candidates(l1, StoreKind.TRIE)
        htt = generate_candidates(l1, StoreKind.HASH_TABLE_TRIE)
        fanout = max(len(n.children) for n in trie._bfs()[0])
        return trie.count(db), htt.count(db), fanout, trie.extract_counted() == htt.extract_counted()

    started = time.perf_counter()
    first = measure()
    second = measure()
    elapsed = time.perf_counter() - started
    ops_trie, ops_htt, fanout, same_counts = first
    ok = (fanout >= 8 and same_counts and first == second and elapsed < 30
          and ops_htt.label_comparisons < ops_trie.label_comparisons)
    verdict(6, "probe economy", ok,
            f"backend={kernels.active().NAME} fanout={fanout} trie_cmp={ops_trie.label_comparisons} "
            f"htt_cmp={ops_htt.label_comparisons} htt_probes={ops_htt.hash_probes} {elapsed:.1f}s")


def test_7_hash_tree_discipline(verdict):
    rng = random.Random(77)
    k = 3
    universe = range(30)
    pool = list(combinations(universe, k))
    rows = [tuple(sorted(rng.sample(universe, rng.randint(0, 12)))) for _ in range(50)]
    problems = []
    for width in (3, 20):
        for leaf in (1, 5, None):
            cands = rng.sample(pool, 1000)
            store = HashTree(k, HashTreeParams(width, leaf))
            for c in cands:
                store.insert(c)
                if leaf is not None and any(n > leaf for d, n in store.leaves() if d < k):
                    problems.append((width, leaf, "leaf overflow"))
                    break
            store.count(rows)
            got = store.extract_counted()
            if sorted(e.itemset for e in got) != sorted(cands):
                problems.append((width, leaf, "lost or duplicated candidates"))
            if any(e.support != sum(1 for t in rows if is_subset(e.itemset, t)) for e in got):
                problems.append((width, leaf, "miscounted"))
    verdict(7, "hash tree discipline", not problems, str(problems) if problems else "6 configs")


def test_8_determinism(verdict, tmp_path):
    data = tmp_path / "t10k.dat"
    assert main(["generate", "--num-transactions", "10000", "--seed", "8", "-o", str(data)]) == 0
    outs = []
    for run in range(2):
        out = tmp_path / f"run{run}.txt"
        rc = main(["mine", "-i", str(data), "-s", "0.005", "--mode", "mr", "--structure", "trie",
                   "--lines-per-split", "1000", "--workers", str(os.cpu_count() or 1), "-o", str(out)])
        assert rc == 0
        outs.append(out.read_bytes())
    verdict(8, "determinism", outs[0] == outs[1] and len(outs[0]) > 0,
            f"{len(outs[0].splitlines())} itemsets, {len(outs[0])} bytes")


def test_9_iteration_reporting(verdict, tmp_path):
    # a 6-item basket repeated, plus noise: L_1..L_6 frequent, job 7 finds no candidates
    rows = [[1, 2, 3, 4, 5, 6]] * 6 + [[7, 8], [9], [1, 9], [2, 8, 10]]
    path = tmp_path / "seven.dat"
    with path.open("w") as fh:
        write_transactions(TransactionDatabase(rows), fh)
    expected = run_sequential(TransactionDatabase(rows), SupportThreshold(absolute=5))
    out = tmp_path / "bench.csv"
    assert main(["bench", "-i", str(path), "-s", "count:5", "--lines-per-split", "3", "10",
                 "--repetitions", "1", "-o", str(out)]) == 0
    table = list(csv.DictReader(out.open()))
    problems = []
    configs = {}
    for row in table:
        configs.setdefault((row["structure"], row["lines_per_split"]), []).append(row)
    for key, group in configs.items():
        iters = [r for r in group if r["iteration"] != "total"]
        total = [r for r in group if r["iteration"] == "total"]
        if len(iters) != 7 or len(total) != 1:
            problems.append((key, len(iters), len(total)))
            continue
        freq = [int(r["frequent"]) for r in iters]
        cands = [int(r["candidates"]) for r in iters]
        if freq != [len(expected.level(k)) for k in range(1, 8)]:
            problems.append((key, "frequent", freq))
        if cands != list(expected.candidates_per_iteration):
            problems.append((key, "candidates", cands))
    ok = expected.iterations == 7 and len(configs) == 6 and not problems
    verdict(9, "iteration reporting", ok,
            f"{len(configs)} configs, iterations={expected.iterations}" + (f" {problems}" if problems else ""))
