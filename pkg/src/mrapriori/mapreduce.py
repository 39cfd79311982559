"""Local MapReduce executor running the Apriori jobs.

Job 1 counts single items; job 2 is resubmitted once per level.  Each job
splits the database into fixed-size line chunks, runs one mapper per chunk on
a thread pool (the compiled kernels release the GIL while counting), applies
a combiner to every mapper's output, routes pairs to reducers through a
stable hash partitioner and reduces after every mapper has finished.
"""
from __future__ import annotations

import logging
import os
import tempfile
import time
import zlib
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import NamedTuple

from .apriori import MiningResult
from .candidate_store import (
    DEFAULT_PARAMS,
    CandidateStore,
    HashTreeParams,
    StoreKind,
    generate_candidates,
)
from .core import (
    ConfigurationError,
    CountedItemset,
    FrequentLevel,
    MiningError,
    SupportThreshold,
    TransactionDatabase,
    resolve_threshold,
)

log = logging.getLogger(__name__)

EMIT_AGGREGATED = "aggregated"
EMIT_PER_OCCURRENCE = "per_occurrence"


class KeyValuePair(NamedTuple):
    key: tuple
    value: int


class JobFailedError(MiningError):
    def __init__(self, split_id, cause):
        self.split_id = split_id
        self.cause = cause
        where = "reduce phase" if split_id is None else f"split {split_id}"
        super().__init__(f"job failed in {where}: {cause!r}")


@dataclass(frozen=True)
class InputSplit:
    split_id: int
    transactions: tuple
    first_ordinal: int = 0

    def __len__(self) -> int:
        return len(self.transactions)


@dataclass(frozen=True)
class JobConfig:
    lines_per_split: int = 5000
    num_reducers: int = 4
    store_kind: StoreKind = StoreKind.TRIE
    store_params: HashTreeParams = DEFAULT_PARAMS
    worker_limit: int = field(default_factory=lambda: os.cpu_count() or 1)
    emit: str = EMIT_AGGREGATED
    # generate C_k once and hand read-only clones to mappers
    share_candidates: bool = False
    # round-trip L_{k-1} through a frequent-level file before mapping;
    # "" asks run_driver for a temporary directory
    cache_dir: str | None = None

    def __post_init__(self):
        for name in ("lines_per_split", "num_reducers", "worker_limit"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigurationError(f"{name} must be a positive int, got {value!r}")
        if self.emit not in (EMIT_AGGREGATED, EMIT_PER_OCCURRENCE):
            raise ConfigurationError(f"unknown emit mode {self.emit!r}")
        if isinstance(self.store_kind, str):
            object.__setattr__(self, "store_kind", StoreKind.parse(self.store_kind))


@dataclass
class JobReport:
    iteration: int
    num_mappers: int
    num_reducers: int
    mapper_output_pairs: int
    combiner_output_pairs: int
    candidates_generated: int
    frequent_found: int
    wall_time: float  # seconds


def split_input(db, lines_per_split: int) -> list[InputSplit]:
    if lines_per_split < 1:
        raise ConfigurationError("lines_per_split must be >= 1")
    rows = db.rows if isinstance(db, TransactionDatabase) else tuple(db)
    return [
        InputSplit(i, tuple(rows[start:start + lines_per_split]), start)
        for i, start in enumerate(range(0, len(rows), lines_per_split))
    ]


def one_itemset_mapper(split: InputSplit) -> list[KeyValuePair]:
    return [KeyValuePair((item,), 1) for t in split.transactions for item in t]


def k_itemset_mapper(split: InputSplit, prior: FrequentLevel, kind: StoreKind = StoreKind.TRIE,
                     params: HashTreeParams = DEFAULT_PARAMS, emit: str = EMIT_AGGREGATED,
                     store: CandidateStore | None = None) -> list[KeyValuePair]:
    """Count C_{k} (built from ``prior`` unless ``store`` is given) over one split.

    The default emission pre-aggregates: one (candidate, local count) pair per
    candidate seen in the split.  ``emit="per_occurrence"`` writes (c, 1) for
    every containment instead.
    """
    if store is None:
        store = generate_candidates(prior, kind, params)
    if not len(store):
        return []
    if emit == EMIT_PER_OCCURRENCE:
        return [KeyValuePair(c, 1) for t in split.transactions for c in store.subset(t)]
    store.count(split.transactions)
    return [KeyValuePair(e.itemset, e.support) for e in store.extract_counted() if e.support]


def combine(pairs) -> list[KeyValuePair]:
    sums = defaultdict(int)
    for key, value in pairs:
        sums[tuple(key)] += value
    return [KeyValuePair(k, sums[k]) for k in sorted(sums)]


def partition(key, num_reducers: int) -> int:
    if num_reducers == 1:
        return 0
    return zlib.crc32(" ".join(map(str, key)).encode("ascii")) % num_reducers


def reduce(key, values, min_count: int) -> CountedItemset | None:
    total = sum(values)
    if total >= min_count:
        return CountedItemset(tuple(key), total)
    return None


@dataclass
class _MapOutput:
    split_id: int
    emitted: int
    pairs: list
    candidates: int


def _map_task(split, k, prior, config, store):
    if k == 1:
        raw = one_itemset_mapper(split)
        n_cands = -1
    else:
        if config.cache_dir is not None:
            prior = _read_cached_level(config.cache_dir, k - 1)
        if store is None:
            store = generate_candidates(prior, config.store_kind, config.store_params)
        n_cands = len(store)
        raw = k_itemset_mapper(split, prior, config.store_kind, config.store_params,
                               config.emit, store=store)
    return _MapOutput(split.split_id, len(raw), combine(raw), n_cands)


def _cache_path(cache_dir, k) -> Path:
    return Path(cache_dir) / f"L{k}.txt"


def _write_cached_level(cache_dir, level: FrequentLevel, db_size: int):
    from .dataio import write_levels

    path = _cache_path(cache_dir, level.k)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        write_levels([level], db_size, fh)


def _read_cached_level(cache_dir, k) -> FrequentLevel:
    from .dataio import read_frequent

    with open(_cache_path(cache_dir, k), encoding="ascii") as fh:
        levels = read_frequent(fh)
    return levels.get(k, FrequentLevel(k))


def _run_map(pool, splits, k, prior, config):
    stores = [None] * len(splits)
    if k > 1 and config.share_candidates:
        shared = generate_candidates(prior, config.store_kind, config.store_params)
        stores = [shared.clone_empty() for _ in splits]
    futures = [pool.submit(_map_task, s, k, prior, config, st) for s, st in zip(splits, stores)]
    outputs = []
    # barrier: every mapper finishes (or fails) before any pair is shuffled
    for split, fut in zip(splits, futures):
        try:
            outputs.append(fut.result())
        except Exception as exc:
            for other in futures:
                other.cancel()
            raise JobFailedError(split.split_id, exc) from exc
    return outputs


def _reduce_partition(groups: dict, min_count: int) -> list:
    out = []
    for key in sorted(groups):
        hit = reduce(key, groups[key], min_count)
        if hit is not None:
            out.append(hit)
    return out


def run_job(db, prior: FrequentLevel | None, k: int, config: JobConfig, min_count: int,
            splits: list | None = None) -> tuple[FrequentLevel, JobReport]:
    """One map -> combine -> shuffle -> reduce pass producing L_k."""
    if k == 1 and prior is not None:
        raise ConfigurationError("job 1 takes no prior level")
    if k >= 2 and (prior is None or prior.k != k - 1):
        raise ConfigurationError(f"job for k={k} needs the level-{k - 1} result")
    started = time.perf_counter()
    if splits is None:
        splits = split_input(db, config.lines_per_split)
    if k >= 2 and not prior:
        report = JobReport(k, len(splits), config.num_reducers, 0, 0, 0, 0,
                           time.perf_counter() - started)
        return FrequentLevel(k), report

    if k >= 2 and config.cache_dir is not None:
        _write_cached_level(config.cache_dir, prior, len(db))
    with ThreadPoolExecutor(max_workers=config.worker_limit) as pool:
        outputs = _run_map(pool, splits, k, prior, config)

        shuffle = [defaultdict(list) for _ in range(config.num_reducers)]
        for out in outputs:
            for key, value in out.pairs:
                shuffle[partition(key, config.num_reducers)][key].append(value)
        try:
            parts = list(pool.map(_reduce_partition, shuffle, [min_count] * len(shuffle)))
        except Exception as exc:
            raise JobFailedError(None, exc) from exc

    found = [hit for part in parts for hit in part]
    if k == 1:
        n_cands = sum(len(g) for g in shuffle)
    else:
        n_cands = outputs[0].candidates if outputs else len(
            generate_candidates(prior, config.store_kind, config.store_params))
    report = JobReport(
        iteration=k,
        num_mappers=len(splits),
        num_reducers=config.num_reducers,
        mapper_output_pairs=sum(o.emitted for o in outputs),
        combiner_output_pairs=sum(len(o.pairs) for o in outputs),
        candidates_generated=n_cands,
        frequent_found=len(found),
        wall_time=time.perf_counter() - started,
    )
    log.debug("job k=%d: %s", k, report)
    return FrequentLevel(k, tuple(found)), report


def run_driver(db: TransactionDatabase, threshold: SupportThreshold,
               config: JobConfig) -> tuple[MiningResult, list[JobReport]]:
    """Submit job 1, then job 2 for k = 2, 3, ... until a level comes back empty."""
    min_count = resolve_threshold(threshold, db)
    splits = split_input(db, config.lines_per_split)
    with tempfile.TemporaryDirectory(prefix="mrapriori-cache-") as tmp:
        if config.cache_dir == "":
            config = replace(config, cache_dir=tmp)
        level, report = run_job(db, None, 1, config, min_count, splits)
        reports = [report]
        levels = []
        while level:
            levels.append(level)
            level, report = run_job(db, level, level.k + 1, config, min_count, splits)
            reports.append(report)
    result = MiningResult(tuple(levels), threshold, min_count, len(reports),
                          tuple(r.candidates_generated for r in reports))
    return result, reports
