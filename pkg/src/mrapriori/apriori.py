"""Level-wise Apriori over any candidate store, plus an exhaustive oracle."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .candidate_store import DEFAULT_PARAMS, HashTreeParams, StoreKind, generate_candidates
from .core import (
    FrequentLevel,
    MiningError,
    SupportThreshold,
    TransactionDatabase,
    resolve_threshold,
)


class InstanceTooLargeError(MiningError, ValueError):
    pass


@dataclass(frozen=True)
class MiningResult:
    """Non-empty frequent levels L_1..L_m in order.

    ``iterations`` counts every database pass, including the final one that
    found nothing, so it is always ``len(levels) + 1``.
    """

    levels: tuple
    threshold: SupportThreshold
    min_count: int
    iterations: int
    candidates_per_iteration: tuple = field(default=(), compare=False)

    def level(self, k: int) -> FrequentLevel:
        if 1 <= k <= len(self.levels):
            return self.levels[k - 1]
        return FrequentLevel(k)

    def as_dict(self) -> dict:
        out = {}
        for lvl in self.levels:
            out.update(lvl.as_dict())
        return out

    @property
    def num_frequent(self) -> int:
        return sum(len(lvl) for lvl in self.levels)


def frequent_one(db: TransactionDatabase, min_count: int) -> FrequentLevel:
    counts = Counter()
    for row in db:
        counts.update(row)
    return FrequentLevel.from_counts(1, {(i,): c for i, c in counts.items() if c >= min_count})


def run_sequential(db: TransactionDatabase, threshold: SupportThreshold,
                   kind: StoreKind = StoreKind.TRIE,
                   params: HashTreeParams = DEFAULT_PARAMS) -> MiningResult:
    min_count = resolve_threshold(threshold, db)
    rows = db.rows
    level = frequent_one(db, min_count)
    levels = []
    n_cands = [len({i for r in rows for i in r})]
    iterations = 1
    while level:
        levels.append(level)
        store = generate_candidates(level, kind, params)
        iterations += 1
        n_cands.append(len(store))
        if not len(store):
            break
        store.count(rows)
        level = FrequentLevel(level.k + 1, tuple(
            e for e in store.extract_counted() if e.support >= min_count))
    return MiningResult(tuple(levels), threshold, min_count, iterations, tuple(n_cands))


def brute_force_mine(db: TransactionDatabase, threshold: SupportThreshold) -> MiningResult:
    """Enumerate every itemset over the items present and count by full scan."""
    if db.max_item_id > 20 or len(db) > 200:
        raise InstanceTooLargeError(
            f"brute force needs max_item_id <= 20 and <= 200 transactions, got "
            f"{db.max_item_id} and {len(db)}")
    min_count = resolve_threshold(threshold, len(db))
    universe = sorted({i for row in db for i in row})
    sets = [frozenset(r) for r in db]
    levels = []
    # no early exit on an empty level: the oracle must not lean on downward closure
    for k in range(1, db.max_transaction_len + 1):
        found = {}
        for cand in combinations(universe, k):
            c = sum(1 for s in sets if s.issuperset(cand))
            if c >= min_count:
                found[cand] = c
        if found:
            levels.append(FrequentLevel.from_counts(k, found))
    return MiningResult(tuple(levels), threshold, min_count, len(levels) + 1)
