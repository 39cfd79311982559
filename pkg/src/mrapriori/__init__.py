"""Apriori frequent-itemset mining with interchangeable candidate stores."""
from .apriori import MiningResult, brute_force_mine, frequent_one, run_sequential
from .candidate_store import (
    HashTableTrie,
    HashTree,
    HashTreeParams,
    OpCounters,
    StoreKind,
    Trie,
    generate_candidates,
    hash_item,
    new_store,
)
from .core import (
    CountedItemset,
    FrequentLevel,
    SupportThreshold,
    TransactionDatabase,
    is_subset,
    normalize,
    resolve_threshold,
)
from .mapreduce import JobConfig, JobReport, run_driver, run_job

__all__ = [
    "CountedItemset", "FrequentLevel", "HashTableTrie", "HashTree", "HashTreeParams",
    "JobConfig", "JobReport", "MiningResult", "OpCounters", "StoreKind", "SupportThreshold",
    "TransactionDatabase", "Trie", "brute_force_mine", "frequent_one", "generate_candidates",
    "hash_item", "is_subset", "new_store", "normalize", "resolve_threshold", "run_driver",
    "run_job", "run_sequential",
]
