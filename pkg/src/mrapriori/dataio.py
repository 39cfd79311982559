"""Transaction files, frequent-itemset files and a synthetic data generator.

Transaction files use the FIMI layout: one transaction per line, items as
whitespace-separated non-negative integers.  Frequent-itemset files carry one
itemset per line::

    <space-separated items> TAB <absolute support> TAB <relative support>

with levels ascending and itemsets in lexicographic order inside a level.
The same format is used for the level cache handed to mappers.
"""
from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .core import ConfigurationError, FrequentLevel, MiningError, TransactionDatabase

INTEGER = "integer"
TOKEN = "token"


class ParseError(MiningError, ValueError):
    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


@dataclass
class TokenDictionary:
    """Bijection between string tokens and dense ids assigned from 0."""

    token_to_id: dict = field(default_factory=dict)
    id_to_token: list = field(default_factory=list)

    @property
    def next_id(self) -> int:
        return len(self.id_to_token)

    def id_for(self, token: str) -> int:
        idx = self.token_to_id.get(token)
        if idx is None:
            idx = self.token_to_id[token] = len(self.id_to_token)
            self.id_to_token.append(token)
        return idx

    def token(self, item: int) -> str:
        return self.id_to_token[item]

    def decode(self, itemset) -> list[str]:
        return [self.id_to_token[i] for i in itemset]

    def __len__(self) -> int:
        return len(self.id_to_token)


def _lines(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    elif isinstance(source, bytes):
        data = source
    else:
        data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    # splitlines() would also split on \x0b, \x1c etc.; FIMI is line-feed based
    return data.replace("\r\n", "\n").split("\n")


def read_transactions(source, mode: str = INTEGER) -> tuple[TransactionDatabase, TokenDictionary | None]:
    """Parse a transaction file; ``source`` is a path, bytes or a file object."""
    if mode not in (INTEGER, TOKEN):
        raise ConfigurationError(f"unknown read mode {mode!r}")
    tokens = TokenDictionary() if mode == TOKEN else None
    rows = []
    for line_no, line in enumerate(_lines(source), start=1):
        fields = line.split()
        if not fields:
            continue
        if tokens is not None:
            rows.append([tokens.id_for(f) for f in fields])
            continue
        row = []
        for f in fields:
            try:
                item = int(f)
            except ValueError:
                raise ParseError(f"malformed item {f!r}", line_no) from None
            if item < 0:
                raise ParseError(f"negative item id {item}", line_no)
            row.append(item)
        rows.append(row)
    return TransactionDatabase(rows), tokens


def write_transactions(db: Iterable, sink) -> None:
    for row in db:
        sink.write(" ".join(map(str, row)) + "\n")


def format_relative(support: int, db_size: int) -> str:
    """``support / db_size`` to six places, ties to even, from exact arithmetic."""
    if db_size <= 0:
        raise ValueError("db_size must be positive")
    q = round(Fraction(support, db_size) * 1_000_000)
    return f"{q // 1_000_000}.{q % 1_000_000:06d}"


def write_levels(levels: Iterable[FrequentLevel], db_size: int, sink) -> None:
    for level in sorted(levels, key=lambda lvl: lvl.k):
        for e in level.entries:
            sink.write(f"{' '.join(map(str, e.itemset))}\t{e.support}\t"
                       f"{format_relative(e.support, db_size)}\n")


def write_frequent(result, db_size: int, sink) -> None:
    """Write a MiningResult in the frequent-itemset line format."""
    write_levels(result.levels, db_size, sink)


def frequent_text(result, db_size: int) -> str:
    buf = io.StringIO()
    write_frequent(result, db_size, buf)
    return buf.getvalue()


def write_frequent_csv(result, db_size: int, sink) -> None:
    sink.write("itemset,k,support,relative_support\n")
    for level in result.levels:
        for e in level.entries:
            sink.write(f"{' '.join(map(str, e.itemset))},{level.k},{e.support},"
                       f"{format_relative(e.support, db_size)}\n")


def read_frequent(source) -> dict[int, FrequentLevel]:
    """Parse a frequent-itemset file back into levels keyed by k."""
    by_k: dict[int, list] = {}
    for line_no, line in enumerate(_lines(source), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError("expected 3 tab-separated fields", line_no)
        try:
            itemset = tuple(int(x) for x in parts[0].split())
            support = int(parts[1])
        except ValueError:
            raise ParseError("malformed itemset or support", line_no) from None
        if not itemset:
            raise ParseError("empty itemset", line_no)
        by_k.setdefault(len(itemset), []).append((itemset, support))
    return {k: FrequentLevel(k, tuple(v)) for k, v in sorted(by_k.items())}


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    num_transactions: int = 10_000
    num_items: int = 1_000
    avg_transaction_len: float = 10.0
    num_patterns: int = 100
    avg_pattern_len: float = 4.0
    pattern_prob: float = 0.5

    def __post_init__(self):
        for name in ("num_transactions", "num_items", "num_patterns"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be >= 1")
        if not 0 < self.avg_transaction_len <= self.num_items:
            raise ConfigurationError("avg_transaction_len must be in (0, num_items]")
        if self.avg_pattern_len <= 0:
            raise ConfigurationError("avg_pattern_len must be positive")
        if not 0.0 <= self.pattern_prob <= 1.0:
            raise ConfigurationError("pattern_prob must be in [0, 1]")


def generate_synthetic(config: GeneratorConfig) -> TransactionDatabase:
    """Market-basket style data: random patterns embedded in uniform noise.

    Items are ids ``0..num_items-1``.  A transaction draws its length from a
    Poisson around ``avg_transaction_len``, embeds one whole pattern with
    probability ``pattern_prob`` and is topped up with uniform items.  A
    pattern longer than the drawn length is kept whole.
    """
    rng = np.random.default_rng(config.seed)
    n_items = config.num_items
    patterns = []
    for _ in range(config.num_patterns):
        size = int(min(max(rng.poisson(config.avg_pattern_len), 1), n_items))
        patterns.append(rng.choice(n_items, size=size, replace=False).tolist())
    rows = []
    for _ in range(config.num_transactions):
        size = int(min(max(rng.poisson(config.avg_transaction_len), 1), n_items))
        items = set()
        if rng.random() < config.pattern_prob:
            items.update(patterns[int(rng.integers(config.num_patterns))])
        while len(items) < size:
            items.update(rng.integers(n_items, size=size - len(items)).tolist())
        rows.append(items)
    return TransactionDatabase(rows)
