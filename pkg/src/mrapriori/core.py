"""Domain types and elementary itemset operations.

Itemsets are plain tuples of non-negative ints kept strictly increasing, so
numeric order on item ids doubles as the lexicographic order used by the
candidate join.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

Itemset = tuple  # tuple[int, ...], strictly increasing


class MiningError(Exception):
    """Base class for errors raised by this package."""


class InvalidThresholdError(MiningError, ValueError):
    pass


class ConfigurationError(MiningError, ValueError):
    pass


def normalize(raw_items: Iterable[int]) -> Itemset:
    """Sort and dedup ``raw_items``; the empty input gives the empty itemset."""
    return tuple(sorted(set(raw_items)))


def is_valid_itemset(items: Sequence[int]) -> bool:
    prev = -1
    for x in items:
        if not isinstance(x, int) or x <= prev:
            return False
        prev = x
    return True


def is_subset(candidate: Sequence[int], transaction: Sequence[int]) -> bool:
    """Merge-scan containment test over two sorted itemsets."""
    k = len(candidate)
    n = len(transaction)
    if k > n:
        return False
    i = j = 0
    while i < k and j < n:
        c = candidate[i]
        t = transaction[j]
        if c == t:
            i += 1
            j += 1
        elif c > t:
            j += 1
        else:
            return False
    return i == k


@dataclass(frozen=True)
class Transaction:
    items: Itemset
    ordinal: int


class TransactionDatabase:
    """Ordered, immutable list of normalized transactions."""

    __slots__ = ("_rows", "max_item_id")

    def __init__(self, rows: Iterable[Iterable[int]] = ()):
        normed = []
        max_item = -1
        for row in rows:
            items = normalize(row)
            for x in items:
                if not isinstance(x, int) or x < 0:
                    raise ValueError(f"item ids must be non-negative ints, got {x!r}")
            if items and items[-1] > max_item:
                max_item = items[-1]
            normed.append(items)
        self._rows: tuple = tuple(normed)
        self.max_item_id: int = max_item

    @property
    def rows(self) -> tuple:
        """The transactions as a tuple of itemsets."""
        return self._rows

    @property
    def transactions(self) -> list[Transaction]:
        return [Transaction(items, i) for i, items in enumerate(self._rows)]

    @property
    def num_transactions(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def __iter__(self) -> Iterator[Itemset]:
        return iter(self._rows)

    def __getitem__(self, index):
        return self._rows[index]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransactionDatabase):
            return NotImplemented
        return self._rows == other._rows

    def __repr__(self) -> str:
        return f"TransactionDatabase(n={len(self._rows)}, max_item_id={self.max_item_id})"

    @property
    def max_transaction_len(self) -> int:
        return max((len(r) for r in self._rows), default=0)


@dataclass(frozen=True)
class SupportThreshold:
    """Minimum support, either as a fraction of |D| or as an absolute count."""

    relative: Fraction | None = None
    absolute: int | None = None

    def __post_init__(self):
        if (self.relative is None) == (self.absolute is None):
            raise InvalidThresholdError("exactly one of relative/absolute must be set")
        if self.relative is not None:
            # Fraction(str) keeps decimal literals like 0.003 exact
            rel = self.relative
            if isinstance(rel, float):
                rel = Fraction(repr(rel))
            else:
                rel = Fraction(rel)
            if rel < 0 or rel > 1:
                raise InvalidThresholdError(f"relative support must be in [0, 1], got {self.relative}")
            object.__setattr__(self, "relative", rel)
        else:
            if isinstance(self.absolute, bool) or not isinstance(self.absolute, int) or self.absolute < 1:
                raise InvalidThresholdError(f"absolute support must be a positive count, got {self.absolute!r}")

    @classmethod
    def parse(cls, text: str) -> "SupportThreshold":
        """Parse ``"0.02"`` or ``"count:5"``."""
        text = text.strip()
        if text.startswith("count:"):
            try:
                return cls(absolute=int(text[6:]))
            except ValueError:
                raise InvalidThresholdError(f"bad absolute support: {text!r}") from None
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InvalidThresholdError(f"bad support value: {text!r}") from None
        return cls(relative=value)

    def __str__(self) -> str:
        if self.absolute is not None:
            return f"count:{self.absolute}"
        return _fraction_text(self.relative)


def _fraction_text(value: Fraction) -> str:
    # shortest decimal that round-trips through float, e.g. 3/1000 -> "0.003"
    return repr(float(value))


def resolve_threshold(threshold: SupportThreshold, num_transactions: int | TransactionDatabase) -> int:
    """Bind ``threshold`` to a database size: ceil(relative * |D|), at least 1."""
    n = len(num_transactions) if isinstance(num_transactions, TransactionDatabase) else num_transactions
    if threshold.absolute is not None:
        return threshold.absolute
    return max(1, math.ceil(threshold.relative * n))


@dataclass(frozen=True, order=True)
class CountedItemset:
    itemset: Itemset
    support: int


@dataclass(frozen=True)
class FrequentLevel:
    """Frequent k-itemsets with their support counts, sorted by itemset."""

    k: int
    entries: tuple = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("level k must be positive")
        entries = tuple(sorted(
            e if isinstance(e, CountedItemset) else CountedItemset(tuple(e[0]), int(e[1]))
            for e in self.entries
        ))
        index = {}
        for e in entries:
            if len(e.itemset) != self.k:
                raise ValueError(f"itemset {e.itemset} does not have length {self.k}")
            if e.itemset in index:
                raise ValueError(f"duplicate itemset {e.itemset}")
            index[e.itemset] = e.support
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_counts(cls, k: int, counts: dict) -> "FrequentLevel":
        return cls(k, tuple(CountedItemset(tuple(s), c) for s, c in counts.items()))

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, itemset) -> bool:
        return tuple(itemset) in self._index

    def support(self, itemset) -> int:
        return self._index[tuple(itemset)]

    @property
    def itemsets(self) -> list:
        return [e.itemset for e in self.entries]

    def as_dict(self) -> dict:
        return dict(self._index)
