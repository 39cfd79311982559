"""Candidate containers: hash tree, trie and hash-table trie.

All three share one lifecycle.  Candidates are inserted into a pointer-based
node structure; the first counting call freezes that structure into flat
integer arrays which the active kernel backend (compiled or pure Python)
walks once per transaction.  Inserting again after counting thaws the store
and keeps the counters gathered so far.
"""
from __future__ import annotations

import copy
import enum
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import kernels
from .core import (
    ConfigurationError,
    CountedItemset,
    FrequentLevel,
    MiningError,
    Transaction,
    is_valid_itemset,
)


class StoreKind(enum.Enum):
    HASH_TREE = "hashtree"
    TRIE = "trie"
    HASH_TABLE_TRIE = "hashtabletrie"

    @classmethod
    def parse(cls, text: str) -> "StoreKind":
        try:
            return cls(text.lower().replace("_", "").replace("-", ""))
        except ValueError:
            raise ConfigurationError(
                f"unknown structure {text!r}; choose from {[k.value for k in cls]}"
            ) from None


@dataclass(frozen=True)
class HashTreeParams:
    """Hash-tree geometry.

    ``leaf_max_size=None`` reproduces the fixed-depth tree used when the leaf
    threshold is ignored: every candidate is hashed on all of its items and
    leaves only appear at depth k.
    """

    child_max_size: int = 20
    leaf_max_size: int | None = None

    def __post_init__(self):
        if isinstance(self.child_max_size, bool) or not isinstance(self.child_max_size, int) \
                or self.child_max_size < 2:
            raise ConfigurationError(f"child_max_size must be an int >= 2, got {self.child_max_size!r}")
        if self.leaf_max_size is not None and (
                not isinstance(self.leaf_max_size, int) or self.leaf_max_size < 1):
            raise ConfigurationError(f"leaf_max_size must be a positive int or None, got {self.leaf_max_size!r}")


DEFAULT_PARAMS = HashTreeParams()


@dataclass
class OpCounters:
    label_comparisons: int = 0
    hash_probes: int = 0
    nodes_visited: int = 0

    def __iadd__(self, other: "OpCounters") -> "OpCounters":
        self.label_comparisons += other.label_comparisons
        self.hash_probes += other.hash_probes
        self.nodes_visited += other.nodes_visited
        return self


class LengthMismatchError(MiningError, ValueError):
    pass


class DuplicateCandidateError(MiningError, ValueError):
    pass


def hash_item(item: int, child_max_size: int) -> int:
    return item % child_max_size


def _as_rows(transactions) -> list:
    rows = []
    for t in transactions:
        rows.append(t.items if isinstance(t, Transaction) else t)
    return rows


def _csr(rows, backend):
    ptr = [0]
    flat = []
    for r in rows:
        flat.extend(r)
        ptr.append(len(flat))
    return backend.new_array(ptr), backend.new_array(flat)


class CandidateStore:
    """Container of candidate k-itemsets with one support counter each."""

    kind: StoreKind

    def __init__(self, k: int):
        if k < 1:
            raise ConfigurationError(f"store length k must be >= 1, got {k}")
        self.k = k
        self._cands: list = []
        self._counts = []
        self._layout = None
        self._backend = None
        self._sealed = False

    # building -------------------------------------------------------------

    def insert(self, candidate) -> None:
        if self._sealed:
            raise MiningError("store is a read-only clone; insert into the original")
        c = tuple(candidate)
        if len(c) != self.k:
            raise LengthMismatchError(f"candidate {c} has length {len(c)}, store holds {self.k}-itemsets")
        if not is_valid_itemset(c) or c[0] < 0:
            raise ValueError(f"candidate {c} is not a strictly increasing itemset of non-negative ids")
        if self._find(c) is not None:
            raise DuplicateCandidateError(f"candidate {c} already present")
        self._append(c)

    def _append(self, c):
        # caller guarantees c is a new, valid k-itemset
        if self._layout is not None:
            self._counts = list(self._counts)
            self._layout = None
        idx = len(self._cands)
        self._cands.append(c)
        self._counts.append(0)
        self._place(c, idx)

    def _place(self, c, idx):
        raise NotImplementedError

    def _find(self, c):
        raise NotImplementedError

    def __contains__(self, candidate) -> bool:
        c = tuple(candidate)
        return len(c) == self.k and self._find(c) is not None

    def __len__(self) -> int:
        return len(self._cands)

    @property
    def candidate_count(self) -> int:
        return len(self._cands)

    def __iter__(self) -> Iterator[tuple]:
        return iter(sorted(self._cands))

    # counting -------------------------------------------------------------

    def _freeze(self):
        backend = kernels.active()
        if self._layout is None or self._backend is not backend:
            self._layout = self._build_layout(backend)
            self._backend = backend
            self._counts = backend.new_array(list(self._counts))
        return backend

    def _build_layout(self, backend):
        raise NotImplementedError

    def _run(self, backend, t_ptr, t_items, counts, ops):
        raise NotImplementedError

    def count(self, transactions: Iterable) -> OpCounters:
        """Add one to every candidate contained in each transaction."""
        backend = self._freeze()
        t_ptr, t_items = _csr(_as_rows(transactions), backend)
        ops = backend.new_array([0, 0, 0])
        self._run(backend, t_ptr, t_items, self._counts, ops)
        return OpCounters(int(ops[0]), int(ops[1]), int(ops[2]))

    def increment_subsets(self, transaction) -> OpCounters:
        return self.count([transaction])

    def subset(self, transaction) -> list:
        """Candidates contained in ``transaction``; counters are left untouched."""
        backend = self._freeze()
        t_ptr, t_items = _csr(_as_rows([transaction]), backend)
        scratch = backend.new_array([0] * len(self._cands))
        self._run(backend, t_ptr, t_items, scratch, backend.new_array([0, 0, 0]))
        return sorted(self._cands[i] for i in range(len(self._cands)) if scratch[i])

    def extract_counted(self) -> list[CountedItemset]:
        counts = self._counts
        return sorted(CountedItemset(c, int(counts[i])) for i, c in enumerate(self._cands))

    def clone_empty(self) -> "CandidateStore":
        """Read-only copy sharing the frozen structure, with zeroed counters."""
        backend = self._freeze()
        twin = copy.copy(self)
        twin._counts = backend.new_array([0] * len(self._cands))
        twin._sealed = True
        return twin

    # candidate generation -------------------------------------------------

    def join(self) -> Iterator[tuple]:
        """Pairs sharing their first k-1 items, merged into (k+1)-itemsets."""
        return join_sorted(sorted(self._cands))


def join_sorted(itemsets: list) -> Iterator[tuple]:
    """Join step over a lexicographically sorted list of equal-length itemsets."""
    n = len(itemsets)
    start = 0
    while start < n:
        prefix = itemsets[start][:-1]
        end = start + 1
        while end < n and itemsets[end][:-1] == prefix:
            end += 1
        for a in range(start, end):
            left = itemsets[a]
            for b in range(a + 1, end):
                yield left + (itemsets[b][-1],)
        start = end


# tries ------------------------------------------------------------------


class _ListNode:
    __slots__ = ("labels", "children", "cand")

    def __init__(self):
        self.labels = []
        self.children = []
        self.cand = -1

    def child(self, item):
        i = bisect_left(self.labels, item)
        if i < len(self.labels) and self.labels[i] == item:
            return self.children[i]
        return None

    def add_child(self, item):
        i = bisect_left(self.labels, item)
        node = _ListNode()
        self.labels.insert(i, item)
        self.children.insert(i, node)
        return node

    def items(self):
        return zip(self.labels, self.children)


class _TableNode:
    """Trie node with a direct-addressed child table: slot = item - base."""

    __slots__ = ("base", "table", "cand")

    def __init__(self):
        self.base = 0
        self.table = []
        self.cand = -1

    def child(self, item):
        slot = item - self.base
        if 0 <= slot < len(self.table):
            return self.table[slot]
        return None

    def add_child(self, item):
        node = _TableNode()
        if not self.table:
            self.base = item
            self.table = [node]
            return node
        slot = item - self.base
        if slot < 0:
            self.table[:0] = [None] * -slot
            self.base = item
            slot = 0
        elif slot >= len(self.table):
            self.table.extend([None] * (slot - len(self.table) + 1))
        self.table[slot] = node
        return node

    def items(self):
        base = self.base
        for slot, node in enumerate(self.table):
            if node is not None:
                yield base + slot, node


class _TrieBase(CandidateStore):
    _node_type = None

    def __init__(self, k: int):
        super().__init__(k)
        self._root = self._node_type()

    def _place(self, c, idx):
        node = self._root
        for item in c:
            nxt = node.child(item)
            if nxt is None:
                nxt = node.add_child(item)
            node = nxt
        node.cand = idx

    def _find(self, c):
        node = self._root
        for item in c:
            node = node.child(item)
            if node is None:
                return None
        return node.cand if node.cand >= 0 else None

    def _bfs(self):
        order = [self._root]
        labels = [-1]
        i = 0
        while i < len(order):
            for item, child in order[i].items():
                order.append(child)
                labels.append(item)
            i += 1
        return order, labels

    def node_count(self) -> int:
        """Nodes including the root; equals 1 + number of distinct candidate prefixes."""
        return len(self._bfs()[0])

    def join(self) -> Iterator[tuple]:
        # ordered sibling pairs under every node at depth k-1
        k = self.k

        def walk(node, prefix):
            if len(prefix) == k - 1:
                kids = [item for item, child in node.items() if child.cand >= 0]
                for a in range(len(kids)):
                    for b in range(a + 1, len(kids)):
                        yield prefix + (kids[a], kids[b])
                return
            for item, child in node.items():
                yield from walk(child, prefix + (item,))

        return walk(self._root, ())


class Trie(_TrieBase):
    kind = StoreKind.TRIE
    _node_type = _ListNode

    def _build_layout(self, backend):
        order, labels = self._bfs()
        ids = {id(n): i for i, n in enumerate(order)}
        cstart, cend, term = [], [], []
        for node in order:
            if node.children:
                cstart.append(ids[id(node.children[0])])
                cend.append(ids[id(node.children[-1])] + 1)
            else:
                cstart.append(0)
                cend.append(0)
            term.append(node.cand)
        a = backend.new_array
        return a(cstart), a(cend), a(labels), a(term)

    def _run(self, backend, t_ptr, t_items, counts, ops):
        cstart, cend, label, term = self._layout
        backend.count_trie_list(cstart, cend, label, term, self.k, t_ptr, t_items, counts, ops)


class HashTableTrie(_TrieBase):
    kind = StoreKind.HASH_TABLE_TRIE
    _node_type = _TableNode

    def _build_layout(self, backend):
        order, _ = self._bfs()
        ids = {id(n): i for i, n in enumerate(order)}
        base, tsize, toff, table, term = [], [], [], [], []
        for node in order:
            base.append(node.base)
            tsize.append(len(node.table))
            toff.append(len(table))
            table.extend(-1 if ch is None else ids[id(ch)] for ch in node.table)
            term.append(node.cand)
        a = backend.new_array
        return a(base), a(tsize), a(toff), a(table), a(term)

    def _run(self, backend, t_ptr, t_items, counts, ops):
        base, tsize, toff, table, term = self._layout
        backend.count_trie_hash(base, tsize, toff, table, term, self.k, t_ptr, t_items, counts, ops)


# hash tree ---------------------------------------------------------------


class _Inner:
    __slots__ = ("slots",)

    def __init__(self, width):
        self.slots = [None] * width


class _Leaf:
    __slots__ = ("cands",)

    def __init__(self):
        self.cands = []


class HashTree(CandidateStore):
    kind = StoreKind.HASH_TREE

    def __init__(self, k: int, params: HashTreeParams = DEFAULT_PARAMS):
        super().__init__(k)
        self.params = params
        self.width = params.child_max_size
        self.leaf_max_size = params.leaf_max_size
        self._root = _Inner(self.width)

    def _place(self, c, idx):
        self._place_from(self._root, 0, idx)

    def _place_from(self, node, depth, idx):
        c = self._cands[idx]
        k = self.k
        width = self.width
        while True:
            s = c[depth] % width
            child = node.slots[s]
            if child is None:
                if self.leaf_max_size is None and depth + 1 < k:
                    child = node.slots[s] = _Inner(width)
                else:
                    child = node.slots[s] = _Leaf()
            if isinstance(child, _Inner):
                node = child
                depth += 1
                continue
            child.cands.append(idx)
            if (self.leaf_max_size is not None and depth + 1 < k
                    and len(child.cands) > self.leaf_max_size):
                # overflowing leaf becomes an inner node one level down
                inner = node.slots[s] = _Inner(width)
                for other in child.cands:
                    self._place_from(inner, depth + 1, other)
            return

    def _find(self, c):
        node = self._root
        depth = 0
        while isinstance(node, _Inner):
            node = node.slots[c[depth] % self.width]
            depth += 1
        if node is None:
            return None
        for idx in node.cands:
            if self._cands[idx] == c:
                return idx
        return None

    def leaves(self) -> Iterator[tuple]:
        """Yield ``(depth, candidate_count)`` for every leaf."""
        stack = [(self._root, 0)]
        while stack:
            node, depth = stack.pop()
            if isinstance(node, _Leaf):
                yield depth, len(node.cands)
            else:
                stack.extend((ch, depth + 1) for ch in node.slots if ch is not None)

    def _build_layout(self, backend):
        order = [self._root]
        i = 0
        while i < len(order):
            node = order[i]
            if isinstance(node, _Inner):
                order.extend(ch for ch in node.slots if ch is not None)
            i += 1
        ids = {id(n): i for i, n in enumerate(order)}
        is_leaf, toff, table, lstart, lend, lcands = [], [], [], [], [], []
        for node in order:
            if isinstance(node, _Leaf):
                is_leaf.append(1)
                toff.append(0)
                lstart.append(len(lcands))
                lcands.extend(node.cands)
                lend.append(len(lcands))
            else:
                is_leaf.append(0)
                toff.append(len(table))
                table.extend(-1 if ch is None else ids[id(ch)] for ch in node.slots)
                lstart.append(0)
                lend.append(0)
        citems = [x for c in self._cands for x in c]
        a = backend.new_array
        return a(is_leaf), a(toff), a(table), a(lstart), a(lend), a(lcands), a(citems)

    def _run(self, backend, t_ptr, t_items, counts, ops):
        is_leaf, toff, table, lstart, lend, lcands, citems = self._layout
        backend.count_hash_tree(is_leaf, toff, table, self.width, lstart, lend, lcands, citems,
                                self.k, t_ptr, t_items, counts, ops)


_KINDS = {
    StoreKind.HASH_TREE: HashTree,
    StoreKind.TRIE: Trie,
    StoreKind.HASH_TABLE_TRIE: HashTableTrie,
}


def new_store(kind: StoreKind, k: int, params: HashTreeParams | None = None) -> CandidateStore:
    kind = StoreKind.parse(kind) if isinstance(kind, str) else kind
    if kind is StoreKind.HASH_TREE:
        return HashTree(k, params or DEFAULT_PARAMS)
    return _KINDS[kind](k)


def generate_candidates(frequent: FrequentLevel, kind: StoreKind = StoreKind.TRIE,
                        params: HashTreeParams | None = None) -> CandidateStore:
    """Join and prune ``frequent`` (level k) into a store of (k+1)-candidates."""
    k = frequent.k
    out = new_store(kind, k + 1, params)
    if not frequent:
        return out
    prior = new_store(kind, k, params)
    for itemset in frequent.itemsets:
        prior.insert(itemset)
    for cand in prior.join():
        # dropping either of the last two items gives a joined parent, known frequent
        if all(cand[:i] + cand[i + 1:] in prior for i in range(k - 1)):
            out._append(cand)
    return out
