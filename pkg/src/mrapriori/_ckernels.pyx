# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled support-counting kernels; see _pykernels for the contract."""
from array import array

NAME = "compiled"

ctypedef long long i64


def new_array(values):
    return array("q", values)


cdef struct Ops:
    i64 cmp
    i64 probes
    i64 visits


cdef void _trie_list(const i64[::1] cstart, const i64[::1] cend, const i64[::1] label,
                     const i64[::1] term, i64[::1] counts, const i64[::1] t,
                     Py_ssize_t lo, Py_ssize_t n, Py_ssize_t k,
                     Py_ssize_t v, Py_ssize_t depth, Py_ssize_t p, Ops* ops) noexcept nogil:
    cdef Py_ssize_t last, ci, ce, i
    cdef i64 item, lab
    ops.visits += 1
    if depth == k:
        counts[term[v]] += 1
        return
    last = n - (k - depth)
    ci = cstart[v]
    ce = cend[v]
    i = p
    while i <= last and ci < ce:
        item = t[lo + i]
        lab = label[ci]
        ops.cmp += 1
        if lab < item:
            ci += 1
        elif lab > item:
            i += 1
        else:
            _trie_list(cstart, cend, label, term, counts, t, lo, n, k, ci, depth + 1, i + 1, ops)
            ci += 1
            i += 1


def count_trie_list(const i64[::1] cstart, const i64[::1] cend, const i64[::1] label,
                    const i64[::1] term, Py_ssize_t k, const i64[::1] t_ptr,
                    const i64[::1] t_items, i64[::1] counts, i64[::1] ops):
    cdef Ops acc
    cdef Py_ssize_t j, lo, n
    acc.cmp = 0
    acc.probes = 0
    acc.visits = 0
    with nogil:
        for j in range(t_ptr.shape[0] - 1):
            lo = t_ptr[j]
            n = t_ptr[j + 1] - lo
            if n >= k:
                _trie_list(cstart, cend, label, term, counts, t_items, lo, n, k, 0, 0, 0, &acc)
    ops[0] += acc.cmp
    ops[1] += acc.probes
    ops[2] += acc.visits


cdef void _trie_hash(const i64[::1] base, const i64[::1] tsize, const i64[::1] toff,
                     const i64[::1] table, const i64[::1] term, i64[::1] counts,
                     const i64[::1] t, Py_ssize_t lo, Py_ssize_t n, Py_ssize_t k,
                     Py_ssize_t v, Py_ssize_t depth, Py_ssize_t p, Ops* ops) noexcept nogil:
    cdef Py_ssize_t i
    cdef i64 b, size, off, slot, child
    ops.visits += 1
    if depth == k:
        counts[term[v]] += 1
        return
    b = base[v]
    size = tsize[v]
    off = toff[v]
    for i in range(p, n - (k - depth) + 1):
        slot = t[lo + i] - b
        if slot < 0:
            continue
        if slot >= size:
            break
        ops.probes += 1
        child = table[off + slot]
        if child >= 0:
            _trie_hash(base, tsize, toff, table, term, counts, t, lo, n, k, child, depth + 1, i + 1, ops)


def count_trie_hash(const i64[::1] base, const i64[::1] tsize, const i64[::1] toff,
                    const i64[::1] table, const i64[::1] term, Py_ssize_t k,
                    const i64[::1] t_ptr, const i64[::1] t_items, i64[::1] counts, i64[::1] ops):
    cdef Ops acc
    cdef Py_ssize_t j, lo, n
    acc.cmp = 0
    acc.probes = 0
    acc.visits = 0
    with nogil:
        for j in range(t_ptr.shape[0] - 1):
            lo = t_ptr[j]
            n = t_ptr[j + 1] - lo
            if n >= k:
                _trie_hash(base, tsize, toff, table, term, counts, t_items, lo, n, k, 0, 0, 0, &acc)
    ops[0] += acc.cmp
    ops[1] += acc.probes
    ops[2] += acc.visits


cdef struct HashTreeView:
    const i64* is_leaf
    const i64* toff
    const i64* table
    i64 width
    const i64* lstart
    const i64* lend
    const i64* lcands
    const i64* citems
    i64* counts
    i64* stamp
    const i64* t
    Py_ssize_t n
    Py_ssize_t k
    Py_ssize_t j


cdef void _hash_tree(HashTreeView* h, Py_ssize_t v, Py_ssize_t depth, Py_ssize_t p,
                     Ops* ops) noexcept nogil:
    cdef Py_ssize_t i, pos, a, b, k = h.k, n = h.n
    cdef i64 c, cbase, ci, ti, off, child
    if h.is_leaf[v]:
        if h.stamp[v] == h.j:
            return
        h.stamp[v] = h.j
        ops.visits += 1
        for pos in range(h.lstart[v], h.lend[v]):
            c = h.lcands[pos]
            cbase = c * k
            a = 0
            b = 0
            while a < k and b < n:
                ops.cmp += 1
                ci = h.citems[cbase + a]
                ti = h.t[b]
                if ci == ti:
                    a += 1
                    b += 1
                elif ci > ti:
                    b += 1
                else:
                    break
            if a == k:
                h.counts[c] += 1
        return
    ops.visits += 1
    off = h.toff[v]
    for i in range(p, n - (k - depth) + 1):
        ops.probes += 1
        child = h.table[off + h.t[i] % h.width]
        if child >= 0:
            _hash_tree(h, child, depth + 1, i + 1, ops)


def count_hash_tree(const i64[::1] is_leaf, const i64[::1] toff, const i64[::1] table,
                    i64 width, const i64[::1] lstart, const i64[::1] lend,
                    const i64[::1] lcands, const i64[::1] citems, Py_ssize_t k,
                    const i64[::1] t_ptr, const i64[::1] t_items, i64[::1] counts, i64[::1] ops):
    cdef Ops acc
    cdef HashTreeView h
    cdef Py_ssize_t j, lo
    cdef i64[::1] stamp = array("q", [-1]) * is_leaf.shape[0]
    # zero-length views have no valid element pointer
    cdef i64 dummy = 0
    acc.cmp = 0
    acc.probes = 0
    acc.visits = 0
    h.is_leaf = &is_leaf[0]
    h.toff = &toff[0]
    h.table = &table[0] if table.shape[0] else &dummy
    h.width = width
    h.lstart = &lstart[0]
    h.lend = &lend[0]
    h.lcands = &lcands[0] if lcands.shape[0] else &dummy
    h.citems = &citems[0] if citems.shape[0] else &dummy
    h.counts = &counts[0] if counts.shape[0] else &dummy
    h.stamp = &stamp[0]
    h.k = k
    with nogil:
        for j in range(t_ptr.shape[0] - 1):
            lo = t_ptr[j]
            h.n = t_ptr[j + 1] - lo
            if h.n >= k:
                h.t = &t_items[lo] if h.n else &dummy
                h.j = j
                _hash_tree(&h, 0, 0, 0, &acc)
    ops[0] += acc.cmp
    ops[1] += acc.probes
    ops[2] += acc.visits
