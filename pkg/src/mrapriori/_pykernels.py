"""Pure-Python support-counting kernels.

Each kernel walks a flattened candidate store once per transaction and bumps
``counts[c]`` for every contained candidate ``c``.  Transactions arrive in CSR
form (``t_ptr``/``t_items``).  ``ops`` receives
``[label_comparisons, hash_probes, nodes_visited]`` and is accumulated into,
never reset.  ``_ckernels.pyx`` mirrors these functions one for one; both must
produce identical counts and identical ops.
"""

NAME = "python"


def new_array(values):
    return list(values)


def count_trie_list(cstart, cend, label, term, k, t_ptr, t_items, counts, ops):
    cmp = probes = visits = 0

    def visit(v, depth, p, t, n):
        nonlocal cmp, visits
        visits += 1
        if depth == k:
            counts[term[v]] += 1
            return
        last = n - (k - depth)
        ci = cstart[v]
        ce = cend[v]
        i = p
        # merge the sorted child labels against the sorted transaction suffix
        while i <= last and ci < ce:
            item = t[i]
            lab = label[ci]
            cmp += 1
            if lab < item:
                ci += 1
            elif lab > item:
                i += 1
            else:
                visit(ci, depth + 1, i + 1, t, n)
                ci += 1
                i += 1

    for j in range(len(t_ptr) - 1):
        t = t_items[t_ptr[j]:t_ptr[j + 1]]
        if len(t) >= k:
            visit(0, 0, 0, t, len(t))
    ops[0] += cmp
    ops[1] += probes
    ops[2] += visits


def count_trie_hash(base, tsize, toff, table, term, k, t_ptr, t_items, counts, ops):
    probes = visits = 0

    def visit(v, depth, p, t, n):
        nonlocal probes, visits
        visits += 1
        if depth == k:
            counts[term[v]] += 1
            return
        b = base[v]
        size = tsize[v]
        off = toff[v]
        for i in range(p, n - (k - depth) + 1):
            slot = t[i] - b
            if slot < 0:
                continue
            if slot >= size:
                break
            probes += 1
            child = table[off + slot]
            if child >= 0:
                visit(child, depth + 1, i + 1, t, n)

    for j in range(len(t_ptr) - 1):
        t = t_items[t_ptr[j]:t_ptr[j + 1]]
        if len(t) >= k:
            visit(0, 0, 0, t, len(t))
    ops[1] += probes
    ops[2] += visits


def count_hash_tree(is_leaf, toff, table, width, lstart, lend, lcands, citems, k,
                    t_ptr, t_items, counts, ops):
    cmp = probes = visits = 0
    # stamp[v] == j marks leaf v as already scanned for transaction j
    stamp = [-1] * len(is_leaf)

    def visit(v, depth, p, t, n, j):
        nonlocal cmp, probes, visits
        if is_leaf[v]:
            if stamp[v] == j:
                return
            stamp[v] = j
            visits += 1
            for pos in range(lstart[v], lend[v]):
                c = lcands[pos]
                base = c * k
                a = 0
                b = 0
                while a < k and b < n:
                    cmp += 1
                    ci = citems[base + a]
                    ti = t[b]
                    if ci == ti:
                        a += 1
                        b += 1
                    elif ci > ti:
                        b += 1
                    else:
                        break
                if a == k:
                    counts[c] += 1
            return
        visits += 1
        off = toff[v]
        for i in range(p, n - (k - depth) + 1):
            probes += 1
            child = table[off + t[i] % width]
            if child >= 0:
                visit(child, depth + 1, i + 1, t, n, j)

    for j in range(len(t_ptr) - 1):
        t = t_items[t_ptr[j]:t_ptr[j + 1]]
        if len(t) >= k:
            visit(0, 0, 0, t, len(t), j)
    ops[0] += cmp
    ops[1] += probes
    ops[2] += visits
