"""Compiled kernel for the orthogonal-quintuple search."""

import numba
import numpy as np


@numba.njit(cache=True)
def find_orthogonal_quintuple(adj, cls, target):
    """Five mutually adjacent vertices whose class codes XOR to ``target``.

    Ordered depth-first clique search; candidate lists at each depth hold
    the later vertices adjacent to everything chosen so far.  The fifth
    vertex is looked up directly by the class it must have.  Returns
    ``(indices, nodes visited)``; indices is empty when nothing exists.
    """
    n = adj.shape[0]
    lists = np.empty((5, n), dtype=np.int64)
    sizes = np.zeros(5, dtype=np.int64)
    for i in range(n):
        lists[0, i] = i
    sizes[0] = n
    idx = np.zeros(5, dtype=np.int64)
    chosen = np.zeros(5, dtype=np.int64)
    acc = np.zeros(6, dtype=np.int64)
    visited = 0
    depth = 0
    while depth >= 0:
        if idx[depth] >= sizes[depth]:
            depth -= 1
            if depth >= 0:
                idx[depth] += 1
            continue
        v = lists[depth, idx[depth]]
        chosen[depth] = v
        acc[depth + 1] = acc[depth] ^ cls[v]
        visited += 1
        if depth == 3:
            need = acc[4] ^ target
            for p in range(idx[depth] + 1, sizes[depth]):
                w = lists[depth, p]
                if adj[v, w] and cls[w] == need:
                    out = np.empty(5, dtype=np.int64)
                    out[:4] = chosen[:4]
                    out[4] = w
                    return out, visited
            idx[depth] += 1
            continue
        m = 0
        for p in range(idx[depth] + 1, sizes[depth]):
            w = lists[depth, p]
            if adj[v, w]:
                lists[depth + 1, m] = w
                m += 1
        sizes[depth + 1] = m
        depth += 1
        idx[depth] = 0
    return np.empty(0, dtype=np.int64), visited
