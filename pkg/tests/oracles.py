"""Slow reference implementations used as test oracles."""

from itertools import combinations

import numpy as np


def reference_classify(e1, e2, e3):
    """Role-dictionary classification, written independently of the kernel."""
    u, v = e1
    others = {x for e in (e2, e3) for x in e} - {u, v}
    if len(others) > 1:
        return None
    w = others.pop() if others else None
    alphabet = {(u, v): 0, (v, u): 1, (u, w): 2, (w, u): 3, (v, w): 4, (w, v): 5}
    return 6 * alphabet[tuple(e2)] + alphabet[tuple(e3)]


def reference_counts(edges, delta):
    """O(n^3) enumeration over ``(src, dst, t)`` triples sorted by time."""
    out = np.zeros(36, dtype=np.int64)
    for i, j, k in combinations(range(len(edges)), 3):
        if edges[k][2] - edges[i][2] <= delta:
            mid = reference_classify(edges[i][:2], edges[j][:2], edges[k][:2])
            if mid is not None:
                out[mid] += 1
    return out


def reference_normalize(counts):
    total = sum(int(c) for c in counts)
    return [int(c) / total if total else 0.0 for c in counts]
