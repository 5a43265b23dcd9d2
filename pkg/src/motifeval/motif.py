"""Counting of three-edge, two/three-node, delta-temporal motifs.

Index layout
------------
A motif instance is three time-ordered edges ``e1, e2, e3`` whose endpoints
span at most three nodes.  ``e1`` names the roles ``u -> v``; the third
node, if any, is ``w``.  Each later edge gets an edge type::

    0: u->v   1: v->u   2: u->w   3: w->u   4: v->w   5: w->v

and the motif id is ``6 * type(e2) + type(e3)``.  The two-node motifs are
exactly ids 0, 1, 6 and 7.  The cyclic triangle ``u->v, v->w, w->u`` is
id 27.

All three edges must lie in a window of width ``delta``:
``t3 - t1 <= delta`` (inclusive).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._jit import njit
from .errors import ConfigError
from .temporal import TemporalNetwork

N_MOTIFS = 36
EDGE_TYPE_NAMES = ("u->v", "v->u", "u->w", "w->u", "v->w", "w->v")
MOTIF_NAMES = tuple(
    f"{EDGE_TYPE_NAMES[0]},{EDGE_TYPE_NAMES[i // 6]},{EDGE_TYPE_NAMES[i % 6]}" for i in range(N_MOTIFS)
)
TWO_NODE_IDS = (0, 1, 6, 7)


@dataclass(frozen=True, eq=False)
class MotifVector:
    counts: np.ndarray  # int64, shape (36,)
    normalized: np.ndarray  # float64, shape (36,)

    @classmethod
    def from_counts(cls, counts) -> "MotifVector":
        c = np.asarray(counts, dtype=np.int64).reshape(N_MOTIFS)
        return cls(c, _normalize(c))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, MotifVector):
            return NotImplemented
        return np.array_equal(self.counts, other.counts) and np.array_equal(self.normalized, other.normalized)


def _normalize(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    s = x.sum()
    if s <= 0:
        return np.zeros(N_MOTIFS)
    return x / s


def normalize(v: MotifVector) -> MotifVector:
    """Recompute the normalized weights; all-zero counts give a zero vector."""
    return MotifVector(v.counts, _normalize(v.counts))


# ---------------------------------------------------------------------------
# kernels


@njit
def _edge_type(a, b, u, v, w):
    if a == u and b == v:
        return 0
    if a == v and b == u:
        return 1
    if a == u and b == w:
        return 2
    if a == w and b == u:
        return 3
    if a == v and b == w:
        return 4
    if a == w and b == v:
        return 5
    return -1


@njit
def _classify(s1, d1, s2, d2, s3, d3):
    u = s1
    v = d1
    w = -1
    for x in (s2, d2, s3, d3):
        if x != u and x != v:
            if w == -1:
                w = x
            elif x != w:
                return -1
    t2 = _edge_type(s2, d2, u, v, w)
    t3 = _edge_type(s3, d3, u, v, w)
    if t2 < 0 or t3 < 0:
        return -1
    return 6 * t2 + t3


@njit
def _count_bruteforce(src, dst, t, delta):
    counts = np.zeros(36, dtype=np.int64)
    n = src.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            if t[j] - t[i] > delta:
                break
            for k in range(j + 1, n):
                if t[k] - t[i] > delta:
                    break
                mid = _classify(src[i], dst[i], src[j], dst[j], src[k], dst[k])
                if mid >= 0:
                    counts[mid] += 1
    return counts


@njit
def _window_count3(letters, times, n, delta, L, count1, count2, count3):
    """Sliding-window triple counter over the first ``n`` entries.

    ``count3[x, y, z]`` accumulates index-ordered triples with letters
    ``(x, y, z)`` and ``t_last - t_first <= delta``; the caller zeroes it.
    Returns the number of triples added.
    """
    count1[:] = 0
    count2[:, :] = 0
    start = 0
    added = 0
    for k in range(n):
        tk = times[k]
        while start < k and tk - times[start] > delta:
            f = letters[start]
            count1[f] -= 1
            for x in range(L):
                count2[f, x] -= count1[x]
            start += 1
        e = letters[k]
        if k - start >= 2:
            for x in range(L):
                for y in range(L):
                    count3[x, y, e] += count2[x, y]
                    added += count2[x, y]
        for x in range(L):
            count2[x, e] += count1[x]
        count1[e] += 1
    return added


@njit
def _sequence_count3(letters, times, delta, L):
    count1 = np.zeros(L, dtype=np.int64)
    count2 = np.zeros((L, L), dtype=np.int64)
    count3 = np.zeros((L, L, L), dtype=np.int64)
    _window_count3(letters, times, letters.shape[0], delta, L, count1, count2, count3)
    return count3


@njit
def _triad_letter(a, b, p0, p1, p2):
    # directed-pair alphabet over (p0, p1, p2); coincides with the edge-type
    # alphabet when u=p0, v=p1, w=p2
    return _edge_type(a, b, p0, p1, p2)


@njit
def _has_pair(nbr, ptr, a, b):
    """Binary search for b in the sorted undirected neighbour row of a; returns the slot or -1."""
    lo = ptr[a]
    hi = ptr[a + 1]
    while lo < hi:
        mid = (lo + hi) // 2
        if nbr[mid] < b:
            lo = mid + 1
        else:
            hi = mid
    if lo < ptr[a + 1] and nbr[lo] == b:
        return lo
    return -1


@njit
def _count_fast(src, dst, t, delta, n_nodes, lut):
    counts = np.zeros(36, dtype=np.int64)
    m = src.shape[0]
    if m < 3:
        return counts

    # group edges by unordered node pair; stable sort keeps time order within a pair
    lo_n = np.minimum(src, dst)
    hi_n = np.maximum(src, dst)
    key = lo_n * n_nodes + hi_n
    order = np.argsort(key, kind="mergesort")
    n_pairs = 0
    for i in range(m):
        if i == 0 or key[order[i]] != key[order[i - 1]]:
            n_pairs += 1
    pair_ptr = np.zeros(n_pairs + 1, dtype=np.int64)
    pair_a = np.empty(n_pairs, dtype=np.int64)
    pair_b = np.empty(n_pairs, dtype=np.int64)
    pair_t0 = np.empty(n_pairs, dtype=np.float64)
    pair_t1 = np.empty(n_pairs, dtype=np.float64)
    p = -1
    for i in range(m):
        e = order[i]
        if i == 0 or key[e] != key[order[i - 1]]:
            p += 1
            pair_a[p] = lo_n[e]
            pair_b[p] = hi_n[e]
            pair_t0[p] = t[e]
        pair_t1[p] = t[e]
        pair_ptr[p + 1] = i + 1

    # pair pass: two-node motifs
    letters = np.empty(m, dtype=np.int64)
    times = np.empty(m, dtype=np.float64)
    c1 = np.zeros(6, dtype=np.int64)
    c2 = np.zeros((6, 6), dtype=np.int64)
    c3_2 = np.zeros((2, 2, 2), dtype=np.int64)
    for p in range(n_pairs):
        n = 0
        for i in range(pair_ptr[p], pair_ptr[p + 1]):
            e = order[i]
            letters[n] = 0 if src[e] == pair_a[p] else 1
            times[n] = t[e]
            n += 1
        if n < 3:
            continue
        c3_2[:, :, :] = 0
        if _window_count3(letters, times, n, delta, 2, c1, c2, c3_2) == 0:
            continue
        for x in range(2):
            for y in range(2):
                for z in range(2):
                    ty = 0 if y == x else 1
                    tz = 0 if z == x else 1
                    counts[6 * ty + tz] += c3_2[x, y, z]

    # undirected static projection, rows sorted by neighbour id
    deg = np.zeros(n_nodes + 1, dtype=np.int64)
    for p in range(n_pairs):
        deg[pair_a[p] + 1] += 1
        deg[pair_b[p] + 1] += 1
    adj_ptr = np.cumsum(deg)
    adj_nbr = np.empty(2 * n_pairs, dtype=np.int64)
    adj_pair = np.empty(2 * n_pairs, dtype=np.int64)
    fill = adj_ptr[:-1].copy()
    # pairs are sorted by (a, b), so rows of a get increasing b; rows of b get
    # increasing a in the same sweep
    for p in range(n_pairs):
        a = pair_a[p]
        b = pair_b[p]
        adj_nbr[fill[a]] = b
        adj_pair[fill[a]] = p
        fill[a] += 1
        adj_nbr[fill[b]] = a
        adj_pair[fill[b]] = p
        fill[b] += 1
    for v in range(n_nodes):
        s = adj_ptr[v]
        e = adj_ptr[v + 1]
        if e - s > 1:
            o = np.argsort(adj_nbr[s:e])
            adj_nbr[s:e] = adj_nbr[s:e][o]
            adj_pair[s:e] = adj_pair[s:e][o]

    # triad pass: every connected node triple once, 3-node motifs only
    c3_6 = np.zeros((6, 6, 6), dtype=np.int64)
    touched = False
    for c in range(n_nodes):
        s = adj_ptr[c]
        e = adj_ptr[c + 1]
        for i in range(s, e):
            x = adj_nbr[i]
            px = adj_pair[i]
            for j in range(i + 1, e):
                y = adj_nbr[j]
                py = adj_pair[j]
                slot = _has_pair(adj_nbr, adj_ptr, x, y)
                if slot >= 0 and c > x:
                    # triangle: only its smallest node enumerates it (x < y)
                    continue
                pxy = adj_pair[slot] if slot >= 0 else -1
                # three-way merge of the pair timelines by edge index
                ia = pair_ptr[px]
                ea = pair_ptr[px + 1]
                ib = pair_ptr[py]
                eb = pair_ptr[py + 1]
                ic = pair_ptr[pxy] if pxy >= 0 else 0
                ec = pair_ptr[pxy + 1] if pxy >= 0 else 0
                if (ea - ia) + (eb - ib) + (ec - ic) < 3:
                    continue
                if pxy < 0 and (pair_t0[py] - pair_t1[px] > delta or pair_t0[px] - pair_t1[py] > delta):
                    # a 3-node motif needs an edge from each of the two pairs inside one window
                    continue
                n = 0
                while ia < ea or ib < eb or ic < ec:
                    best = -1
                    if ia < ea:
                        best = order[ia]
                    if ib < eb and (best < 0 or order[ib] < best):
                        best = order[ib]
                    if ic < ec and (best < 0 or order[ic] < best):
                        best = order[ic]
                    if ia < ea and order[ia] == best:
                        ia += 1
                    elif ib < eb and order[ib] == best:
                        ib += 1
                    else:
                        ic += 1
                    letters[n] = _triad_letter(src[best], dst[best], c, x, y)
                    times[n] = t[best]
                    n += 1
                if touched:
                    c3_6[:, :, :] = 0
                touched = _window_count3(letters, times, n, delta, 6, c1, c2, c3_6) > 0
                if not touched:
                    continue
                for a in range(6):
                    for b in range(6):
                        for d in range(6):
                            mid = lut[a, b, d]
                            if mid >= 0:
                                counts[mid] += c3_6[a, b, d]
    return counts


def _build_triad_lut() -> np.ndarray:
    # symbolic nodes 0, 1, 2; letter -> directed pair as in _triad_letter
    pairs = ((0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1))
    lut = np.full((6, 6, 6), -1, dtype=np.int64)
    for a in range(6):
        for b in range(6):
            for d in range(6):
                nodes = set(pairs[a]) | set(pairs[b]) | set(pairs[d])
                if len(nodes) == 3:
                    lut[a, b, d] = classify_triple(pairs[a], pairs[b], pairs[d])
    return lut


_TRIAD_LUT = None


# ---------------------------------------------------------------------------
# public API


def classify_triple(e1, e2, e3) -> int | None:
    """Motif id of three time-ordered ``(src, dst)`` edges, or None."""
    mid = int(_classify(int(e1[0]), int(e1[1]), int(e2[0]), int(e2[1]), int(e3[0]), int(e3[1])))
    return None if mid < 0 else mid


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not delta > 0:
        raise ConfigError(f"delta must be positive, got {delta}")
    return delta


def _arrays(tn: TemporalNetwork):
    return (
        np.ascontiguousarray(tn.src, dtype=np.int64),
        np.ascontiguousarray(tn.dst, dtype=np.int64),
        np.ascontiguousarray(tn.t, dtype=np.float64),
    )


def count_bruteforce(tn: TemporalNetwork, delta: float) -> MotifVector:
    """Reference counter: every index-ordered triple inside the window."""
    delta = _check_delta(delta)
    return MotifVector.from_counts(_count_bruteforce(*_arrays(tn), delta))


def sequence_count3(timeline, delta: float, L: int) -> np.ndarray:
    """Count letter triples ``(x, y, z)`` in a time-ordered ``(letter, t)`` list."""
    if not 1 <= L <= 6:
        raise ConfigError(f"alphabet size must be in [1, 6], got {L}")
    letters = np.array([int(x) for x, _ in timeline], dtype=np.int64)
    times = np.array([float(ts) for _, ts in timeline], dtype=np.float64)
    if letters.size and (letters.min() < 0 or letters.max() >= L):
        raise ConfigError(f"letters must lie in [0, {L})")
    return _sequence_count3(letters, times, float(delta), L)


def count_fast(tn: TemporalNetwork, delta: float) -> MotifVector:
    """Windowed counter: a pair pass for 2-node motifs plus a triad pass for 3-node motifs.

    Gives exactly the same counts as :func:`count_bruteforce`.
    """
    global _TRIAD_LUT
    delta = _check_delta(delta)
    if _TRIAD_LUT is None:
        _TRIAD_LUT = _build_triad_lut()
    src, dst, t = _arrays(tn)
    n_nodes = int(max(src.max(), dst.max()) + 1) if src.size else 0
    return MotifVector.from_counts(_count_fast(src, dst, t, delta, n_nodes, _TRIAD_LUT))
