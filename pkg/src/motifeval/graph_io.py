"""Static directed graphs: parsing, serialization and synthetic generation.

Edge-list text follows the SNAP layout: ``#`` starts a comment line, every
other non-blank line is ``src dst`` or ``src dst weight``.  Node labels are
remapped to contiguous ids in order of first appearance.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import ConfigError, ParseError

SYNTHETIC_KINDS = ("erdos_renyi", "preferential_attachment", "ring_lattice")


@dataclass(frozen=True, eq=False)
class StaticGraph:
    """Directed weighted graph with CSR adjacency in both directions.

    Attributes
    ----------
    node_count : int
    src, dst : ndarray of int64
        Edge endpoints, in insertion order.
    weight : ndarray of float64
    out_ptr, out_nbr, out_eid : ndarray
        CSR rows of out-neighbours and the edge index of each entry.
    in_ptr, in_nbr, in_eid : ndarray
        Same for in-neighbours.
    hub : int
        Node of maximal in+out degree, smallest id on ties.
    """

    node_count: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    out_ptr: np.ndarray
    out_nbr: np.ndarray
    out_eid: np.ndarray
    in_ptr: np.ndarray
    in_nbr: np.ndarray
    in_eid: np.ndarray
    hub: int
    name: str = field(default="")

    @property
    def edge_count(self) -> int:
        return int(self.src.shape[0])

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [(int(s), int(d), float(w)) for s, d, w in zip(self.src, self.dst, self.weight)]

    def out_neighbors(self, u: int) -> np.ndarray:
        return self.out_nbr[self.out_ptr[u]:self.out_ptr[u + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        return self.in_nbr[self.in_ptr[v]:self.in_ptr[v + 1]]

    def out_degree(self) -> np.ndarray:
        return np.diff(self.out_ptr)

    def in_degree(self) -> np.ndarray:
        return np.diff(self.in_ptr)

    def degree(self) -> np.ndarray:
        return self.out_degree() + self.in_degree()

    def has_edge(self, u: int, v: int) -> bool:
        return (int(u), int(v)) in self._edge_set

    @property
    def _edge_set(self) -> set[tuple[int, int]]:
        cached = self.__dict__.get("_edges_cache")
        if cached is None:
            cached = set(zip(self.src.tolist(), self.dst.tolist()))
            object.__setattr__(self, "_edges_cache", cached)
        return cached

    def same_as(self, other: "StaticGraph") -> bool:
        """Structural equality (name is ignored)."""
        return (
            self.node_count == other.node_count
            and self.hub == other.hub
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.weight, other.weight)
        )


def _csr(n: int, key: np.ndarray, other: np.ndarray):
    order = np.argsort(key, kind="stable")
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(ptr, key + 1, 1)
    np.cumsum(ptr, out=ptr)
    return ptr, other[order].astype(np.int64), order.astype(np.int64)


def build_graph(
    node_count: int,
    edges: Iterable[tuple[int, int] | tuple[int, int, float]],
    name: str = "",
) -> StaticGraph:
    """Build a graph from ids already in ``[0, node_count)``.

    Self-loops are dropped and repeated ``(src, dst)`` pairs keep the first
    weight.
    """
    seen: set[tuple[int, int]] = set()
    src, dst, wts = [], [], []
    for e in edges:
        s, d = int(e[0]), int(e[1])
        w = float(e[2]) if len(e) > 2 else 1.0
        if not (0 <= s < node_count and 0 <= d < node_count):
            raise ValueError(f"edge ({s}, {d}) outside [0, {node_count})")
        if w <= 0:
            raise ValueError(f"edge ({s}, {d}) has non-positive weight {w}")
        if s == d or (s, d) in seen:
            continue
        seen.add((s, d))
        src.append(s)
        dst.append(d)
        wts.append(w)
    src_a = np.asarray(src, dtype=np.int64)
    dst_a = np.asarray(dst, dtype=np.int64)
    out_ptr, out_nbr, out_eid = _csr(node_count, src_a, dst_a)
    in_ptr, in_nbr, in_eid = _csr(node_count, dst_a, src_a)
    deg = np.diff(out_ptr) + np.diff(in_ptr)
    hub = int(np.argmax(deg)) if node_count else 0
    return StaticGraph(
        node_count=node_count,
        src=src_a,
        dst=dst_a,
        weight=np.asarray(wts, dtype=np.float64),
        out_ptr=out_ptr,
        out_nbr=out_nbr,
        out_eid=out_eid,
        in_ptr=in_ptr,
        in_nbr=in_nbr,
        in_eid=in_eid,
        hub=hub,
        name=name,
    )


def parse_edge_list(text: str | bytes, directed: bool = True, name: str = "") -> StaticGraph:
    """Parse SNAP-style edge-list text into a :class:`StaticGraph`.

    Raises
    ------
    ParseError
        On a malformed line (reported with its 1-based line number) or when
        the input holds no nodes at all.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    labels: dict[int, int] = {}
    edges: list[tuple[int, int, float]] = []

    def node(label: int) -> int:
        idx = labels.get(label)
        if idx is None:
            idx = labels[label] = len(labels)
        return idx

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise ParseError(f"expected 2 or 3 tokens, got {len(tokens)}", lineno)
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer node label in {line!r}", lineno) from None
        if a < 0 or b < 0:
            raise ParseError(f"negative node label in {line!r}", lineno)
        w = 1.0
        if len(tokens) == 3:
            try:
                w = float(tokens[2])
            except ValueError:
                raise ParseError(f"non-numeric weight {tokens[2]!r}", lineno) from None
            if not w > 0 or not np.isfinite(w):
                raise ParseError(f"weight must be positive, got {tokens[2]}", lineno)
        u, v = node(a), node(b)
        edges.append((u, v, w))
        if not directed:
            edges.append((v, u, w))
    if not labels:
        raise ParseError("empty graph")
    return build_graph(len(labels), edges, name=name)


def format_edge_list(g: StaticGraph) -> str:
    """Serialize ``g`` so that :func:`parse_edge_list` rebuilds it exactly.

    When first appearance in the edge listing would not reproduce the id
    order (or a node is isolated), every node is declared up front with a
    ``v v`` line; the parser keeps the node and drops the self-loop.
    """
    buf = io.StringIO()
    buf.write(f"# nodes: {g.node_count} edges: {g.edge_count}\n")
    order: list[int] = []
    seen: set[int] = set()
    for s, d in zip(g.src.tolist(), g.dst.tolist()):
        for x in (s, d):
            if x not in seen:
                seen.add(x)
                order.append(x)
    if order != list(range(g.node_count)):
        for v in range(g.node_count):
            buf.write(f"{v} {v}\n")
    for s, d, w in zip(g.src.tolist(), g.dst.tolist(), g.weight.tolist()):
        buf.write(f"{s} {d} {w!r}\n")
    return buf.getvalue()


def load_edge_list(path: str | os.PathLike, directed: bool = True) -> StaticGraph:
    with open(path, "rb") as fh:
        return parse_edge_list(fh.read(), directed=directed, name=os.fspath(path))


def _undirected_to_graph(n: int, pairs: Iterable[tuple[int, int]], name: str) -> StaticGraph:
    edges = []
    for a, b in pairs:
        edges.append((a, b))
        edges.append((b, a))
    return build_graph(n, edges, name=name)


def generate_synthetic(kind: str, n: int, param: float, rng: np.random.Generator, name: str = "") -> StaticGraph:
    """Generate a directed graph where every structural link runs both ways.

    ``param`` is the link probability for ``erdos_renyi``, the number of links
    per new node for ``preferential_attachment`` and the half-bandwidth for
    ``ring_lattice``.
    """
    if kind not in SYNTHETIC_KINDS:
        raise ConfigError(f"unknown graph kind {kind!r}; expected one of {SYNTHETIC_KINDS}")
    if n < 10:
        raise ConfigError(f"synthetic graphs need n >= 10, got {n}")
    name = name or f"{kind}:{n}:{param:g}"

    if kind == "erdos_renyi":
        if not 0.0 < param < 1.0:
            raise ConfigError(f"erdos_renyi edge probability must be in (0, 1), got {param}")
        # row i links to a Binomial(n-1-i, p) subset of the nodes above it
        pairs = []
        for i in range(n - 1):
            k = int(rng.binomial(n - 1 - i, param))
            if k:
                cols = rng.choice(n - 1 - i, size=k, replace=False) + i + 1
                pairs.extend((i, int(j)) for j in np.sort(cols))
        return _undirected_to_graph(n, pairs, name)

    m = int(param)
    if m != param or m < 1:
        raise ConfigError(f"{kind} parameter must be an integer >= 1, got {param}")

    if kind == "ring_lattice":
        if 2 * m >= n:
            raise ConfigError(f"ring_lattice half-bandwidth {m} too large for n={n}")
        pairs = [(i, (i + j) % n) for i in range(n) for j in range(1, m + 1)]
        return _undirected_to_graph(n, pairs, name)

    # preferential attachment: node m links to 0..m-1, then each new node picks
    # m distinct targets with probability proportional to degree
    if m >= n:
        raise ConfigError(f"preferential_attachment needs m < n, got m={m}, n={n}")
    pairs = []
    repeated: list[int] = []
    targets = list(range(m))
    for new in range(m, n):
        for t in targets:
            pairs.append((new, t))
        repeated.extend(targets)
        repeated.extend([new] * m)
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(repeated[int(rng.integers(len(repeated)))])
        targets = sorted(chosen)
    return _undirected_to_graph(n, pairs, name)


def parse_graph_spec(spec: str) -> tuple[str, int, float]:
    """Split a ``kind:n:param`` string."""
    parts = spec.split(":")
    if len(parts) != 3 or parts[0] not in SYNTHETIC_KINDS:
        raise ConfigError(f"bad synthetic graph spec {spec!r}; expected kind:n:param")
    try:
        return parts[0], int(parts[1]), float(parts[2])
    except ValueError:
        raise ConfigError(f"bad numbers in graph spec {spec!r}") from None


def graph_stats(g: StaticGraph) -> dict[str, int]:
    deg = g.degree()
    return {
        "nodes": g.node_count,
        "edges": g.edge_count,
        "max_degree": int(deg.max()) if g.node_count else 0,
        "hub": g.hub,
    }
