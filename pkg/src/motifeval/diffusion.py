"""Round-based diffusion models producing ordered cascades of activated edges.

Six models are available, selected by ``ModelSpec.kind``:

``IC``  independent cascade, success probability ``phi_scale * w / max_w``
``WC``  weighted cascade, success probability ``1 / in_degree(v)``
``LT``  linear threshold with per-cascade uniform thresholds
``SM``  message model: each sender contacts 3-5 friends, who reply
``DC``  IC plus a confirmation sent back by the receiver
``BK``  IC plus a receiver <-> hub exchange after activation

Within a round the emitted edges are shuffled uniformly; a reply always
directly follows the edge that triggered it.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigError
from .graph_io import StaticGraph

MODEL_KINDS = ("IC", "WC", "LT", "SM", "DC", "BK")


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    phi_scale: float = 0.2
    confirm_prob: float = 0.5
    bank_prob: float = 0.5
    friends_min: int = 3
    friends_max: int = 5
    rounds: int = 6
    n_seed_nodes: int = 10
    name: str = ""

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ConfigError(f"unknown model kind {self.kind!r}; expected one of {MODEL_KINDS}")
        if not 0.0 <= self.phi_scale <= 1.0:
            raise ConfigError(f"phi_scale must be in [0, 1], got {self.phi_scale}")
        for attr in ("confirm_prob", "bank_prob"):
            p = getattr(self, attr)
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{attr} must be in [0, 1], got {p}")
        if not 3 <= self.friends_min <= self.friends_max:
            raise ConfigError(
                f"need 3 <= friends_min <= friends_max, got {self.friends_min}, {self.friends_max}"
            )
        if self.rounds < 1:
            raise ConfigError(f"rounds must be >= 1, got {self.rounds}")
        if self.n_seed_nodes < 1:
            raise ConfigError(f"n_seed_nodes must be >= 1, got {self.n_seed_nodes}")

    @property
    def label(self) -> str:
        return self.name or self.kind

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Cascade:
    activations: np.ndarray  # shape (L, 2), int64, emission order
    seed_nodes: frozenset = field(default_factory=frozenset)

    def __len__(self) -> int:
        return int(self.activations.shape[0])

    def as_list(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in self.activations]


def select_seeds(g: StaticGraph, n: int, rng: np.random.Generator) -> np.ndarray:
    """Sample up to ``n`` distinct nodes with out-degree >= 1, returned sorted."""
    if n < 1:
        raise ConfigError(f"seed count must be >= 1, got {n}")
    candidates = np.flatnonzero(g.out_degree() > 0)
    if candidates.size == 0:
        return candidates.astype(np.int64)
    picked = rng.choice(candidates, size=min(n, candidates.size), replace=False)
    return np.sort(picked).astype(np.int64)


def _emit(units, rng, out):
    """Append shuffled units; each unit is a list of edges kept contiguous."""
    for i in rng.permutation(len(units)):
        out.extend(units[i])


def _cascade_ic_family(g: StaticGraph, m: ModelSpec, rng, seeds) -> list:
    n = g.node_count
    active = np.zeros(n, dtype=bool)
    active[seeds] = True
    if m.kind == "WC":
        in_deg = g.in_degree()
        edge_p = 1.0 / in_deg[g.dst]
    else:
        max_w = g.weight.max() if g.edge_count else 1.0
        edge_p = m.phi_scale * g.weight / max_w
    out_ptr, out_nbr, out_eid = g.out_ptr, g.out_nbr, g.out_eid
    hub = g.hub
    emitted: list = []
    frontier = seeds.tolist()
    for _ in range(m.rounds):
        if not frontier:
            break
        hits: list[tuple[int, int]] = []
        for u in frontier:
            lo, hi = out_ptr[u], out_ptr[u + 1]
            if lo == hi:
                continue
            draws = rng.random(hi - lo)
            for j in range(lo, hi):
                v = out_nbr[j]
                if not active[v] and draws[j - lo] < edge_p[out_eid[j]]:
                    active[v] = True
                    hits.append((u, int(v)))
        units = []
        for i in rng.permutation(len(hits)):
            u, v = hits[i]
            unit = [(u, v)]
            if m.kind == "DC":
                if rng.random() < m.confirm_prob and g.has_edge(v, u):
                    unit.append((v, u))
            elif m.kind == "BK":
                if rng.random() < m.bank_prob and v != hub:
                    unit.append((v, hub))
                    unit.append((hub, v))
            units.append(unit)
        for unit in units:
            emitted.extend(unit)
        frontier = [v for _, v in hits]
    return emitted


def _cascade_lt(g: StaticGraph, m: ModelSpec, rng, seeds) -> list:
    n = g.node_count
    thresholds = rng.random(n)
    in_total = np.zeros(n)
    np.add.at(in_total, g.dst, g.weight)
    norm_w = g.weight / np.where(in_total[g.dst] > 0, in_total[g.dst], 1.0)
    acc = np.zeros(n)
    active = np.zeros(n, dtype=bool)
    active[seeds] = True
    emitted: list = []
    newly = seeds.tolist()
    for _ in range(m.rounds):
        if not newly:
            break
        touched = set()
        for u in newly:
            for j in range(g.out_ptr[u], g.out_ptr[u + 1]):
                v = int(g.out_nbr[j])
                acc[v] += norm_w[g.out_eid[j]]
                if not active[v]:
                    touched.add(v)
        activated = [v for v in sorted(touched) if acc[v] >= thresholds[v]]
        round_edges = []
        for v in activated:
            for u in g.in_neighbors(v):
                if active[u]:
                    round_edges.append([(int(u), v)])
        _emit(round_edges, rng, emitted)
        active[activated] = True
        newly = activated
    return emitted


def _cascade_sm(g: StaticGraph, m: ModelSpec, rng, seeds) -> list:
    joined = np.zeros(g.node_count, dtype=bool)
    joined[seeds] = True
    emitted: list = []
    frontier = seeds.tolist()
    for _ in range(m.rounds):
        if not frontier:
            break
        units = []
        nxt = []
        for u in frontier:
            nbrs = g.out_neighbors(u)
            k = int(rng.integers(m.friends_min, m.friends_max + 1))
            if nbrs.size == 0:
                continue
            for v in rng.choice(nbrs, size=min(k, nbrs.size), replace=False).tolist():
                unit = [(u, v)]
                if g.has_edge(v, u):
                    unit.append((v, u))
                units.append(unit)
                if not joined[v]:
                    joined[v] = True
                    nxt.append(v)
        _emit(units, rng, emitted)
        frontier = nxt
    return emitted


def run_cascade(g: StaticGraph, m: ModelSpec, rng: np.random.Generator) -> Cascade:
    """Run one diffusion from freshly sampled seeds for at most ``m.rounds`` rounds."""
    seeds = select_seeds(g, m.n_seed_nodes, rng)
    if seeds.size == 0:
        return Cascade(np.zeros((0, 2), dtype=np.int64), frozenset())
    if m.kind == "LT":
        edges = _cascade_lt(g, m, rng, seeds)
    elif m.kind == "SM":
        edges = _cascade_sm(g, m, rng, seeds)
    else:
        edges = _cascade_ic_family(g, m, rng, seeds)
    arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    return Cascade(arr, frozenset(seeds.tolist()))
