"""Motif-feature pipeline plus stability, separability and model distance.

Reductions work on feature tables: arrays of shape ``(n_graphs, n_seeds, 36)``
holding normalized motif vectors of one model, indexed by graph and seed.
The ``*_table`` functions take such arrays directly (handy for planted
tables); the others run the simulation first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diffusion import ModelSpec, run_cascade
from .errors import ConfigError
from .graph_io import StaticGraph
from .motif import N_MOTIFS, count_fast
from .rng import RngHierarchy
from .temporal import DEFAULT_RATE, TemporalNetwork, combine_cascades

DEFAULT_DELTA = 10.0 / DEFAULT_RATE


@dataclass(frozen=True)
class EvalConfig:
    seeds: tuple[int, ...] = ()
    cascades: int = 10
    delta: float = DEFAULT_DELTA
    rate: float = DEFAULT_RATE
    tau: float = 0.01
    epsilon: float = 0.05
    master_seed: int = 0

    def __post_init__(self):
        if self.cascades < 1:
            raise ConfigError(f"cascades (P) must be >= 1, got {self.cascades}")
        if not self.delta > 0:
            raise ConfigError(f"delta must be positive, got {self.delta}")
        if not self.rate > 0:
            raise ConfigError(f"rate must be positive, got {self.rate}")
        if self.tau < 0 or not 0 <= self.epsilon <= 1:
            raise ConfigError("need tau >= 0 and epsilon in [0, 1]")


def generate_temporal(g: StaticGraph, m: ModelSpec, seed: int, cfg: EvalConfig) -> TemporalNetwork:
    """Run ``cfg.cascades`` cascades of ``m`` on ``g`` and interleave them."""
    rh = RngHierarchy(cfg.master_seed)
    cascades = [run_cascade(g, m, rh.stream("cascade", m.label, g.name, seed, p)) for p in range(cfg.cascades)]
    return combine_cascades(cascades, rh.stream("combine", m.label, g.name, seed), cfg.rate, g.node_count)


def motif_feature(g: StaticGraph, m: ModelSpec, seed: int, cfg: EvalConfig) -> np.ndarray:
    """Normalized 36-vector of the temporal network generated with ``seed``."""
    return count_fast(generate_temporal(g, m, seed, cfg), cfg.delta).normalized


def feature_table(m: ModelSpec, graphs: Sequence[StaticGraph], seeds: Sequence[int], cfg: EvalConfig) -> np.ndarray:
    out = np.zeros((len(graphs), len(seeds), N_MOTIFS))
    for gi, g in enumerate(graphs):
        for ki, k in enumerate(seeds):
            out[gi, ki] = motif_feature(g, m, k, cfg)
    return out


def distance(m1, m2) -> float:
    """Sum of squared component differences."""
    diff = np.asarray(m1, dtype=np.float64) - np.asarray(m2, dtype=np.float64)
    return float(np.dot(diff, diff))


def _pairwise(f: np.ndarray) -> np.ndarray:
    """All-pairs squared distances between rows of ``f``."""
    diff = f[:, None, :] - f[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _as_table(table) -> np.ndarray:
    t = np.asarray(table, dtype=np.float64)
    if t.ndim != 3:
        raise ConfigError(f"feature table must be (graphs, seeds, features), got shape {t.shape}")
    return t


def stability_score_table(features) -> float:
    """Max distance over seed pairs for one graph; ``features`` is (seeds, 36)."""
    f = np.asarray(features, dtype=np.float64)
    if f.shape[0] < 2:
        raise ConfigError("stability needs at least 2 seeds")
    return float(_pairwise(f).max())


def stability_table(table) -> float:
    t = _as_table(table)
    return max(stability_score_table(t[g]) for g in range(t.shape[0]))


def separability_table(table) -> float:
    """Min distance between two different graphs under the same seed."""
    t = _as_table(table)
    n_graphs = t.shape[0]
    if n_graphs < 2:
        raise ConfigError("separability needs at least 2 graphs")
    best = np.inf
    for g1 in range(n_graphs):
        for g2 in range(g1 + 1, n_graphs):
            diff = t[g1] - t[g2]
            best = min(best, float(np.einsum("ij,ij->i", diff, diff).min()))
    return best


def seed_averaged(table) -> np.ndarray:
    """Per-graph mean over seeds, re-normalized to unit sum (zero rows stay zero)."""
    mean = _as_table(table).mean(axis=1)
    sums = mean.sum(axis=1, keepdims=True)
    return np.divide(mean, sums, out=np.zeros_like(mean), where=sums > 0)


def model_distance_table(table1, table2) -> float:
    a, b = seed_averaged(table1), seed_averaged(table2)
    if a.shape != b.shape:
        raise ConfigError("model tables must share graphs and seeds")
    diff = a - b
    return float(np.einsum("ij,ij->i", diff, diff).mean())


def probability_diagnostics_table(table, tau: float, epsilon: float) -> dict:
    """Fractions of same-graph seed pairs and cross-graph same-seed pairs with d <= tau."""
    t = _as_table(table)
    n_graphs, n_seeds, _ = t.shape
    within = []
    iu = np.triu_indices(n_seeds, k=1)
    for g in range(n_graphs):
        within.append(_pairwise(t[g])[iu])
    within = np.concatenate(within) if within else np.zeros(0)
    across = []
    for g1 in range(n_graphs):
        for g2 in range(g1 + 1, n_graphs):
            diff = t[g1] - t[g2]
            across.append(np.einsum("ij,ij->i", diff, diff))
    stab_frac = float(np.mean(within <= tau)) if within.size else None
    sep_frac = float(np.mean(np.concatenate(across) <= tau)) if across else None
    return {
        "tau": tau,
        "epsilon": epsilon,
        "stab_frac": stab_frac,
        "sep_frac": sep_frac,
        "stab_pass": None if stab_frac is None else bool(stab_frac >= 1 - epsilon),
        "sep_pass": None if sep_frac is None else bool(sep_frac <= epsilon),
    }


# simulation-backed forms


def stability_score(m: ModelSpec, g: StaticGraph, seeds: Sequence[int], cfg: EvalConfig) -> float:
    if len(seeds) < 2:
        raise ConfigError("stability needs at least 2 seeds")
    return stability_score_table(feature_table(m, [g], seeds, cfg)[0])


def stability(m: ModelSpec, graphs: Sequence[StaticGraph], seeds: Sequence[int], cfg: EvalConfig) -> float:
    if len(seeds) < 2:
        raise ConfigError("stability needs at least 2 seeds")
    return stability_table(feature_table(m, graphs, seeds, cfg))


def separability(m: ModelSpec, graphs: Sequence[StaticGraph], seeds: Sequence[int], cfg: EvalConfig) -> float:
    if len(graphs) < 2:
        raise ConfigError("separability needs at least 2 graphs")
    return separability_table(feature_table(m, graphs, seeds, cfg))


def model_distance(
    m1: ModelSpec, m2: ModelSpec, graphs: Sequence[StaticGraph], seeds: Sequence[int], cfg: EvalConfig
) -> float:
    return model_distance_table(feature_table(m1, graphs, seeds, cfg), feature_table(m2, graphs, seeds, cfg))


def probability_diagnostics(
    m: ModelSpec, graphs: Sequence[StaticGraph], seeds: Sequence[int], cfg: EvalConfig
) -> dict:
    return probability_diagnostics_table(feature_table(m, graphs, seeds, cfg), cfg.tau, cfg.epsilon)
