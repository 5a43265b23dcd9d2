from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from motifeval.diffusion import ModelSpec, run_cascade
from motifeval.errors import ConfigError
from motifeval.graph_io import generate_synthetic
from motifeval.metrics import (
    EvalConfig,
    distance,
    model_distance,
    model_distance_table,
    motif_feature,
    probability_diagnostics,
    probability_diagnostics_table,
    separability,
    separability_table,
    stability,
    stability_score,
    stability_score_table,
    stability_table,
)
from motifeval.rng import RngHierarchy
from motifeval.temporal import combine_cascades, read_temporal, write_temporal

from oracles import reference_counts, reference_normalize


def unit(i):
    e = np.zeros(36)
    e[i] = 1.0
    return e


def random_simplex(rng, shape):
    x = rng.random(shape + (36,))
    return x / x.sum(axis=-1, keepdims=True)


def script_distance(a, b):
    return sum((float(x) - float(y)) ** 2 for x, y in zip(a, b))


@pytest.fixture(scope="module")
def ring():
    return generate_synthetic("ring_lattice", 50, 2, np.random.default_rng(0), name="ring")


@pytest.fixture(scope="module")
def two_graphs():
    rng = np.random.default_rng(1)
    return [
        generate_synthetic("erdos_renyi", 60, 0.08, rng, name="er"),
        generate_synthetic("ring_lattice", 60, 3, rng, name="ring"),
    ]


# distance


def test_distance_self_zero():
    x = random_simplex(np.random.default_rng(0), ())
    assert distance(x, x) == 0.0


def test_distance_two_units():
    assert distance(unit(0), unit(1)) == 2.0


def test_distance_random_pair_matches_script():
    rng = np.random.default_rng(3)
    a, b = random_simplex(rng, (2,))
    assert distance(a, b) == pytest.approx(script_distance(a, b), rel=1e-12)


simplex_vectors = arrays(np.float64, 36, elements=st.floats(0, 1)).filter(lambda v: v.sum() > 0).map(lambda v: v / v.sum())


@given(simplex_vectors, simplex_vectors)
def test_distance_properties(a, b):
    d = distance(a, b)
    assert d >= 0 and d == distance(b, a) and d <= 2 + 1e-12
    if np.array_equal(a, b):
        assert d == 0
    elif np.abs(a - b).max() > 1e-150:  # smaller gaps underflow when squared
        assert d > 0


# stability and separability on planted tables


def test_stability_identical_is_zero():
    t = np.tile(unit(4), (3, 5, 1))
    assert stability_table(t) == 0.0


def test_stability_two_units():
    assert stability_score_table([unit(0), unit(1)]) == 2.0


def test_stability_q5_exhaustive():
    f = random_simplex(np.random.default_rng(4), (5,))
    expected = max(script_distance(f[i], f[j]) for i, j in combinations(range(5), 2))
    assert stability_score_table(f) == pytest.approx(expected, rel=1e-12)


def test_stability_is_max_over_graphs():
    t = random_simplex(np.random.default_rng(5), (2, 4))
    assert stability_table(t[:1]) == stability_score_table(t[0])
    assert stability_table(t) == max(stability_score_table(t[0]), stability_score_table(t[1]))


def test_separability_identical_graphs_zero():
    t = random_simplex(np.random.default_rng(6), (1, 4))
    assert separability_table(np.concatenate([t, t])) == 0.0


def test_separability_exhaustive():
    t = random_simplex(np.random.default_rng(7), (4, 6))
    expected = min(
        script_distance(t[g1, k], t[g2, k]) for g1, g2 in combinations(range(4), 2) for k in range(6)
    )
    assert separability_table(t) == pytest.approx(expected, rel=1e-12)


def test_separability_single_seed():
    t = np.stack([[unit(0)], [unit(1)]])
    assert separability_table(t) == 2.0


def test_separability_uses_same_seed_only():
    # cross-seed pairs coincide here but same-seed pairs differ
    t = np.stack([[unit(0), unit(1)], [unit(1), unit(0)]])
    assert separability_table(t) == 2.0


def test_guards():
    with pytest.raises(ConfigError):
        stability_score_table([unit(0)])
    with pytest.raises(ConfigError):
        separability_table(np.zeros((1, 3, 36)))


# model distance


def test_model_distance_self_zero():
    t = random_simplex(np.random.default_rng(8), (3, 4))
    assert model_distance_table(t, t) == 0.0


def test_model_distance_planted():
    t1 = np.stack([[unit(0), unit(1)], [unit(2), unit(2)]])
    t2 = np.stack([[unit(0), unit(0)], [unit(3), unit(3)]])
    # graph 0: (.5,.5) vs (1,0) -> .5 ; graph 1: e2 vs e3 -> 2 ; mean 1.25
    assert model_distance_table(t1, t2) == 1.25
    assert model_distance_table(t2, t1) == 1.25


def test_model_distance_zero_members_renormalized():
    t1 = np.stack([[unit(5), np.zeros(36)]])
    t2 = np.stack([[unit(5), unit(5)]])
    assert model_distance_table(t1, t2) == 0.0


# diagnostics


def test_diagnostics_tau_zero_and_infinite():
    t = random_simplex(np.random.default_rng(9), (3, 5))
    lo = probability_diagnostics_table(t, 0.0, 0.05)
    hi = probability_diagnostics_table(t, np.inf, 0.05)
    assert lo["stab_frac"] == 0.0 and lo["sep_frac"] == 0.0
    assert lo["stab_pass"] is False and lo["sep_pass"] is True
    assert hi["stab_frac"] == 1.0 and hi["sep_frac"] == 1.0


def test_diagnostics_median_counts():
    t = random_simplex(np.random.default_rng(10), (3, 6))
    within = [script_distance(t[g, i], t[g, j]) for g in range(3) for i, j in combinations(range(6), 2)]
    across = [script_distance(t[a, k], t[b, k]) for a, b in combinations(range(3), 2) for k in range(6)]
    tau = float(np.median(within + across))
    out = probability_diagnostics_table(t, tau, 0.05)
    assert out["stab_frac"] == sum(d <= tau for d in within) / len(within)
    assert out["sep_frac"] == sum(d <= tau for d in across) / len(across)


def test_diagnostics_single_graph_no_sep():
    out = probability_diagnostics_table(random_simplex(np.random.default_rng(0), (1, 3)), 0.1, 0.05)
    assert out["sep_frac"] is None and out["sep_pass"] is None


# monotonicity under set growth

tables = st.tuples(st.integers(2, 4), st.integers(2, 5), st.integers(0, 2**31)).map(
    lambda a: random_simplex(np.random.default_rng(a[2]), (a[0], a[1]))
)


@given(tables, st.integers(0, 2**31))
@settings(max_examples=100)
def test_monotone_in_seeds(t, seed):
    extra = random_simplex(np.random.default_rng(seed), (t.shape[0], 1))
    grown = np.concatenate([t, extra], axis=1)
    assert stability_table(grown) >= stability_table(t)
    assert separability_table(grown) <= separability_table(t)


@given(tables, st.integers(0, 2**31))
@settings(max_examples=100)
def test_monotone_in_graphs(t, seed):
    extra = random_simplex(np.random.default_rng(seed), (1, t.shape[1]))
    grown = np.concatenate([t, extra], axis=0)
    assert stability_table(grown) >= stability_table(t)
    assert separability_table(grown) <= separability_table(t)


@given(tables)
@settings(max_examples=50)
def test_score_bounded_by_stability(t):
    for g in range(t.shape[0]):
        assert stability_score_table(t[g]) <= stability_table(t)


@given(tables, tables)
@settings(max_examples=50)
def test_model_distance_symmetric(a, b):
    if a.shape == b.shape:
        assert model_distance_table(a, b) == model_distance_table(b, a)


# simulation-backed


CFG = EvalConfig(cascades=4, delta=50.0, master_seed=3)


def test_feature_deterministic(ring):
    m = ModelSpec("IC", phi_scale=0.5)
    a = motif_feature(ring, m, 17, CFG)
    b = motif_feature(ring, m, 17, CFG)
    assert np.array_equal(a, b)
    assert a.sum() == pytest.approx(1.0, abs=1e-12)


def test_feature_zero_when_cascades_empty(ring):
    assert not motif_feature(ring, ModelSpec("IC", phi_scale=0.0), 5, CFG).any()


def test_feature_matches_pipeline_replay(ring, tmp_path):
    m = ModelSpec("IC", phi_scale=0.6)
    seed = 123
    rh = RngHierarchy(CFG.master_seed)
    cascade_files = []
    for p in range(CFG.cascades):
        c = run_cascade(ring, m, rh.stream("cascade", m.label, ring.name, seed, p))
        path = tmp_path / f"c{p}.txt"
        path.write_text("".join(f"{u} {v}\n" for u, v in c.as_list()))
        cascade_files.append(path)
    cascades = [
        [tuple(map(int, line.split())) for line in f.read_text().splitlines()] for f in cascade_files
    ]
    tn = combine_cascades(cascades, rh.stream("combine", m.label, ring.name, seed), CFG.rate, ring.node_count)
    tfile = tmp_path / "tn.txt"
    tfile.write_text(write_temporal(tn))

    edges = []
    for line in tfile.read_text().splitlines():
        s, d, t = line.split()
        edges.append((int(s), int(d), float(t)))
    # the temporal file is an interleaving of the serialized cascades
    remaining = [list(c) for c in cascades]
    for s, d, _ in edges:
        owner = next(i for i, c in enumerate(remaining) if c and c[0] == (s, d))
        remaining[owner].pop(0)
    assert not any(remaining)
    expected = reference_normalize(reference_counts(edges, CFG.delta))
    assert sum(expected) > 0
    assert motif_feature(ring, m, seed, CFG).tolist() == pytest.approx(expected, abs=1e-15)
    assert read_temporal(tfile.read_text()).same_as(tn)


def test_simulated_forms(two_graphs):
    m = ModelSpec("SM")
    seeds = [1, 2, 3]
    g0 = two_graphs[0]
    assert stability_score(m, g0, seeds, CFG) <= stability(m, two_graphs, seeds, CFG)
    assert separability(m, two_graphs, seeds, CFG) >= 0
    assert model_distance(m, m, two_graphs, seeds, CFG) == 0.0
    diag = probability_diagnostics(m, two_graphs, seeds, EvalConfig(cascades=4, delta=50.0, tau=0.0))
    assert diag["stab_frac"] == 0.0
    with pytest.raises(ConfigError):
        stability_score(m, g0, [1], CFG)
    with pytest.raises(ConfigError):
        separability(m, [g0], seeds, CFG)


def test_eval_config_validation():
    for kw in ({"cascades": 0}, {"delta": 0.0}, {"rate": -1.0}, {"tau": -1.0}, {"epsilon": 2.0}):
        with pytest.raises(ConfigError):
            EvalConfig(**kw)
