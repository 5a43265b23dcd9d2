"""Experiment orchestration: config loading, feature table, metrics and reports.

Config files are YAML::

    master_seed: 1
    protocol:            # every key optional
      n_seeds: 50        # Q, used when `seeds` is absent
      seeds: [3, 17]     # explicit protocol seeds (overrides n_seeds)
      cascades: 10       # P
      delta: 3.3333      # motif window
      rate: 3.0          # exponential rate of inter-event gaps
      tau: 0.01
      epsilon: 0.05
    model_defaults:      # applied to every model below
      rounds: 6
    models:              # optional, defaults to the six kinds
      - kind: IC
        phi_scale: 0.3
    graphs:              # required
      - spec: erdos_renyi:500:0.01
      - path: edges.txt  # relative to the config file
        directed: false
        name: mygraph
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Sequence

import numpy as np
import yaml

from . import __version__
from .diffusion import MODEL_KINDS, ModelSpec
from .errors import ConfigError
from .graph_io import StaticGraph, generate_synthetic, load_edge_list, parse_graph_spec
from .metrics import (
    EvalConfig,
    model_distance_table,
    motif_feature,
    probability_diagnostics_table,
    seed_averaged,
    separability_table,
    stability_table,
)
from .motif import MOTIF_NAMES, N_MOTIFS
from .rng import RngHierarchy

log = logging.getLogger(__name__)

WORKERS_ENV = "MOTIFEVAL_WORKERS"
DEFAULT_Q = 50
FEATURE_COLUMNS = [f"m{i:02d}" for i in range(N_MOTIFS)]

TEXT_INEQUALITY_NOTE = (
    "The published discussion states s_sep < s_stab for every model, while the "
    "published stability/separability table shows s_stab < s_sep; the table "
    "direction is the one checked here."
)


@dataclass(frozen=True)
class GraphSource:
    name: str
    spec: str | None = None
    path: str | None = None
    directed: bool = True

    def load(self, rh: RngHierarchy) -> StaticGraph:
        if self.spec is not None:
            kind, n, param = parse_graph_spec(self.spec)
            return generate_synthetic(kind, n, param, rh.stream("graph", self.spec), name=self.name)
        g = load_edge_list(self.path, directed=self.directed)
        return StaticGraph(**{f.name: getattr(g, f.name) for f in fields(g) if f.name != "name"}, name=self.name)


@dataclass
class Experiment:
    config: EvalConfig
    models: list[ModelSpec]
    graphs: list[GraphSource]
    raw: dict = field(default_factory=dict)

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


_TOP_KEYS = {"master_seed", "protocol", "model_defaults", "models", "graphs"}
_PROTOCOL_KEYS = {"n_seeds", "seeds", "cascades", "delta", "rate", "tau", "epsilon"}
_MODEL_KEYS = {f.name for f in fields(ModelSpec)}
_GRAPH_KEYS = {"spec", "path", "directed", "name"}


def _check_keys(section: dict, allowed: set, where: str) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"{where}: expected a mapping")
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {unknown}")


def _model(entry: dict, defaults: dict, where: str) -> ModelSpec:
    _check_keys(entry, _MODEL_KEYS, where)
    if "kind" not in entry:
        raise ConfigError(f"{where}: missing 'kind'")
    try:
        return ModelSpec(**{**defaults, **entry})
    except ConfigError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_config(raw: dict, base_dir: str | os.PathLike = ".") -> Experiment:
    if not isinstance(raw, dict):
        raise ConfigError("config: expected a mapping at top level")
    _check_keys(raw, _TOP_KEYS, "config")
    master_seed = raw.get("master_seed", 0)
    if not isinstance(master_seed, int) or master_seed < 0:
        raise ConfigError(f"master_seed: expected a non-negative integer, got {master_seed!r}")

    proto = raw.get("protocol") or {}
    _check_keys(proto, _PROTOCOL_KEYS, "protocol")
    rh = RngHierarchy(master_seed)
    if "seeds" in proto:
        seeds = proto["seeds"]
        if not isinstance(seeds, list) or not all(isinstance(k, int) and k >= 0 for k in seeds):
            raise ConfigError("protocol.seeds: expected a list of non-negative integers")
        if len(set(seeds)) != len(seeds):
            raise ConfigError("protocol.seeds: duplicate seeds")
    else:
        q = proto.get("n_seeds", DEFAULT_Q)
        if not isinstance(q, int) or q < 1:
            raise ConfigError(f"protocol.n_seeds: expected a positive integer, got {q!r}")
        seeds = rh.protocol_seeds(q)
    if len(seeds) < 2:
        raise ConfigError("protocol: need at least 2 seeds (Q >= 2)")
    try:
        cfg = EvalConfig(
            seeds=tuple(seeds),
            cascades=int(proto.get("cascades", 10)),
            delta=float(proto.get("delta", EvalConfig.delta)),
            rate=float(proto.get("rate", EvalConfig.rate)),
            tau=float(proto.get("tau", EvalConfig.tau)),
            epsilon=float(proto.get("epsilon", EvalConfig.epsilon)),
            master_seed=master_seed,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"protocol: {exc}") from None

    defaults = raw.get("model_defaults") or {}
    _check_keys(defaults, _MODEL_KEYS - {"kind", "name"}, "model_defaults")
    model_entries = raw.get("models")
    if model_entries is None:
        model_entries = [{"kind": k} for k in MODEL_KINDS]
    if not isinstance(model_entries, list) or not model_entries:
        raise ConfigError("models: expected a non-empty list")
    models = [_model(e, defaults, f"models[{i}]") for i, e in enumerate(model_entries)]
    labels = [m.label for m in models]
    if len(set(labels)) != len(labels):
        raise ConfigError(f"models: duplicate labels {labels}; give repeated kinds a 'name'")

    graph_entries = raw.get("graphs")
    if not graph_entries:
        raise ConfigError("graphs: missing or empty section")
    if not isinstance(graph_entries, list):
        raise ConfigError("graphs: expected a list")
    graphs = []
    for i, e in enumerate(graph_entries):
        where = f"graphs[{i}]"
        _check_keys(e, _GRAPH_KEYS, where)
        if ("spec" in e) == ("path" in e):
            raise ConfigError(f"{where}: give exactly one of 'spec' or 'path'")
        if "spec" in e:
            try:
                parse_graph_spec(str(e["spec"]))
            except ConfigError as exc:
                raise ConfigError(f"{where}: {exc}") from None
            graphs.append(GraphSource(name=str(e.get("name", e["spec"])), spec=str(e["spec"])))
        else:
            path = Path(base_dir) / str(e["path"])
            graphs.append(
                GraphSource(name=str(e.get("name", e["path"])), path=str(path), directed=bool(e.get("directed", True)))
            )
    names = [g.name for g in graphs]
    if len(set(names)) != len(names):
        raise ConfigError(f"graphs: duplicate names {names}")
    return Experiment(cfg, models, graphs, raw=raw)


def load_config(path: str | os.PathLike) -> Experiment:
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from None
    return parse_config(raw, base_dir=Path(path).parent)


def default_config_path() -> Path:
    return Path(__file__).parent / "data" / "desk.yaml"


# ---------------------------------------------------------------------------
# feature table

_worker_graphs: list[StaticGraph] = []
_worker_models: list[ModelSpec] = []
_worker_cfg: EvalConfig | None = None


def _init_worker(graphs, models, cfg):
    global _worker_graphs, _worker_models, _worker_cfg
    _worker_graphs, _worker_models, _worker_cfg = graphs, models, cfg


def _feature_job(key):
    mi, gi, seed = key
    return motif_feature(_worker_graphs[gi], _worker_models[mi], seed, _worker_cfg)


def worker_count(workers: int | None = None) -> int:
    if workers is None:
        env = os.environ.get(WORKERS_ENV, "").strip()
        workers = int(env) if env else 1
    if workers < 1:
        raise ConfigError(f"worker count must be >= 1, got {workers}")
    return workers


class EvaluationFailed(RuntimeError):
    def __init__(self, message, completed):
        super().__init__(message)
        self.completed = completed


def compute_features(
    models: Sequence[ModelSpec],
    graphs: Sequence[StaticGraph],
    cfg: EvalConfig,
    workers: int | None = None,
) -> np.ndarray:
    """Feature array of shape (models, graphs, seeds, 36)."""
    workers = worker_count(workers)
    keys = [(mi, gi, k) for mi in range(len(models)) for gi in range(len(graphs)) for k in cfg.seeds]
    seed_pos = {k: i for i, k in enumerate(cfg.seeds)}
    out = np.zeros((len(models), len(graphs), len(cfg.seeds), N_MOTIFS))
    done: list = []
    try:
        if workers == 1:
            _init_worker(list(graphs), list(models), cfg)
            results = map(_feature_job, keys)
        else:
            pool = ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(list(graphs), list(models), cfg))
            results = pool.map(_feature_job, keys, chunksize=max(1, len(keys) // (4 * workers)))
        try:
            for key, vec in zip(keys, results):
                mi, gi, k = key
                out[mi, gi, seed_pos[k]] = vec
                done.append(key)
        finally:
            if workers > 1:
                pool.shutdown(cancel_futures=True)
    except Exception as exc:
        raise EvaluationFailed(f"feature job failed after {len(done)} of {len(keys)}: {exc!r}", done) from exc
    return out


# ---------------------------------------------------------------------------
# report


@dataclass
class EvalReport:
    models: list[str]
    graphs: list[str]
    seeds: list[int]
    features: np.ndarray  # (models, graphs, seeds, 36)
    stability: dict[str, float | None]
    separability: dict[str, float | None]
    distance: np.ndarray  # (models, models)
    profiles: np.ndarray  # (models, graphs, 36), seed-averaged
    diagnostics: dict[str, dict]
    notes: list[str] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def distance_between(self, a: str, b: str) -> float:
        return float(self.distance[self.models.index(a), self.models.index(b)])

    def to_dict(self) -> dict:
        return {
            "models": list(self.models),
            "graphs": list(self.graphs),
            "seeds": [int(k) for k in self.seeds],
            "motif_layout": list(MOTIF_NAMES),
            "stability": {k: (None if v is None else float(v)) for k, v in self.stability.items()},
            "separability": {k: (None if v is None else float(v)) for k, v in self.separability.items()},
            "distance": self.distance.tolist(),
            "profiles": self.profiles.tolist(),
            "features": self.features.tolist(),
            "diagnostics": self.diagnostics,
            "notes": list(self.notes),
            "provenance": dict(self.provenance),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        nm, ng, nq = len(d["models"]), len(d["graphs"]), len(d["seeds"])
        return cls(
            models=list(d["models"]),
            graphs=list(d["graphs"]),
            seeds=list(d["seeds"]),
            features=np.asarray(d["features"], dtype=np.float64).reshape(nm, ng, nq, N_MOTIFS),
            stability=dict(d["stability"]),
            separability=dict(d["separability"]),
            distance=np.asarray(d["distance"], dtype=np.float64).reshape(nm, nm),
            profiles=np.asarray(d["profiles"], dtype=np.float64).reshape(nm, ng, N_MOTIFS),
            diagnostics=dict(d["diagnostics"]),
            notes=list(d.get("notes", [])),
            provenance=dict(d.get("provenance", {})),
        )


def build_report(
    model_labels: Sequence[str],
    graph_names: Sequence[str],
    seeds: Sequence[int],
    features: np.ndarray,
    tau: float = EvalConfig.tau,
    epsilon: float = EvalConfig.epsilon,
    provenance: dict | None = None,
) -> EvalReport:
    """Reduce a (models, graphs, seeds, 36) feature array into a report."""
    features = np.asarray(features, dtype=np.float64)
    nm = len(model_labels)
    stab, sep, diag = {}, {}, {}
    for mi, label in enumerate(model_labels):
        table = features[mi]
        stab[label] = stability_table(table) if len(seeds) >= 2 else None
        sep[label] = separability_table(table) if len(graph_names) >= 2 else None
        diag[label] = probability_diagnostics_table(table, tau, epsilon)
    dist = np.zeros((nm, nm))
    for a in range(nm):
        for b in range(a + 1, nm):
            dist[a, b] = dist[b, a] = model_distance_table(features[a], features[b])
    profiles = (
        np.stack([seed_averaged(features[mi]) for mi in range(nm)])
        if nm and len(graph_names)
        else np.zeros((nm, len(graph_names), N_MOTIFS))
    )
    notes = [TEXT_INEQUALITY_NOTE]
    for label in model_labels:
        s, p = stab[label], sep[label]
        if s is None or p is None:
            notes.append(f"{label}: separability absent (needs >= 2 graphs)" if p is None else f"{label}: n/a")
        else:
            rel = "<" if s < p else (">" if s > p else "=")
            notes.append(f"{label}: observed s_stab {rel} s_sep ({s:.6g} vs {p:.6g})")
    return EvalReport(
        models=list(model_labels),
        graphs=list(graph_names),
        seeds=[int(k) for k in seeds],
        features=features,
        stability=stab,
        separability=sep,
        distance=dist,
        profiles=profiles,
        diagnostics=diag,
        notes=notes,
        provenance=dict(provenance or {}),
    )


def _provenance(exp: Experiment) -> dict:
    try:
        import numba

        numba_version = numba.__version__
    except ImportError:
        numba_version = None
    return {
        "config_hash": exp.config_hash,
        "master_seed": exp.config.master_seed,
        "motifeval": __version__,
        "numpy": np.__version__,
        "numba": numba_version,
    }


def run_evaluation(exp: Experiment, out_dir: str | os.PathLike | None = None, workers: int | None = None) -> EvalReport:
    """Simulate every (model, graph, seed) feature, reduce, and optionally write artifacts."""
    rh = RngHierarchy(exp.config.master_seed)
    graphs = [src.load(rh) for src in exp.graphs]
    labels = [m.label for m in exp.models]
    names = [g.name for g in graphs]
    try:
        features = compute_features(exp.models, graphs, exp.config, workers)
    except EvaluationFailed as exc:
        if out_dir is not None:
            _write_failure(Path(out_dir), exp, labels, names, exc)
        raise
    report = build_report(
        labels, names, exp.config.seeds, features, exp.config.tau, exp.config.epsilon, _provenance(exp)
    )
    if out_dir is not None:
        emit_report(report, out_dir, "json")
        emit_report(report, out_dir, "csv")
    return report


def _write_failure(out: Path, exp: Experiment, labels, names, exc: EvaluationFailed) -> None:
    out.mkdir(parents=True, exist_ok=True)
    manifest = {
        "error": str(exc),
        "completed": [[labels[mi], names[gi], int(k)] for mi, gi, k in exc.completed],
        "config_hash": exp.config_hash,
    }
    (out / "failure.json").write_text(json.dumps(manifest, indent=2) + "\n")
    log.error("evaluation failed; manifest written to %s", out / "failure.json")


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def report_csv_tables(report: EvalReport) -> dict[str, str]:
    """CSV text of every report table, keyed by file name."""
    feat_rows = []
    for mi, m in enumerate(report.models):
        for gi, g in enumerate(report.graphs):
            for ki, k in enumerate(report.seeds):
                feat_rows.append([m, g, k] + [_fmt(x) for x in report.features[mi, gi, ki]])
    score_rows = [
        [m, _fmt(report.stability[m]), _fmt(report.separability[m])] for m in report.models
    ]
    dist_rows = [
        [a, b, _fmt(report.distance[i, j])] for i, a in enumerate(report.models) for j, b in enumerate(report.models)
    ]
    prof_rows = [
        [m, g] + [_fmt(x) for x in report.profiles[mi, gi]]
        for mi, m in enumerate(report.models)
        for gi, g in enumerate(report.graphs)
    ]
    diag_rows = []
    for m in report.models:
        d = report.diagnostics[m]
        diag_rows.append([m, _fmt(d["tau"]), _fmt(d["epsilon"]), _fmt(d["stab_frac"]), _fmt(d["sep_frac"]),
                          d["stab_pass"], d["sep_pass"]])
    return {
        "features.csv": _csv_text(["model", "graph", "seed"] + FEATURE_COLUMNS, feat_rows),
        "scores.csv": _csv_text(["model", "stability", "separability"], score_rows),
        "distance.csv": _csv_text(["model_a", "model_b", "distance"], dist_rows),
        "profiles.csv": _csv_text(["model", "graph"] + FEATURE_COLUMNS, prof_rows),
        "diagnostics.csv": _csv_text(
            ["model", "tau", "epsilon", "stab_frac", "sep_frac", "stab_pass", "sep_pass"], diag_rows
        ),
        "motif_layout.csv": _csv_text(
            ["column", "id", "edge1", "edge2", "edge3"],
            [[c, i] + MOTIF_NAMES[i].split(",") for i, c in enumerate(FEATURE_COLUMNS)],
        ),
    }


def emit_report(report: EvalReport, out_dir: str | os.PathLike, format: str = "json") -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if format == "json":
        p = out / "report.json"
        p.write_text(json.dumps(report.to_dict(), indent=1) + "\n")
        written.append(p)
    elif format == "csv":
        for fname, text in report_csv_tables(report).items():
            p = out / fname
            p.write_text(text)
            written.append(p)
    else:
        raise ConfigError(f"unknown report format {format!r}; expected 'json' or 'csv'")
    return written


def read_report(path: str | os.PathLike) -> EvalReport:
    with open(path) as fh:
        return EvalReport.from_dict(json.load(fh))
