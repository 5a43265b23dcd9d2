"""Evaluate diffusion models through the temporal-motif features of the networks they generate."""

__version__ = "0.1.0"

from .diffusion import Cascade, ModelSpec, run_cascade, select_seeds
from .errors import ConfigError, MotifEvalError, ParseError
from .graph_io import StaticGraph, generate_synthetic, graph_stats, parse_edge_list
from .metrics import (
    EvalConfig,
    distance,
    model_distance,
    motif_feature,
    probability_diagnostics,
    separability,
    stability,
    stability_score,
)
from .motif import MotifVector, classify_triple, count_bruteforce, count_fast, normalize, sequence_count3
from .temporal import TemporalNetwork, combine_cascades, read_temporal, write_temporal
