"""Interleave cascades into one time-stamped edge stream, and its text format."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diffusion import Cascade
from .errors import ConfigError, ParseError

DEFAULT_RATE = 3.0


@dataclass(frozen=True, eq=False)
class TemporalNetwork:
    src: np.ndarray  # int64
    dst: np.ndarray  # int64
    t: np.ndarray  # float64, strictly increasing
    node_count: int = 0

    def __len__(self) -> int:
        return int(self.src.shape[0])

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.src.tolist(), self.dst.tolist(), self.t.tolist()))

    @classmethod
    def from_edges(cls, edges, node_count: int | None = None) -> "TemporalNetwork":
        arr = list(edges)
        src = np.array([e[0] for e in arr], dtype=np.int64)
        dst = np.array([e[1] for e in arr], dtype=np.int64)
        t = np.array([e[2] for e in arr], dtype=np.float64)
        if node_count is None:
            node_count = int(max(src.max(), dst.max()) + 1) if arr else 0
        return cls(src, dst, t, node_count)

    def same_as(self, other: "TemporalNetwork") -> bool:
        return (
            np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.t, other.t)
        )


def combine_cascades(
    cascades: Sequence[Cascade | Sequence[tuple[int, int]]],
    rng: np.random.Generator,
    rate: float = DEFAULT_RATE,
    node_count: int = 0,
) -> TemporalNetwork:
    """Merge cascades into one temporal network.

    Starting from a clock at 0, repeatedly pick a non-empty cascade
    uniformly, pop its first edge, advance the clock by an
    ``Exponential(rate)`` gap and stamp the edge with the clock.
    """
    if not rate > 0:
        raise ConfigError(f"rate must be positive, got {rate}")
    seqs = []
    for c in cascades:
        a = c.activations if isinstance(c, Cascade) else np.asarray(c, dtype=np.int64).reshape(-1, 2)
        if len(a):
            seqs.append(a)
    total = sum(len(a) for a in seqs)
    src = np.empty(total, dtype=np.int64)
    dst = np.empty(total, dtype=np.int64)
    t = np.empty(total, dtype=np.float64)
    heads = [0] * len(seqs)
    alive = list(range(len(seqs)))
    scale = 1.0 / rate
    clock = 0.0
    for i in range(total):
        slot = int(rng.integers(len(alive))) if len(alive) > 1 else 0
        s = alive[slot]
        e = seqs[s][heads[s]]
        heads[s] += 1
        if heads[s] == len(seqs[s]):
            alive.pop(slot)
        gap = rng.exponential(scale)
        while gap <= 0.0:
            gap = rng.exponential(scale)
        clock += gap
        src[i], dst[i], t[i] = e[0], e[1], clock
    return TemporalNetwork(src, dst, t, node_count)


def write_temporal(tn: TemporalNetwork) -> str:
    buf = io.StringIO()
    for s, d, ts in zip(tn.src.tolist(), tn.dst.tolist(), tn.t.tolist()):
        buf.write(f"{s} {d} {ts!r}\n")
    return buf.getvalue()


def read_temporal(text: str | bytes, strict: bool = True) -> TemporalNetwork:
    """Parse ``src dst t`` lines; ``#`` lines and blank lines are skipped.

    With ``strict`` (the default) timestamps must increase strictly;
    otherwise they only must not decrease, and position order breaks ties.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    edges = []
    prev = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise ParseError(f"expected 'src dst t', got {line!r}", lineno)
        try:
            s, d, ts = int(tokens[0]), int(tokens[1]), float(tokens[2])
        except ValueError:
            raise ParseError(f"bad numeric token in {line!r}", lineno) from None
        if s < 0 or d < 0 or s == d:
            raise ParseError(f"invalid endpoints in {line!r}", lineno)
        if not np.isfinite(ts) or ts < 0:
            raise ParseError(f"timestamp must be finite and >= 0, got {tokens[2]}", lineno)
        if prev is not None and (ts <= prev if strict else ts < prev):
            raise ParseError(f"timestamp {ts!r} does not increase (previous {prev!r})", lineno)
        prev = ts
        edges.append((s, d, ts))
    return TemporalNetwork.from_edges(edges)
