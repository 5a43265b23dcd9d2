"""Path-keyed random streams.

Every stream is a PCG64 generator seeded from ``SeedSequence(master_seed,
spawn_key=path)``, where ``path`` is a tuple of integers built from string
tags and indices.  The same path always yields the same stream and
distinct paths never share state, so results do not depend on the order in
which jobs are scheduled.
"""

from __future__ import annotations

import zlib

import numpy as np

SEED_RANGE = 2**20  # protocol seeds k are drawn from [0, 2**20 - 1]


def _key(part: int | str) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    if part < 0:
        raise ValueError(f"stream path components must be non-negative, got {part}")
    return int(part)


class RngHierarchy:
    def __init__(self, master_seed: int):
        self.master_seed = int(master_seed)

    def stream(self, *path: int | str) -> np.random.Generator:
        ss = np.random.SeedSequence(self.master_seed, spawn_key=tuple(_key(p) for p in path))
        return np.random.Generator(np.random.PCG64(ss))

    def protocol_seeds(self, q: int) -> list[int]:
        """Draw ``q`` distinct seeds uniformly from ``[0, 2**20 - 1]``."""
        rng = self.stream("protocol-seeds")
        return [int(k) for k in rng.choice(SEED_RANGE, size=q, replace=False)]
