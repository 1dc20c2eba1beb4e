"""
Deterministic sample sharding for Monte Carlo runs.

A sample budget is split into fixed-size shards; shard i always draws from
the generator seeded by SeedSequence(seed, spawn_key=(i,)) and results are
reduced in shard order.  Estimates are therefore bit-identical for any
worker count, and workers only change wall-clock time.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence

import numpy as np

__all__ = ["shard_counts", "shard_rng", "map_shards", "resolve_workers"]

DEFAULT_SHARD = 4096


def shard_counts(total: int, shard_size: int = DEFAULT_SHARD) -> List[int]:
    if total <= 0:
        raise ValueError("sample count must be positive")
    full, rem = divmod(total, shard_size)
    return [shard_size] * full + ([rem] if rem else [])


def shard_rng(seed, shard_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(shard_index,)))


def resolve_workers(workers: Optional[int]) -> int:
    if workers is None or workers <= 0:
        import os

        return os.cpu_count() or 1
    return workers


def map_shards(fn: Callable, args: Sequence[tuple], workers: int = 1) -> list:
    """Run fn(*a) for each arg tuple, preserving order; pool only if workers > 1."""
    if workers <= 1 or len(args) <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*args)))
