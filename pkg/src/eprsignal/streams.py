"""Deterministic random streams and chunked parallel execution.

Every randomized scan partitions its work into fixed-size chunks; chunk k
draws from an independent stream derived from (seed, *path, k) and results
merge in chunk order.  Output is therefore bit-identical for any worker
count, including 1.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

# Samples (or witnesses, trials, ...) per chunk.  Fixed: changing it changes
# which stream produces which draw and breaks replay of recorded seeds.
CHUNK = 8192


def substream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator for a (seed, path) address."""
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    return np.random.default_rng([int(seed), *[int(p) for p in path]])


def chunk_sizes(total: int, chunk: int = CHUNK) -> list[int]:
    """Sizes of the fixed partition of ``total`` items."""
    if total < 0:
        raise ValueError("total must be non-negative")
    out = [chunk] * (total // chunk)
    if total % chunk:
        out.append(total % chunk)
    return out


def run_chunked(
    job: Callable[[int], object], n_chunks: int, workers: int = 1
) -> list:
    """Evaluate job(0..n_chunks-1), possibly in parallel, in index order.

    ``job`` must be pure given its index (it derives its own substream), so
    the result list does not depend on the worker count.
    """
    if workers <= 1 or n_chunks <= 1:
        return [job(k) for k in range(n_chunks)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, range(n_chunks)))


def pool_mean_var(partials: Sequence[tuple[float, float, int]]) -> tuple[float, float, int]:
    """Merge per-chunk (sum, sum of squares, count) into (mean, sample var, n).

    Uses the two-pass-free sums form; fine at the magnitudes handled here.
    Sample variance uses the n-1 divisor and is 0 when n < 2.
    """
    s = 0.0
    s2 = 0.0
    n = 0
    for ps, ps2, pn in partials:
        s += ps
        s2 += ps2
        n += pn
    if n == 0:
        raise ValueError("no samples to pool")
    mean = s / n
    if n < 2:
        return mean, 0.0, n
    var = max(0.0, (s2 - n * mean * mean) / (n - 1))
    return mean, var, n
