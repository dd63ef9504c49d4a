"""Slab partitioning along z with an optional thread pool.

Results come back in slab order whatever the worker count, so reductions
over them are deterministic.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

# voxels per slab; keeps temporaries in the tens of MB on 512^3 grids
SLAB_VOXELS = 1 << 23


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        env = os.environ.get("MORPHO_THREADS")
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise ValueError(f"MORPHO_THREADS must be a positive integer, got {env!r}") from None
        else:
            threads = 1
    if threads < 1:
        raise ValueError("thread count must be positive")
    return threads


def slab_bounds(shape, slab_voxels: int | None = None) -> list[tuple[int, int]]:
    slab_voxels = slab_voxels or SLAB_VOXELS
    nz = shape[0]
    layer = max(1, int(shape[1]) * int(shape[2]))
    step = max(1, slab_voxels // layer)
    return [(z, min(z + step, nz)) for z in range(0, nz, step)]


def map_slabs(fn, shape, threads: int | None = None, progress=None, slab_voxels: int | None = None):
    """Apply ``fn(z0, z1)`` to every slab; yields results in slab order.

    ``progress`` receives the completed fraction, at most every 5%.
    """
    bounds = slab_bounds(shape, slab_voxels)
    n = len(bounds)
    workers = thread_count(threads)
    last = -1.0

    def report(i):
        nonlocal last
        if progress is None:
            return
        frac = (i + 1) / n
        if frac - last >= 0.05 or i + 1 == n:
            last = frac
            progress(frac)

    if workers == 1 or n == 1:
        for i, (z0, z1) in enumerate(bounds):
            out = fn(z0, z1)
            report(i)
            yield out
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for i, out in enumerate(pool.map(lambda b: fn(*b), bounds)):
            report(i)
            yield out
