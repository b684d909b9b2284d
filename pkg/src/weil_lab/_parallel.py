from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def ordered_map(func, items, workers: int = 1, chunks_per_worker: int = 4) -> list:
    """map(func, items) evaluated across processes; output order always follows input order."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [func(x) for x in items]
    chunksize = max(1, len(items) // (workers * chunks_per_worker))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunksize))
