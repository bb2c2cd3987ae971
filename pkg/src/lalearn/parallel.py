"""Deterministic worker-pool mapping.

Tasks carry their own derived seeds, results are returned in task order,
and any reduction happens in that canonical order, so output is identical
for every worker count.
"""

from __future__ import annotations

import multiprocessing


def parallel_map(fn, tasks, workers: int = 1) -> list:
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with multiprocessing.get_context().Pool(min(workers, len(tasks))) as pool:
        return pool.map(fn, tasks, chunksize=1)
