"""Worker-count plumbing shared by the sweep and ensemble runners.

Results are always assembled in task-index order, so the outputs do not
depend on scheduling.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "JUMPFEED_THREADS"


def worker_count() -> int:
    """Worker cap from the JUMPFEED_THREADS env var; defaults to 1."""
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}")
    return n


def run_indexed(tasks, workers: int) -> list:
    """Run zero-argument tasks, returning results in task order."""
    if workers <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [f.result() for f in futures]
