"""Small shared helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "CAYLEY_DIRAC_THREADS"


def thread_cap() -> int:
    """Parallelism cap from the environment; defaults to sequential."""
    raw = os.environ.get(THREADS_ENV, "")
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Map preserving input order; runs threaded only when the cap allows.

    Audits are pure functions, so the only observable difference under
    threading is wall time; results are aggregated in submission order
    to keep reports deterministic.
    """
    work = list(items)
    workers = min(thread_cap(), len(work))
    if workers <= 1:
        return [fn(item) for item in work]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, work))
