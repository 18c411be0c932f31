"""Worker-pool helper honoring the CAVSQ_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_ENV_VAR = "CAVSQ_THREADS"


def worker_count(n_tasks: int) -> int:
    """Number of workers to use for ``n_tasks`` independent evaluations.

    ``CAVSQ_THREADS`` caps the pool size; 0 or unset means auto
    (one worker per CPU, at most one per task).
    """
    raw = os.environ.get(_ENV_VAR, "0").strip()
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{_ENV_VAR} must be an integer, got {raw!r}")
    if cap < 0:
        raise ValueError(f"{_ENV_VAR} must be >= 0, got {cap}")
    auto = os.cpu_count() or 1
    limit = auto if cap == 0 else cap
    return max(1, min(limit, n_tasks))


def map_ordered(fn: Callable[[T], R], items: Sequence[T] | Iterable[T]) -> list[R]:
    """Map ``fn`` over ``items``, preserving order.

    Runs in a thread pool when more than one worker is allowed; results are
    assembled in input order, so output is independent of scheduling.
    """
    items = list(items)
    workers = worker_count(len(items))
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
