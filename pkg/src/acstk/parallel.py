"""Deterministic worker-pool helpers.

Thread count comes from the ACSTK_THREADS environment variable (0 or
unset means one worker per CPU).  Results are always assembled in input
order, so for pure per-item functions the output is byte-identical
whatever the thread count; nothing in the toolkit is allowed to depend
on execution order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

from .errors import ValidationError

THREADS_ENV = "ACSTK_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads() -> int:
    """Worker count from ACSTK_THREADS; 0 or unset selects the CPU count."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw == "":
        requested = 0
    else:
        try:
            requested = int(raw)
        except ValueError:
            raise ValidationError(
                f"{THREADS_ENV} must be a non-negative integer, got {raw!r}"
            ) from None
        if requested < 0:
            raise ValidationError(f"{THREADS_ENV} must be non-negative, got {requested}")
    if requested == 0:
        return os.cpu_count() or 1
    return requested


def map_indexed(fn: Callable[[T], R], items: Sequence[T] | Iterable[T]) -> list[R]:
    """Apply a pure function to every item, preserving input order.

    Sequential for a single worker; otherwise a thread pool whose results
    are collected in submission order, never completion order.
    """
    items = list(items)
    threads = resolve_threads()
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
