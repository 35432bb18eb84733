from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from itertools import islice
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], items: Iterable[T], jobs: int = 1,
                chunksize: int = 16) -> list[R]:
    """``list(map(func, items))``, optionally across ``jobs`` processes.

    Results come back in input order regardless of ``jobs``.
    """
    if jobs is None or jobs <= 1:
        return [func(x) for x in items]
    items = list(items)
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(func, items, chunksize=chunksize))


def chunked(items: Iterable[T], size: int) -> Iterable[list[T]]:
    it = iter(items)
    while True:
        chunk = list(islice(it, size))
        if not chunk:
            return
        yield chunk


def exact_sum(func: Callable[[T], R], items: Iterable[T], start: R, jobs: int = 1,
              chunksize: int = 16) -> R:
    """Sum ``func`` over ``items`` left to right; exact scalars make the result
    independent of ``jobs``."""
    total = start
    for v in ordered_map(func, items, jobs, chunksize):
        total = total + v
    return total
