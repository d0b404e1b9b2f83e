from __future__ import annotations

import asyncio
from typing import Callable, List, Optional, Sequence, TypeVar

from .config import default_threads

T = TypeVar("T")
R = TypeVar("R")


async def _gather_bounded(fn: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    gate = asyncio.Semaphore(threads)

    async def _run(item: T) -> R:
        async with gate:
            return await asyncio.to_thread(fn, item)

    return list(await asyncio.gather(*[_run(item) for item in items]))


def parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: Optional[int] = None) -> List[R]:
    """Apply ``fn`` to every item on worker threads; results keep input order.

    Runs inline when one thread is requested or there is a single item.
    Must not be called from inside a running event loop.
    """

    threads = threads or default_threads()
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    return asyncio.run(_gather_bounded(fn, items, threads))


__all__ = ["parallel_map"]
