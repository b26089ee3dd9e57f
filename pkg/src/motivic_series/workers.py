"""Process-pool fan-out for independent term computations."""

import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Any, TypeVar

from .rootsys import DEFAULT_RANK_CAP, RootSystem, parse_root_system_label

logger = logging.getLogger(__name__)

T = TypeVar("T")


@lru_cache(maxsize=16)
def cached_root_system(label: str, rank_cap: int = DEFAULT_RANK_CAP) -> RootSystem:
    """Root systems rebuilt inside worker processes are built once per process."""
    return parse_root_system_label(label, rank_cap)


def parallel_map(fn: Callable[[Any], T], payloads: Iterable[Any], workers: int = 1) -> list[T]:
    """
    Apply ``fn`` to every payload and return the results in payload order.

    With ``workers <= 1`` everything runs in the calling process. ``fn`` must be a
    module-level function and payloads must be picklable when a pool is used.
    """
    items = list(payloads)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug("dispatching %d payloads to %d worker processes", len(items), workers)
    chunksize = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items, chunksize=chunksize))
