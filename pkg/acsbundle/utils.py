import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

LOGGER = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "ACS_THREADS"


class ResourceLimitError(ValueError):
    """Raised when a request would exceed one of the documented resource caps."""


def allow_long_int_strings() -> None:
    """
    Lift the interpreter limit on int <-> decimal string conversion (4300 digits by default),
    so p**e and the certificate values serialise at any size.
    """
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)


def worker_count(requested: Optional[int] = None) -> int:
    """
    Resolve the number of workers used by grid scans and verification suites.

    An explicit `requested` value wins, then the ACS_THREADS environment variable, then os.cpu_count().
    """
    if requested is not None:
        if requested < 1:
            raise ValueError(f"worker count must be >= 1, got {requested}")
        return requested

    raw = os.environ.get(THREADS_ENV)
    if raw is not None:
        try:
            value = int(raw)
        except ValueError:
            value = 0
        if value >= 1:
            return value
        LOGGER.warning("ignoring invalid %s=%r", THREADS_ENV, raw)

    return os.cpu_count() or 1


def parallel_map(
    fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None, chunksize: int = 1
) -> List[R]:
    """
    Apply `fn` to every item and return the results in input order.

    `fn` must be a picklable top-level function (or a functools.partial of one) when more than one worker is used.
    """
    items = list(items)
    workers = min(worker_count(workers), max(len(items), 1))

    if workers == 1:
        return [fn(item) for item in items]

    LOGGER.debug("dispatching %d work items to %d workers", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items, chunksize=chunksize))
