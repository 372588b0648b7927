"""Order preserving process pool map for sweeps."""
import logging
from os import cpu_count
from typing import Callable, Iterable, TypeVar
from multiprocessing import Pool

from palindist.default_config import Settings, get_settings, set_settings

T = TypeVar("T")
R = TypeVar("R")


def _init_worker(settings: Settings):
    set_settings(settings)


def resolve_workers(workers: int | None) -> int:
    """``None`` or ``0`` means one worker per CPU."""
    if workers is None or workers == 0:
        return cpu_count() or 1
    if workers < 0:
        raise ValueError(f"ERROR: number of workers must be >= 0, got {workers}")
    return workers


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int | None = 1, chunksize: int = 1) -> list[R]:
    """``list(map(func, items))``, spread over a process pool when ``workers > 1``.

    Results come back in input order for any worker count, so reports built
    from them do not depend on ``workers``. ``func`` must be picklable (a
    module level function or a ``functools.partial`` of one).
    """
    items = list(items)
    workers = min(resolve_workers(workers), max(len(items), 1))
    if workers <= 1:
        return list(map(func, items))
    logging.debug(f"parallel_map: {len(items)} items on {workers} workers")
    with Pool(processes=workers, initializer=_init_worker, initargs=(get_settings(),)) as pool:
        return pool.map(func, items, chunksize=chunksize)
