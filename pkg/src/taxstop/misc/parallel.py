"""
Deterministic parallel map for the embarrassingly parallel parts of the
package (Monte Carlo blocks, sweep points, refinement studies).

Threads rather than processes: the heavy lifting happens in numpy and in the
compiled PSOR kernel, both of which release the GIL.
"""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable
from typing import Iterable
from typing import List
from typing import Optional
from typing import TypeVar

_logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def default_workers() -> int:
    """Number of worker threads used when the caller does not say."""
    return min(8, os.cpu_count() or 1)


def ordered_map(
    fun: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None
) -> List[R]:
    """Apply a function to every item, possibly in parallel.

    Args:
        fun: Function of one argument.
        items: Inputs.
        workers: Number of threads. :code:`None` uses
            :py:func:`default_workers`; 1 runs everything in the calling
            thread.

    Returns:
        The results in input order, whatever order they finished in. The
        first exception raised by :code:`fun` is re-raised.
    """
    items = list(items)
    if workers is None:
        workers = default_workers()
    if workers < 1:
        raise ValueError(f'workers must be positive, got [{workers}].')
    workers = min(workers, len(items)) if items else 1
    if workers == 1:
        return [fun(item) for item in items]
    _logger.debug(f'Mapping [{len(items)}] items over [{workers}] threads.')
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fun, items))
