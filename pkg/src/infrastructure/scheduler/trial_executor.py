"""
Trial executor using a thread pool.
LAPACK calls release the GIL, so trials overlap; results always come back in
submission order.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class TrialExecutor:
    """
    Runs independent trials, concurrently unless single-threaded.
    Each trial must own its random stream so results do not depend on scheduling.
    """

    def __init__(self, max_workers: int = 4, single_thread: bool = False):
        """
        Initialize the trial executor.

        Args:
            max_workers: Pool size for concurrent runs
            single_thread: Run trials inline, in order
        """
        self._max_workers = max(1, int(max_workers))
        self._single_thread = single_thread or self._max_workers == 1

    @property
    def single_thread(self) -> bool:
        return self._single_thread

    def with_single_thread(self, single_thread: bool) -> "TrialExecutor":
        """Same pool size, possibly forced inline."""
        return TrialExecutor(self._max_workers, single_thread or self._single_thread)

    def map(self, trial: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """
        Run `trial` on every item; the i-th result belongs to the i-th item.
        The first trial exception is re-raised after logging.
        """
        if self._single_thread or len(items) <= 1:
            return [trial(item) for item in items]

        logger.debug(f"Running {len(items)} trials on {self._max_workers} threads")
        with ThreadPoolExecutor(max_workers=self._max_workers) as pool:
            futures = [pool.submit(trial, item) for item in items]
            results = []
            for index, future in enumerate(futures):
                try:
                    results.append(future.result())
                except Exception as e:
                    logger.error(f"Trial {index} failed: {e}")
                    for pending in futures[index + 1:]:
                        pending.cancel()
                    raise
            return results
