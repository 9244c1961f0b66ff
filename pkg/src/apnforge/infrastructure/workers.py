"""Executors that evaluate work units in input order."""

from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor

from apnforge.domain.campaign import UnitExecutor, UnitRecord, WorkUnit

CHUNK_SIZE = 16


class SerialExecutor:
    """Evaluate units one after another in the calling process."""

    def map(
        self, fn: Callable[[WorkUnit], UnitRecord], units: Iterable[WorkUnit]
    ) -> Iterator[UnitRecord]:
        """Evaluate ``fn`` on every unit in order."""
        return map(fn, units)


class ProcessPoolUnitExecutor:
    """Evaluate units in a process pool; results keep input order."""

    def __init__(self, workers: int) -> None:
        """Initialize the executor.

        Args:
            workers: Number of worker processes.
        """
        self.workers = workers

    def map(
        self, fn: Callable[[WorkUnit], UnitRecord], units: Iterable[WorkUnit]
    ) -> Iterator[UnitRecord]:
        """Evaluate ``fn`` on every unit across the pool."""
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            yield from pool.map(fn, units, chunksize=CHUNK_SIZE)


def create_executor(threads: int) -> UnitExecutor:
    """Serial executor for one thread, a process pool otherwise."""
    if threads > 1:
        return ProcessPoolUnitExecutor(threads)
    return SerialExecutor()
