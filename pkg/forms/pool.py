"""Batched, optionally threaded evaluation of sweeps over sample grids."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional

import numpy as np

from .config import DEFAULT_JOBS, SWEEP_BATCH_SIZE

logger = logging.getLogger(__name__)

BatchFn = Callable[[slice], np.ndarray]


class SweepManager:
    """Runs a per-batch evaluation over a sample range and reduces in batch order."""

    def __init__(self, num_workers: Optional[int] = None, batch_size: int = SWEEP_BATCH_SIZE):
        self.num_workers = max(1, int(num_workers or DEFAULT_JOBS))
        self.batch_size = max(1, int(batch_size))
        self._executor: Optional[ThreadPoolExecutor] = None

    def start(self):
        """Start the thread pool when more than one worker is configured."""
        if self.num_workers > 1 and self._executor is None:
            self._executor = ThreadPoolExecutor(max_workers=self.num_workers, thread_name_prefix="sweep")
            logger.debug(f"Started {self.num_workers} sweep workers")
        return self

    def stop(self):
        """Shut the pool down and wait for running batches."""
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()

    def batches(self, total: int) -> List[slice]:
        """Contiguous sample slices of at most ``batch_size`` points."""
        return [slice(i, min(i + self.batch_size, total)) for i in range(0, total, self.batch_size)]

    def map(self, fn: BatchFn, total: int) -> np.ndarray:
        """Evaluate ``fn`` on every batch and concatenate in order."""
        parts = self.batches(total)
        if not parts:
            return np.zeros(0)
        if self._executor is None or len(parts) == 1:
            results = [fn(b) for b in parts]
        else:
            results = list(self._executor.map(fn, parts))
        return np.concatenate(results)
