"""Append-only JSONL logs of sampled completions."""

from __future__ import annotations

import os
import random
import threading
from datetime import datetime, timezone

from .schema_model import dumps


def timestamp() -> str:
    """UTC ISO-8601 time, pinned by ``SOURCE_DATE_EPOCH`` when set."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


class InspectionLog:
    """Thread-safe JSONL appender. Collects records in memory when *path* is None."""

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = path
        self.records: list[dict] = []
        self._lock = threading.Lock()
        self._fh = None

    def append(self, record: dict) -> None:
        with self._lock:
            if self.path is None:
                self.records.append(record)
                return
            if self._fh is None:
                self._fh = open(self.path, "a", encoding="utf-8")
            self._fh.write(dumps(record) + "\n")

    def close(self) -> None:
        with self._lock:
            if self._fh is not None:
                self._fh.close()
                self._fh = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class Sampler:
    """Seeded Bernoulli draws consumed in row order.

    Keeping every draw in the caller's input order makes the sampled set
    independent of how rows were scheduled across workers.
    """

    def __init__(self, seed: int):
        self._rng = random.Random(seed)

    def draw(self) -> float:
        return self._rng.random()
