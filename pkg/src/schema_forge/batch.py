"""Streaming JSONL input, order-preserving parallel maps and run manifests."""

from __future__ import annotations

import hashlib
import itertools
import multiprocessing
import os
from typing import Callable, Iterable, Iterator

from . import __version__
from .schema_model import JsonParseError, dumps, parse_json

BATCH_PER_WORKER = 64


class InputError(Exception):
    """Malformed input data; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


class DigestingReader:
    """Yields ``(lineno, text)`` for non-blank lines while hashing every byte read."""

    def __init__(self, path: str | os.PathLike):
        self.path = path
        self._sha = hashlib.sha256()

    def __iter__(self) -> Iterator[tuple[int, str]]:
        with open(self.path, "rb") as fh:
            for lineno, raw in enumerate(fh, start=1):
                self._sha.update(raw)
                try:
                    text = raw.decode("utf-8")
                except UnicodeDecodeError as exc:
                    raise InputError(lineno, f"invalid UTF-8 ({exc.reason})") from None
                if text.strip():
                    yield lineno, text

    @property
    def digest(self) -> str:
        return "sha256:" + self._sha.hexdigest()


def parse_row(lineno: int, text: str, required: Iterable[str] = ()) -> dict:
    try:
        row = parse_json(text)
    except JsonParseError as exc:
        raise InputError(lineno, f"not valid JSON: {exc}") from None
    if not isinstance(row, dict):
        raise InputError(lineno, "row must be a JSON object")
    missing = [k for k in required if k not in row]
    if missing:
        raise InputError(lineno, f"missing field(s) {', '.join(missing)}")
    return row


def _guarded(fn, item):
    try:
        return False, fn(item)
    except InputError as exc:
        return True, (exc.lineno, exc.message)


class _Guard:
    def __init__(self, fn):
        self.fn = fn

    def __call__(self, item):
        return _guarded(self.fn, item)


def ordered_map(fn: Callable, items: Iterable, jobs: int = 1) -> Iterator:
    """``map(fn, items)`` across *jobs* processes, results in input order.

    Items are consumed in bounded batches, so memory does not grow with the
    input size. *fn* must be picklable when ``jobs > 1``. An
    :class:`InputError` raised by *fn* is re-raised here in order.
    """
    guard = _Guard(fn)
    if jobs <= 1:
        results: Iterable = map(guard, items)
        for failed, value in results:
            if failed:
                raise InputError(*value)
            yield value
        return
    it = iter(items)
    with multiprocessing.Pool(jobs) as pool:
        while True:
            batch = list(itertools.islice(it, jobs * BATCH_PER_WORKER))
            if not batch:
                break
            for failed, value in pool.map(guard, batch, chunksize=BATCH_PER_WORKER):
                if failed:
                    raise InputError(*value)
                yield value


def file_digest(path) -> str:
    sha = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            sha.update(block)
    return "sha256:" + sha.hexdigest()


def manifest_path(out_path) -> str:
    return f"{os.fspath(out_path)}.manifest.json"


class RunManifest:
    """Written before any data (status ``running``) and finalized afterwards."""

    def __init__(self, out_path, command: str, config: dict, seed: int):
        self.path = manifest_path(out_path)
        self.data = {
            "command": command,
            "config_snapshot": config,
            "seed": seed,
            "input_digest": None,
            "output_digests": {},
            "tool_version": __version__,
            "status": "running",
        }
        self._write()

    def _write(self) -> None:
        with open(self.path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps(self.data, indent=2) + "\n")

    def finalize(self, input_digest: str | None, outputs: Iterable, status: str = "complete") -> None:
        self.data["input_digest"] = input_digest
        self.data["output_digests"] = {
            os.path.basename(os.fspath(p)): file_digest(p) for p in outputs if p and os.path.exists(p)
        }
        self.data["status"] = status
        self._write()
