"""Counting facade over data-plane file IO.

Every seed/noise/batch/ledger transfer goes through this module so a
benchmark can report read/write *instances* as observed integers rather
than estimates. One instance is one whole-file transfer; incremental
appends and in-place patches each count as their own write instance
because they are separate trips to the device. Small config reads
(JSON manifests, CLI configs) are control plane and deliberately do not
flow through here.
"""

from __future__ import annotations

import errno
import os
import threading
from dataclasses import dataclass
from pathlib import Path

from .errors import DiskFull, IoFailure, MissingFile


@dataclass(frozen=True)
class IoCounters:
    """Immutable snapshot of the facade counters."""

    read_instances: int = 0
    write_instances: int = 0
    bytes_read: int = 0
    bytes_written: int = 0

    def __sub__(self, other: "IoCounters") -> "IoCounters":
        return IoCounters(
            self.read_instances - other.read_instances,
            self.write_instances - other.write_instances,
            self.bytes_read - other.bytes_read,
            self.bytes_written - other.bytes_written,
        )

    @property
    def total_instances(self) -> int:
        return self.read_instances + self.write_instances


_lock = threading.Lock()
_reads = 0
_writes = 0
_bytes_read = 0
_bytes_written = 0


def reset() -> None:
    """Zero all counters."""
    global _reads, _writes, _bytes_read, _bytes_written
    with _lock:
        _reads = _writes = _bytes_read = _bytes_written = 0


def snapshot() -> IoCounters:
    """Current totals; monotone non-decreasing between resets."""
    with _lock:
        return IoCounters(_reads, _writes, _bytes_read, _bytes_written)


def _count_read(n: int) -> None:
    global _reads, _bytes_read
    with _lock:
        _reads += 1
        _bytes_read += n


def _count_write(n: int) -> None:
    global _writes, _bytes_written
    with _lock:
        _writes += 1
        _bytes_written += n


def _trans(exc: OSError) -> IoFailure:
    if exc.errno == errno.ENOSPC:
        return DiskFull(str(exc))
    return IoFailure(str(exc))


def counted_read_file(path: str | os.PathLike) -> bytes:
    """Read a whole file, counting one read instance plus its bytes."""
    p = Path(path)
    if not p.exists():
        raise MissingFile(str(p))
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise _trans(exc) from exc
    _count_read(len(data))
    return data


def counted_write_file(path: str | os.PathLike, data: bytes) -> int:
    """Write (or overwrite) a whole file as one write instance."""
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise _trans(exc) from exc
    _count_write(len(data))
    return len(data)


def counted_append_file(path: str | os.PathLike, data: bytes) -> int:
    """Append to an existing file; each call is one write instance."""
    try:
        with open(path, "ab") as fh:
            fh.write(data)
    except OSError as exc:
        raise _trans(exc) from exc
    _count_write(len(data))
    return len(data)


def counted_patch_file(path: str | os.PathLike, offset: int, data: bytes) -> int:
    """Overwrite ``data`` at ``offset`` in place; one write instance."""
    try:
        with open(path, "r+b") as fh:
            fh.seek(offset)
            fh.write(data)
    except OSError as exc:
        raise _trans(exc) from exc
    _count_write(len(data))
    return len(data)
