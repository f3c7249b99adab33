"""Append-only parameter ledger with a fixed-width binary file form.

Ledger file ("OTFL"):
    magic          4 bytes  b"OTFL"
    version        u32 LE   currently 1
    rng_seed       u64 LE
    batch_size     u32 LE
    manifest_dig   u64 LE   FNV-1a of the store manifest this run used
    record_count   u64 LE
    records        record_count x 40 bytes

Record (40 bytes, little-endian):
    batch_index    u32
    profile_index  u32      position within the batch
    s              u64      seed index
    m              u64      noise index
    lambda1        f64
    lambda2        f64

Records are buffered in memory and flushed by ``save`` as a single write
instance; the byte size of the file is affine in the record count and
independent of how long the profiles themselves are.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from . import iostats
from .errors import BadMagic, DigestMismatch, OrderViolation, Truncated, UnknownBatch, VersionUnsupported
from .profiles import GenParams, SeedStore

LEDGER_MAGIC = b"OTFL"
LEDGER_VERSION = 1
HEADER = struct.Struct("<4sIQIQQ")
RECORD = struct.Struct("<IIQQdd")
RECORD_WIDTH = RECORD.size  # 40 bytes
COUNT_OFFSET = HEADER.size - 8  # record_count is the trailing header field


@dataclass(frozen=True)
class LedgerRecord:
    """One profile's generation parameters, keyed by (batch, position)."""

    batch_index: int
    profile_index: int
    params: GenParams

    @property
    def key(self) -> tuple[int, int]:
        return (self.batch_index, self.profile_index)

    def pack(self) -> bytes:
        p = self.params
        return RECORD.pack(self.batch_index, self.profile_index, p.s, p.m, p.lambda1, p.lambda2)

    @classmethod
    def unpack(cls, data: bytes, offset: int = 0) -> "LedgerRecord":
        b, i, s, m, l1, l2 = RECORD.unpack_from(data, offset)
        return cls(b, i, GenParams(s, m, l1, l2))


class Ledger:
    """In-memory record buffer plus the run header that identifies it."""

    def __init__(self, rng_seed: int, batch_size: int, manifest_digest: int,
                 records: Sequence[LedgerRecord] = ()):
        self.rng_seed = rng_seed
        self.batch_size = batch_size
        self.manifest_digest = manifest_digest
        self.records: list[LedgerRecord] = []
        if records:
            self.append(records)

    def __len__(self) -> int:
        return len(self.records)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ledger):
            return NotImplemented
        return (
            self.rng_seed == other.rng_seed
            and self.batch_size == other.batch_size
            and self.manifest_digest == other.manifest_digest
            and self.records == other.records
        )

    def append(self, records: Iterable[LedgerRecord]) -> None:
        """Buffer records in memory; keys must strictly increase.

        No disk write happens here; persistence is a single ``save``.
        """
        last = self.records[-1].key if self.records else None
        for rec in records:
            if last is not None and rec.key <= last:
                raise OrderViolation(f"record key {rec.key} does not follow {last}")
            self.records.append(rec)
            last = rec.key

    def records_for_batch(self, batch_index: int) -> list[LedgerRecord]:
        found = [r for r in self.records if r.batch_index == batch_index]
        if not found:
            raise UnknownBatch(f"no records for batch {batch_index}")
        return found

    def batch_indices(self) -> list[int]:
        seen: list[int] = []
        for rec in self.records:
            if not seen or seen[-1] != rec.batch_index:
                seen.append(rec.batch_index)
        return seen

    def header_bytes(self, record_count: int | None = None) -> bytes:
        count = len(self.records) if record_count is None else record_count
        return HEADER.pack(LEDGER_MAGIC, LEDGER_VERSION, self.rng_seed,
                           self.batch_size, self.manifest_digest, count)

    def save(self, path: str | Path) -> int:
        """Persist the whole ledger as one write instance; returns bytes written."""
        payload = self.header_bytes() + b"".join(r.pack() for r in self.records)
        return iostats.counted_write_file(path, payload)

    @classmethod
    def load(cls, path: str | Path) -> "Ledger":
        data = iostats.counted_read_file(path)
        if len(data) < HEADER.size:
            raise Truncated(f"{path}: shorter than the ledger header")
        magic, version, rng_seed, batch_size, digest, count = HEADER.unpack_from(data)
        if magic != LEDGER_MAGIC:
            raise BadMagic(f"{path}: expected {LEDGER_MAGIC!r}, found {magic!r}")
        if version != LEDGER_VERSION:
            raise VersionUnsupported(f"{path}: ledger version {version}")
        expected = HEADER.size + count * RECORD_WIDTH
        if len(data) < expected:
            raise Truncated(f"{path}: header declares {count} records but file holds fewer")
        ledger = cls(rng_seed, batch_size, digest)
        records = [LedgerRecord.unpack(data, HEADER.size + i * RECORD_WIDTH) for i in range(count)]
        ledger.append(records)
        return ledger

    def check_store(self, store: SeedStore) -> None:
        """Raise unless this ledger was produced against ``store``'s manifest."""
        if self.manifest_digest != store.manifest_digest:
            raise DigestMismatch(
                f"ledger digest {self.manifest_digest:#x} != store digest {store.manifest_digest:#x}"
            )


class LedgerWriter:
    """Incremental spill writer for runs too long to buffer parameters in RAM.

    Off by default. Writes the header up front (count 0), appends record
    chunks as they are spilled, and patches the true count on close; each
    step is its own counted write instance, so spilling trades the
    single-write property for bounded parameter memory.
    """

    def __init__(self, path: str | Path, rng_seed: int, batch_size: int, manifest_digest: int):
        self.path = Path(path)
        self._count = 0
        self._last_key: tuple[int, int] | None = None
        header = HEADER.pack(LEDGER_MAGIC, LEDGER_VERSION, rng_seed, batch_size, manifest_digest, 0)
        self._bytes = iostats.counted_write_file(self.path, header)
        self._closed = False

    def spill(self, records: Sequence[LedgerRecord]) -> None:
        if self._closed:
            raise OrderViolation("writer already finalized")
        if not records:
            return
        for rec in records:
            if self._last_key is not None and rec.key <= self._last_key:
                raise OrderViolation(f"record key {rec.key} does not follow {self._last_key}")
            self._last_key = rec.key
        self._bytes += iostats.counted_append_file(self.path, b"".join(r.pack() for r in records))
        self._count += len(records)

    def finalize(self) -> int:
        """Patch the record count into the header; returns total file bytes."""
        if not self._closed:
            iostats.counted_patch_file(self.path, COUNT_OFFSET, struct.pack("<Q", self._count))
            self._closed = True
        return self._bytes
