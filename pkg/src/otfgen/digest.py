"""Cheap content digests used to bind ledgers to stores and fold checksums."""

from __future__ import annotations

import zlib

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a64(data: bytes, state: int = FNV64_OFFSET) -> int:
    """64-bit FNV-1a over ``data``, resumable via ``state``.

    Detects accidental mismatches only; this is not a cryptographic hash.
    """
    h = state
    for byte in data:
        h = ((h ^ byte) * FNV64_PRIME) & _MASK64
    return h


def checksum_fold(data: bytes, state: int = 0) -> int:
    """Incremental CRC-32 fold used as the no-op analytics consumer.

    Forces every generated byte to be materialized (the fold depends on
    all of them) while staying cheap enough to never dominate a run.
    """
    return zlib.crc32(data, state) & 0xFFFFFFFF
