"""Domain types for seed stores and synthetic profiles, plus their wire format.

Profile files ("OTF1"):
    magic     4 bytes  b"OTF1"
    id        u32 LE
    length    u32 LE   sample count L
    label     u8       0=Commercial, 1=Residential, 255=noise profile
    samples   L x f64 LE

A batch written to disk is simply the concatenation of one OTF1 record
per profile, with ids numbered globally (batch_index * batch_size + i),
so regenerated batch files are byte-identical to originally written ones.
"""

from __future__ import annotations

import enum
import json
import struct
import weakref
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import iostats
from .digest import fnv1a64
from .errors import (
    BadMagic,
    EmptyStore,
    FormatError,
    LengthMismatch,
    MissingFile,
    NonFiniteSample,
    Truncated,
)

PROFILE_MAGIC = b"OTF1"
PROFILE_HEADER = struct.Struct("<4sIIB")  # magic, id, length, label code
LABEL_CODE_NOISE = 255

MANIFEST_KEYS = {"resolution_seconds", "seeds", "noises"}


class Label(enum.IntEnum):
    """Customer class a seed profile represents; the wire code is the value."""

    COMMERCIAL = 0
    RESIDENTIAL = 1


class AllocationTracker:
    """Counts live synthetic profiles so tests can assert bounded memory.

    Relies on CPython's prompt refcount-driven finalization; ``peak`` is
    the high-water mark of simultaneously live profiles since ``reset``.
    """

    def __init__(self):
        self.live = 0
        self.peak = 0

    def reset(self) -> None:
        self.live = 0
        self.peak = 0

    def track(self, obj) -> None:
        self.live += 1
        if self.live > self.peak:
            self.peak = self.live
        weakref.finalize(obj, self._release)

    def _release(self) -> None:
        self.live -= 1


#: Test hook: every SyntheticProfile registers here on construction.
profile_allocations = AllocationTracker()


@dataclass(frozen=True, eq=False)
class SeedProfile:
    """A reference consumption series synthetic profiles are scaled from."""

    id: int
    values: np.ndarray
    resolution_seconds: int
    label: Label


@dataclass(frozen=True, eq=False)
class NoiseProfile:
    """A same-length series mixed into the seed during synthesis."""

    id: int
    values: np.ndarray


@dataclass(frozen=True)
class GenParams:
    """The four scalars sufficient to regenerate one synthetic profile."""

    s: int
    m: int
    lambda1: float
    lambda2: float

    def validate(self, store: "SeedStore") -> None:
        from .errors import IndexOutOfRange

        if not (0 <= self.s < len(store.seeds)):
            raise IndexOutOfRange(f"seed index {self.s} not in store of {len(store.seeds)}")
        if not (0 <= self.m < len(store.noises)):
            raise IndexOutOfRange(f"noise index {self.m} not in store of {len(store.noises)}")
        if not (0.0 <= self.lambda1 <= 1.0 and 0.0 <= self.lambda2 <= 1.0):
            raise ValueError("lambda weights must lie in [0, 1]")


@dataclass(frozen=True, eq=False)
class SyntheticProfile:
    """One generated series plus the parameters that produced it."""

    values: np.ndarray
    params: GenParams
    label: Label

    def __post_init__(self):
        profile_allocations.track(self)


@dataclass(frozen=True, eq=False)
class Batch:
    """One streamed unit of synthetic data.

    ``rng_state_before`` is the generator state snapshot taken before the
    batch's parameter draws; it is None for batches rebuilt from a ledger,
    where no generator state exists.
    """

    index: int
    profiles: list[SyntheticProfile]
    rng_state_before: int | None


@dataclass(eq=False)
class SeedStore:
    """The fixed seed/noise library, fully resident in memory after load."""

    seeds: list[SeedProfile]
    noises: list[NoiseProfile]
    profile_length: int
    resolution_seconds: int
    manifest_digest: int = 0
    file_bytes: int = 0  # on-disk footprint of the library, 0 for in-memory stores

    def __post_init__(self):
        if not self.seeds or not self.noises:
            raise EmptyStore("store needs at least one seed and one noise profile")
        for p in [*self.seeds, *self.noises]:
            if len(p.values) != self.profile_length:
                raise LengthMismatch(
                    f"profile {p.id} has {len(p.values)} samples, store expects {self.profile_length}"
                )
            if not np.isfinite(p.values).all():
                raise NonFiniteSample(f"profile {p.id} contains non-finite samples")

    @property
    def file_count(self) -> int:
        return len(self.seeds) + len(self.noises)


def pack_profile(profile_id: int, values: np.ndarray, label_code: int) -> bytes:
    header = PROFILE_HEADER.pack(PROFILE_MAGIC, profile_id, len(values), label_code)
    return header + np.asarray(values, dtype="<f8").tobytes()


def unpack_profile(data: bytes, source: str = "<bytes>") -> tuple[int, int, np.ndarray]:
    """Parse one OTF1 record; returns (id, label_code, samples)."""
    if len(data) < PROFILE_HEADER.size:
        raise Truncated(f"{source}: shorter than the profile header")
    magic, profile_id, length, label_code = PROFILE_HEADER.unpack_from(data)
    if magic != PROFILE_MAGIC:
        raise BadMagic(f"{source}: expected {PROFILE_MAGIC!r}, found {magic!r}")
    expected = PROFILE_HEADER.size + 8 * length
    if len(data) < expected:
        raise Truncated(f"{source}: declares {length} samples but holds fewer")
    samples = np.frombuffer(data, dtype="<f8", count=length, offset=PROFILE_HEADER.size)
    return profile_id, label_code, samples.astype(np.float64)


def write_profile_file(path: str | Path, profile_id: int, values: np.ndarray, label_code: int) -> int:
    return iostats.counted_write_file(path, pack_profile(profile_id, values, label_code))


def read_profile_file(path: str | Path) -> tuple[int, int, np.ndarray]:
    """Load one profile file through the counting facade (one read instance)."""
    return unpack_profile(iostats.counted_read_file(path), source=str(path))


def manifest_digest(manifest_path: str | Path) -> int:
    """FNV-1a over the raw manifest bytes; binds ledgers to one store."""
    p = Path(manifest_path)
    if not p.exists():
        raise MissingFile(str(p))
    return fnv1a64(p.read_bytes())


def load_seed_store(manifest_path: str | Path) -> SeedStore:
    """Load every profile the manifest references into memory.

    The manifest is UTF-8 JSON {resolution_seconds, seeds: [paths],
    noises: [paths]} with paths relative to the manifest's directory.
    Each referenced file is read exactly once through the IO facade;
    the manifest itself is config, not data, and is read uncounted.
    """
    p = Path(manifest_path)
    if not p.exists():
        raise MissingFile(str(p))
    raw = p.read_bytes()
    try:
        manifest = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{p}: manifest is not valid JSON: {exc}") from exc

    unknown = set(manifest) - MANIFEST_KEYS
    if unknown:
        raise FormatError(f"{p}: unknown manifest keys {sorted(unknown)}")
    missing = MANIFEST_KEYS - set(manifest)
    if missing:
        raise FormatError(f"{p}: manifest missing keys {sorted(missing)}")

    resolution = int(manifest["resolution_seconds"])
    if resolution < 1:
        raise FormatError(f"{p}: resolution_seconds must be >= 1")

    before = iostats.snapshot()
    root = p.parent

    seeds: list[SeedProfile] = []
    for rel in manifest["seeds"]:
        profile_id, label_code, values = read_profile_file(root / rel)
        if label_code not in (Label.COMMERCIAL, Label.RESIDENTIAL):
            raise FormatError(f"{root / rel}: seed file carries non-seed label code {label_code}")
        seeds.append(SeedProfile(profile_id, values, resolution, Label(label_code)))

    noises: list[NoiseProfile] = []
    for rel in manifest["noises"]:
        profile_id, label_code, values = read_profile_file(root / rel)
        if label_code != LABEL_CODE_NOISE:
            raise FormatError(f"{root / rel}: noise file carries label code {label_code}")
        noises.append(NoiseProfile(profile_id, values))

    if not seeds or not noises:
        raise EmptyStore(f"{p}: manifest lists no seeds or no noises")

    length = len(seeds[0].values)
    store = SeedStore(
        seeds=seeds,
        noises=noises,
        profile_length=length,
        resolution_seconds=resolution,
        manifest_digest=fnv1a64(raw),
        file_bytes=(iostats.snapshot() - before).bytes_read,
    )
    _check_unique_ids(store)
    return store


def _check_unique_ids(store: SeedStore) -> None:
    seed_ids = [s.id for s in store.seeds]
    if len(set(seed_ids)) != len(seed_ids):
        raise FormatError("duplicate seed profile ids in store")


def serialize_batch(batch: Batch) -> bytes:
    """Deterministic byte form of a batch: one OTF1 record per profile.

    Profile ids are global (batch_index * batch_size + position) so that
    a regenerated batch serializes to the same bytes as the original.
    """
    n = len(batch.profiles)
    parts = []
    for i, profile in enumerate(batch.profiles):
        parts.append(pack_profile(batch.index * n + i, profile.values, int(profile.label)))
    return b"".join(parts)


def batch_file_name(batch_index: int) -> str:
    return f"batch-{batch_index:05d}.otf1"
