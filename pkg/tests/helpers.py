"""Shared builders for in-memory stores and serialized run output."""

from __future__ import annotations

import numpy as np

from otfgen import fixtures
from otfgen.generator import GeneratorConfig, SyntheticDataGenerator
from otfgen.profiles import NoiseProfile, SeedProfile, SeedStore, serialize_batch


def make_store(n_seeds: int = 3, n_noises: int = 4, length: int = 240,
               resolution: int = 360) -> SeedStore:
    """In-memory store built from the fixture shape formulas (digest 0)."""
    seeds = [
        SeedProfile(i, fixtures.seed_values(i, length), resolution, fixtures.seed_label(i))
        for i in range(n_seeds)
    ]
    noises = [NoiseProfile(m, fixtures.noise_values(m, length)) for m in range(n_noises)]
    return SeedStore(seeds=seeds, noises=noises, profile_length=length,
                     resolution_seconds=resolution)


def uniform_store(n_seeds: int, n_noises: int, length: int,
                  seed_fill: float = 1.0, noise_fill: float = 0.5) -> SeedStore:
    """Constant-valued store for tests that need trivially predictable samples."""
    seeds = [
        SeedProfile(i, np.full(length, seed_fill + i), 1, fixtures.seed_label(i))
        for i in range(n_seeds)
    ]
    noises = [NoiseProfile(m, np.full(length, noise_fill)) for m in range(n_noises)]
    return SeedStore(seeds=seeds, noises=noises, profile_length=length, resolution_seconds=1)


def stream_bytes(store: SeedStore, rng_seed: int, batch_size: int, num_batches: int) -> bytes:
    """Concatenated serialized batches of a fresh streaming run."""
    gen = SyntheticDataGenerator(store, GeneratorConfig(batch_size, rng_seed))
    return b"".join(serialize_batch(gen.request_data()) for _ in range(num_batches))
