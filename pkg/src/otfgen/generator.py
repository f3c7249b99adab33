"""The streaming synthetic data generator.

Each request discards nothing the caller still holds; the generator
itself keeps only the previous batch's parameters, records them, and
builds the next batch from the in-memory seed library. Synthesis is

    values[i] = seed[s][i] * lambda1 + noise[m][i] * lambda2

evaluated per element as (seed*l1) + (noise*l2) in IEEE-754 doubles with
no reassociation, which is what makes regeneration from the recorded
parameters bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .errors import ReplayExhausted, UnknownBatch
from .ledger import Ledger, LedgerRecord, LedgerWriter
from .profiles import Batch, GenParams, SeedStore, SyntheticProfile
from .rng import SplitMix64


@dataclass(frozen=True)
class UniformRandom:
    """Draw (s, m, lambda1, lambda2) i.i.d. from a seeded SplitMix64."""


@dataclass(frozen=True)
class Replay:
    """Re-issue the parameter stream recorded in a ledger.

    The source is either a ledger file path or an in-memory Ledger.
    """

    source: Path | Ledger


ParamPolicy = UniformRandom | Replay


@dataclass(frozen=True)
class GeneratorConfig:
    batch_size: int
    rng_seed: int
    param_policy: ParamPolicy = UniformRandom()
    # Spill mode: flush parameter records to spill_path every N batches
    # instead of buffering them for one end-of-run write. Off by default.
    spill_every: int | None = None
    spill_path: Path | None = None

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.spill_every is not None:
            if self.spill_every < 1:
                raise ValueError("spill_every must be >= 1")
            if self.spill_path is None:
                raise ValueError("spill mode needs a spill_path")


def sample_params(rng: SplitMix64, store: SeedStore) -> GenParams:
    """Draw one parameter tuple; four generator steps, in (s, m, l1, l2) order."""
    s = rng.next_index(len(store.seeds))
    m = rng.next_index(len(store.noises))
    lambda1 = rng.next_unit()
    lambda2 = rng.next_unit()
    return GenParams(s, m, lambda1, lambda2)


def synthesize(store: SeedStore, params: GenParams) -> SyntheticProfile:
    """Mix one seed with one noise profile under the given weights."""
    params.validate(store)
    seed = store.seeds[params.s]
    noise = store.noises[params.m]
    values = seed.values * params.lambda1 + noise.values * params.lambda2
    return SyntheticProfile(values=values, params=params, label=seed.label)


class SyntheticDataGenerator:
    """Streams batches while retaining only their generation parameters.

    Single consumer: request_data calls must be externally serialized.
    The seed store is immutable and may be shared.
    """

    def __init__(self, store: SeedStore, config: GeneratorConfig):
        self.store = store
        self.config = config
        self._rng = SplitMix64(config.rng_seed)
        self._next_index = 0
        self._pending: list[LedgerRecord] = []  # params of the batch the consumer holds
        self._ledger = Ledger(config.rng_seed, config.batch_size, store.manifest_digest)
        self._writer: LedgerWriter | None = None
        self._batches_since_spill = 0
        self._replay: list[GenParams] | None = None
        self._replay_pos = 0
        if isinstance(config.param_policy, Replay):
            source = config.param_policy.source
            loaded = source if isinstance(source, Ledger) else Ledger.load(source)
            loaded.check_store(store)
            self._replay = [rec.params for rec in loaded.records]
        if config.spill_every is not None:
            self._writer = LedgerWriter(
                config.spill_path, config.rng_seed, config.batch_size, store.manifest_digest
            )

    @property
    def batches_produced(self) -> int:
        return self._next_index

    @property
    def records_buffered(self) -> int:
        """Records held in RAM, including the not-yet-flushed pending batch."""
        return len(self._ledger) + len(self._pending)

    def _next_params(self) -> GenParams:
        if self._replay is not None:
            if self._replay_pos >= len(self._replay):
                raise ReplayExhausted(
                    f"ledger provided {len(self._replay)} records, all consumed"
                )
            params = self._replay[self._replay_pos]
            self._replay_pos += 1
            return params
        return sample_params(self._rng, self.store)

    def _flush_pending(self) -> None:
        # Record the previous batch's parameters before anything else;
        # only then is that batch allowed to disappear.
        if not self._pending:
            return
        self._ledger.append(self._pending)
        self._pending = []
        if self._writer is not None:
            self._batches_since_spill += 1
            if self._batches_since_spill >= self.config.spill_every:
                self._writer.spill(self._ledger.records)
                self._ledger.records.clear()
                self._batches_since_spill = 0

    def request_data(self, batch_size: int | None = None) -> Batch:
        """Retire the previous batch's parameters and return a fresh batch."""
        size = self.config.batch_size if batch_size is None else batch_size
        if size < 1:
            raise ValueError("batch_size must be >= 1")
        self._flush_pending()
        rng_state_before = self._rng.state
        index = self._next_index
        profiles = []
        pending = []
        for i in range(size):
            params = self._next_params()
            profiles.append(synthesize(self.store, params))
            pending.append(LedgerRecord(index, i, params))
        self._pending = pending
        self._next_index += 1
        return Batch(index=index, profiles=profiles, rng_state_before=rng_state_before)

    def save_params(self, path: str | Path) -> int:
        """Flush all recorded parameters to disk; returns bytes written.

        In the default (non-spill) configuration this is the run's single
        write instance.
        """
        if self._pending:
            self._ledger.append(self._pending)
            self._pending = []
        if self._writer is not None:
            if Path(path) != self.config.spill_path:
                raise ValueError("spill mode writes to config.spill_path; pass the same path")
            self._writer.spill(self._ledger.records)
            self._ledger.records.clear()
            return self._writer.finalize()
        return self._ledger.save(path)

    def ledger_view(self) -> Ledger:
        """The in-memory ledger including pending records (non-spill mode only)."""
        snapshot = Ledger(self.config.rng_seed, self.config.batch_size, self.store.manifest_digest)
        snapshot.append(self._ledger.records)
        snapshot.append(self._pending)
        return snapshot


def regenerate(store: SeedStore, ledger: Ledger, batch_index: int) -> Batch:
    """Rebuild one batch from its recorded parameters, bit-identically."""
    records = ledger.records_for_batch(batch_index)
    profiles = [synthesize(store, rec.params) for rec in records]
    return Batch(index=batch_index, profiles=profiles, rng_state_before=None)


def regenerate_all(store: SeedStore, ledger: Ledger) -> Iterator[Batch]:
    """Rebuild every recorded batch in order."""
    indices = ledger.batch_indices()
    if not indices:
        raise UnknownBatch("ledger holds no records")
    for index in indices:
        yield regenerate(store, ledger, index)
