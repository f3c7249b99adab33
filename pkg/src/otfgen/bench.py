"""End-to-end benchmark of the two pipelines on a shared workload.

Both runs use the same rng_seed, so the bytes the baseline writes to disk
and the bytes the streamed pipeline folds through its checksum consumer
must be identical; that equality is the benchmark's correctness oracle.
Verdicts are computed from measured values only. Timing comparisons are
reported as warnings rather than failures because page caching at desk
scale can invert them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

from . import iostats
from .costmodel import CostInputs, CostReport, compare
from .digest import checksum_fold
from .generator import GeneratorConfig, SyntheticDataGenerator
from .iostats import IoCounters
from .profiles import SeedStore, batch_file_name, load_seed_store, serialize_batch

GB = 1e9

LEDGER_NAME = "run.otfl"


@dataclass(frozen=True)
class Workload:
    """One benchmark configuration shared by both pipelines."""

    manifest_path: Path
    batch_size: int
    num_batches: int
    rng_seed: int
    out_dir: Path
    # Nominal device rates used only for the analytical prediction shown
    # beside the measurements.
    read_s_per_gb: float = 10.0
    write_s_per_gb: float = 10.0
    gen_s_per_batch: float = 5.0

    def __post_init__(self):
        if self.num_batches < 1:
            raise ValueError("num_batches must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass(frozen=True)
class PipelineResult:
    """Measured outcome of one pipeline run."""

    name: str
    wall_seconds: float
    counters: IoCounters
    peak_batch_bytes: int
    total_disk_bytes: int  # seed library + whatever the run left on disk
    checksum: int


@dataclass(frozen=True)
class BenchReport:
    pregen: PipelineResult
    otf: PipelineResult
    checksums_match: bool
    rw_expected_pregen: int
    rw_expected_otf: int
    rw_matches_model: bool
    verdict_disk: bool
    verdict_rw: bool
    verdict_time: bool  # warning-level only
    predicted: CostReport

    def hard_pass(self) -> bool:
        """True when every hard (non-timing) verdict holds."""
        return self.checksums_match and self.rw_matches_model and self.verdict_disk and self.verdict_rw


def _serialized_batch_bytes(store: SeedStore, batch_size: int) -> int:
    from .profiles import PROFILE_HEADER

    return batch_size * (PROFILE_HEADER.size + 8 * store.profile_length)


def run_pregeneration(workload: Workload) -> PipelineResult:
    """Baseline: write the full dataset, then read it back for analytics."""
    out = Path(workload.out_dir) / "pregen"
    out.mkdir(parents=True, exist_ok=True)
    before = iostats.snapshot()
    start = time.perf_counter()

    store = load_seed_store(workload.manifest_path)
    gen = SyntheticDataGenerator(store, GeneratorConfig(workload.batch_size, workload.rng_seed))

    # Generation phase: every batch goes to disk and is then dropped.
    for _ in range(workload.num_batches):
        batch = gen.request_data()
        iostats.counted_write_file(out / batch_file_name(batch.index), serialize_batch(batch))
        del batch  # baseline holds no more than the batch being written

    # Analytics phase: read every batch file back and fold it.
    checksum = 0
    dataset_bytes = 0
    for index in range(workload.num_batches):
        data = iostats.counted_read_file(out / batch_file_name(index))
        checksum = checksum_fold(data, checksum)
        dataset_bytes += len(data)

    wall = time.perf_counter() - start
    counters = iostats.snapshot() - before
    return PipelineResult(
        name="pregen",
        wall_seconds=wall,
        counters=counters,
        peak_batch_bytes=_serialized_batch_bytes(store, workload.batch_size),
        total_disk_bytes=store.file_bytes + dataset_bytes,
        checksum=checksum,
    )


def run_otf(workload: Workload) -> PipelineResult:
    """Streamed pipeline: fold each batch in memory, persist only the ledger."""
    out = Path(workload.out_dir) / "otf"
    out.mkdir(parents=True, exist_ok=True)
    before = iostats.snapshot()
    start = time.perf_counter()

    store = load_seed_store(workload.manifest_path)
    gen = SyntheticDataGenerator(store, GeneratorConfig(workload.batch_size, workload.rng_seed))

    checksum = 0
    for _ in range(workload.num_batches):
        batch = gen.request_data()
        checksum = checksum_fold(serialize_batch(batch), checksum)
        del batch  # consumed; free it before the next request
    ledger_bytes = gen.save_params(out / LEDGER_NAME)

    wall = time.perf_counter() - start
    counters = iostats.snapshot() - before
    return PipelineResult(
        name="otf",
        wall_seconds=wall,
        counters=counters,
        peak_batch_bytes=_serialized_batch_bytes(store, workload.batch_size),
        total_disk_bytes=store.file_bytes + ledger_bytes,
        checksum=checksum,
    )


def workload_cost_inputs(workload: Workload, store: SeedStore) -> CostInputs:
    """Translate a concrete workload into model inputs (sizes in GB)."""
    from .ledger import RECORD_WIDTH

    batch_bytes = _serialized_batch_bytes(store, workload.batch_size)
    dataset_bytes = batch_bytes * workload.num_batches
    return CostInputs(
        dataset_gb=dataset_bytes / GB,
        batch_gb=batch_bytes / GB,
        seed_gb=store.file_bytes / GB,
        seed_files=store.file_count,
        ram_dataset_gb=dataset_bytes / GB,
        params_gb_per_batch=workload.batch_size * RECORD_WIDTH / GB,
        read_s_per_gb=workload.read_s_per_gb,
        write_s_per_gb=workload.write_s_per_gb,
        gen_s_per_batch=workload.gen_s_per_batch,
    )


def compare_pipelines(workload: Workload) -> BenchReport:
    """Run both pipelines and report measured verdicts beside predictions."""
    pg = run_pregeneration(workload)
    otf = run_otf(workload)

    store = load_seed_store(workload.manifest_path)  # counters already captured
    predicted = compare(workload_cost_inputs(workload, store))

    expected_pg = store.file_count + 2 * workload.num_batches
    expected_otf = store.file_count + 1
    measured_pg = pg.counters.total_instances
    measured_otf = otf.counters.total_instances

    return BenchReport(
        pregen=pg,
        otf=otf,
        checksums_match=pg.checksum == otf.checksum,
        rw_expected_pregen=expected_pg,
        rw_expected_otf=expected_otf,
        rw_matches_model=(measured_pg == expected_pg and measured_otf == expected_otf),
        verdict_disk=otf.total_disk_bytes < pg.total_disk_bytes,
        verdict_rw=measured_otf < measured_pg,
        verdict_time=otf.wall_seconds < pg.wall_seconds,
        predicted=predicted,
    )
