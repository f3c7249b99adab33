"""Closed-form resource model for the two pipelines.

Pre-generation (PG) materializes the full dataset on disk and reads it
back during analytics; the streamed pipeline (OTF) keeps batches in RAM
and persists only the generation parameters. The model is linear in
bytes and transfer counts; no seek/queueing effects are modeled.

Sizes are in GB, rates in seconds per GB, times in seconds. Results
carry full double precision; display rounding is the reporter's job.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonIntegralBatching

# Tolerance for recognizing an integral dataset/batch ratio given float
# inputs; anything farther from an integer than this is rejected.
_INTEGRAL_RTOL = 1e-9


@dataclass(frozen=True)
class CostInputs:
    """Workload description for one full generate-and-analyze cycle."""

    dataset_gb: float
    batch_gb: float
    seed_gb: float
    seed_files: int
    ram_dataset_gb: float
    params_gb_per_batch: float
    read_s_per_gb: float
    write_s_per_gb: float
    gen_s_per_batch: float

    def __post_init__(self):
        positives = {
            "dataset_gb": self.dataset_gb,
            "batch_gb": self.batch_gb,
            "seed_gb": self.seed_gb,
            "ram_dataset_gb": self.ram_dataset_gb,
            "params_gb_per_batch": self.params_gb_per_batch,
            "read_s_per_gb": self.read_s_per_gb,
            "write_s_per_gb": self.write_s_per_gb,
            "gen_s_per_batch": self.gen_s_per_batch,
        }
        for name, value in positives.items():
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")
        if self.seed_files < 1:
            raise ValueError("seed_files must be >= 1")
        if self.batch_gb > self.dataset_gb:
            raise ValueError("batch_gb cannot exceed dataset_gb")


@dataclass(frozen=True)
class CostReport:
    """Full model output for one workload, with per-claim verdicts.

    The three ``otf_saves_*`` verdicts state whether the streamed
    pipeline beats pre-generation on disk footprint, transfer instances,
    and cycle time. Each claim is only guaranteed under its assumption
    flag; when a flag is False the verdict is reported but unasserted.
    """

    n_batches: int
    ram_batch_gb: float
    ram_params_gb: float
    ram_otf_final_gb: float
    disk_pregen_gb: float
    disk_otf_gb: float
    rw_pregen: int
    rw_otf: int
    t_pregen_s: float
    t_otf_s: float
    otf_time_ratio: float
    otf_saves_disk: bool
    otf_saves_rw: bool
    otf_saves_time: bool
    assumes_params_lt_dataset: bool  # total params footprint below dataset size
    assumes_batch_gt_unit: bool      # batch larger than one size unit

    def ram_otf_at(self, batch_number: int) -> float:
        """Streamed-pipeline RAM after ``batch_number`` batches of params accrued."""
        return ram_otf(self.ram_batch_gb, batch_number, self.ram_params_gb)


def num_batches(dataset_gb: float, batch_gb: float) -> int:
    """Batches per dataset; the ratio must be integral, never rounded."""
    ratio = dataset_gb / batch_gb
    n = round(ratio)
    if n < 1 or abs(n * batch_gb - dataset_gb) > _INTEGRAL_RTOL * dataset_gb:
        raise NonIntegralBatching(
            f"dataset {dataset_gb} GB is not an integer multiple of batch {batch_gb} GB"
        )
    return n


def ram_per_batch(ram_dataset_gb: float, n_batches: int) -> float:
    """RAM for one batch given the RAM the whole dataset would need."""
    if n_batches < 1:
        raise ValueError("n_batches must be >= 1")
    return ram_dataset_gb / n_batches


def ram_otf(ram_batch_gb: float, batch_number: int, ram_params_gb: float) -> float:
    """Streamed-pipeline RAM: one batch plus the parameters accrued so far."""
    if batch_number < 0:
        raise ValueError("batch_number must be >= 0")
    return ram_batch_gb + batch_number * ram_params_gb


def disk_pregen(seed_gb: float, dataset_gb: float) -> float:
    """Disk for pre-generation: the seed library plus the full dataset."""
    return seed_gb + dataset_gb


def disk_otf(seed_gb: float, n_batches: int, params_gb_per_batch: float) -> float:
    """Disk for streaming: the seed library plus per-batch parameters."""
    return seed_gb + n_batches * params_gb_per_batch


def rw_counts(seed_files: int, n_batches: int) -> tuple[int, int]:
    """Whole-file transfer instances per pipeline for one full cycle.

    Pre-generation loads each seed file, writes every batch, and reads
    every batch back for analytics. Streaming loads each seed file and
    performs the single parameter write.
    """
    if seed_files < 1 or n_batches < 1:
        raise ValueError("seed_files and n_batches must be >= 1")
    return seed_files + 2 * n_batches, seed_files + 1


def pipeline_times(
    seed_ingest_s: float,
    n_batches: int,
    gen_s_per_batch: float,
    batch_write_s: float,
    batch_read_s: float,
    params_write_s: float,
) -> tuple[float, float]:
    """Cycle times from pre-computed phase durations; allows empty workloads."""
    generate = n_batches * gen_s_per_batch
    t_pg = seed_ingest_s + generate + n_batches * batch_write_s + n_batches * batch_read_s
    t_otf = seed_ingest_s + generate + params_write_s
    return t_pg, t_otf


def cycle_times(inputs: CostInputs) -> tuple[float, float]:
    """Wall time for one full generate-and-analyze cycle, per pipeline.

    The shared seed term charges provisioning the seed library onto disk
    and loading it back into RAM (one write plus one read of the seed
    size); both pipelines pay it identically, so every pipeline
    difference comes from the batch and parameter terms.
    """
    n_b = num_batches(inputs.dataset_gb, inputs.batch_gb)
    seed_ingest = inputs.seed_gb * inputs.write_s_per_gb + inputs.seed_gb * inputs.read_s_per_gb
    batch_write = inputs.batch_gb * inputs.write_s_per_gb
    batch_read = inputs.batch_gb * inputs.read_s_per_gb
    params_write = n_b * inputs.params_gb_per_batch * inputs.write_s_per_gb
    return pipeline_times(seed_ingest, n_b, inputs.gen_s_per_batch, batch_write, batch_read, params_write)


def compare(inputs: CostInputs) -> CostReport:
    """Evaluate the whole model and the three pipeline-comparison verdicts."""
    n_b = num_batches(inputs.dataset_gb, inputs.batch_gb)
    ram_b = ram_per_batch(inputs.ram_dataset_gb, n_b)
    ram_p = inputs.params_gb_per_batch  # parameters occupy the same bytes in RAM as on disk
    d_pg = disk_pregen(inputs.seed_gb, inputs.dataset_gb)
    d_otf = disk_otf(inputs.seed_gb, n_b, inputs.params_gb_per_batch)
    rw_pg, rw_otf = rw_counts(inputs.seed_files, n_b)
    t_pg, t_otf = cycle_times(inputs)
    params_total = n_b * inputs.params_gb_per_batch
    return CostReport(
        n_batches=n_b,
        ram_batch_gb=ram_b,
        ram_params_gb=ram_p,
        ram_otf_final_gb=ram_otf(ram_b, n_b, ram_p),
        disk_pregen_gb=d_pg,
        disk_otf_gb=d_otf,
        rw_pregen=rw_pg,
        rw_otf=rw_otf,
        t_pregen_s=t_pg,
        t_otf_s=t_otf,
        otf_time_ratio=t_otf / t_pg,
        otf_saves_disk=d_otf < d_pg,
        otf_saves_rw=rw_otf < rw_pg,
        otf_saves_time=t_otf < t_pg,
        assumes_params_lt_dataset=params_total < inputs.dataset_gb,
        assumes_batch_gt_unit=inputs.batch_gb > 1.0,
    )
