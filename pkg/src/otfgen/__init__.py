"""Bounded-memory on-the-fly synthetic data generation.

Batches are generated during the analytics run from an in-memory seed
library; only the compact generation parameters are persisted, and any
batch can later be rebuilt bit-identically from that ledger.
"""

from .costmodel import CostInputs, CostReport, compare, cycle_times, num_batches
from .generator import (
    GeneratorConfig,
    Replay,
    SyntheticDataGenerator,
    UniformRandom,
    regenerate,
    regenerate_all,
    sample_params,
    synthesize,
)
from .ledger import Ledger, LedgerRecord
from .profiles import (
    Batch,
    GenParams,
    Label,
    NoiseProfile,
    SeedProfile,
    SeedStore,
    SyntheticProfile,
    load_seed_store,
)
from .rng import SplitMix64

__all__ = [
    "Batch",
    "CostInputs",
    "CostReport",
    "GenParams",
    "GeneratorConfig",
    "Label",
    "Ledger",
    "LedgerRecord",
    "NoiseProfile",
    "Replay",
    "SeedProfile",
    "SeedStore",
    "SplitMix64",
    "SyntheticDataGenerator",
    "SyntheticProfile",
    "UniformRandom",
    "compare",
    "cycle_times",
    "load_seed_store",
    "num_batches",
    "regenerate",
    "regenerate_all",
    "sample_params",
    "synthesize",
]

__version__ = "0.1.0"
