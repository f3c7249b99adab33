"""Deterministic fixture stores: no real consumption data ships with this
repo, so the desk-scale seed library is synthesized from closed-form shapes.

Seed shapes (u = position / length, one simulated day per profile):
    commercial k:  0.85 + 0.02*k + 0.05*cos(2*pi*u)
        near-constant high draw, as a business running all day.
    residential k: 0.05 + 0.01*k
                   + 1.10 * exp(-((u - 0.3125) / 0.055)**2 / 2)   # ~07:30 peak
                   + 1.30 * exp(-((u - 0.7900) / 0.075)**2 / 2)   # ~19:00 peak
        near-zero base with a bimodal morning/evening pattern; the low
        base keeps the two class shapes far apart at every scale factor.

Noise profiles are SplitMix64 uniform draws in [-amp, +amp], re-centered
to an exact zero mean inside every hour-sized block, so hourly averages
of a synthetic profile depend only on the scaled seed shape. Everything
is a pure function of the arguments; rebuilding a store yields
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .profiles import LABEL_CODE_NOISE, Label, write_profile_file
from .rng import SplitMix64

NOISE_SEED_BASE = 0x0001_5E00  # distinct PRNG namespace for noise content


def commercial_values(k: int, length: int) -> np.ndarray:
    u = np.arange(length, dtype=np.float64) / length
    return 0.85 + 0.02 * k + 0.05 * np.cos(2.0 * np.pi * u)


def residential_values(k: int, length: int) -> np.ndarray:
    u = np.arange(length, dtype=np.float64) / length
    morning = 1.10 * np.exp(-(((u - 0.3125) / 0.055) ** 2) / 2.0)
    evening = 1.30 * np.exp(-(((u - 0.7900) / 0.075) ** 2) / 2.0)
    return 0.05 + 0.01 * k + morning + evening


def seed_label(seed_id: int) -> Label:
    # Alternate so any seed count stays close to balanced.
    return Label.RESIDENTIAL if seed_id % 2 else Label.COMMERCIAL


def seed_values(seed_id: int, length: int) -> np.ndarray:
    k = seed_id // 2
    if seed_label(seed_id) is Label.RESIDENTIAL:
        return residential_values(k, length)
    return commercial_values(k, length)


def noise_values(noise_id: int, length: int, amplitude: float = 0.02) -> np.ndarray:
    rng = SplitMix64(NOISE_SEED_BASE + noise_id)
    raw = np.fromiter((rng.next_unit() for _ in range(length)), dtype=np.float64, count=length)
    values = (2.0 * raw - 1.0) * amplitude
    block = length // 24 if length % 24 == 0 else length
    blocks = values.reshape(-1, block)
    return (blocks - blocks.mean(axis=1, keepdims=True)).reshape(-1)


def write_fixture_store(
    out_dir: str | Path,
    n_seeds: int = 10,
    n_noises: int = 20,
    length: int = 86400,
    resolution_seconds: int = 1,
    noise_amplitude: float = 0.02,
) -> Path:
    """Write seed/noise profile files plus a manifest; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    seed_names = []
    for sid in range(n_seeds):
        name = f"seed-{sid:03d}.otf1"
        write_profile_file(out / name, sid, seed_values(sid, length), int(seed_label(sid)))
        seed_names.append(name)

    noise_names = []
    for nid in range(n_noises):
        name = f"noise-{nid:03d}.otf1"
        write_profile_file(out / name, nid, noise_values(nid, length, noise_amplitude), LABEL_CODE_NOISE)
        noise_names.append(name)

    manifest = {
        "resolution_seconds": resolution_seconds,
        "seeds": seed_names,
        "noises": noise_names,
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest_path
