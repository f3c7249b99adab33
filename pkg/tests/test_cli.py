"""CLI subcommands: wiring, exit codes, config handling, and artifacts."""

import csv
import json
from pathlib import Path

from otfgen.cli import main

REPO = Path(__file__).resolve().parent.parent
ESTIMATE_CONFIG = REPO / "configs" / "estimate-hdd-100gb.json"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------- fixtures

def test_fixtures_subcommand(tmp_path, capsys):
    code, out, _ = run(capsys, "fixtures", "--out-dir", str(tmp_path / "store"),
                       "--seeds", "2", "--noises", "2", "--length", "96")
    assert code == 0
    assert "manifest" in out
    assert (tmp_path / "store" / "manifest.json").exists()
    assert (tmp_path / "store" / "seed-001.otf1").exists()


# ---------------------------------------------------------------- generate

def test_generate_writes_ledger_and_reports_one_write(tmp_path, capsys):
    store = tmp_path / "store"
    run(capsys, "fixtures", "--out-dir", str(store), "--length", "240")
    ledger = tmp_path / "run.otfl"
    code, out, _ = run(capsys, "generate", "--manifest", str(store / "manifest.json"),
                       "--batches", "6", "--batch-size", "4",
                       "--ledger", str(ledger))
    assert code == 0
    assert ledger.exists()
    fields = dict(line.split(None, 1) for line in out.strip().splitlines())
    assert fields["write_instances"] == "1"
    assert fields["read_instances"] == "30"
    assert fields["profiles"] == "24"


def test_generate_missing_manifest_exits_1(tmp_path, capsys):
    code, _, err = run(capsys, "generate", "--manifest", str(tmp_path / "absent.json"))
    assert code == 1
    assert "MissingFile" in err


def test_generate_stdout_is_deterministic(tmp_path, capsys):
    store = tmp_path / "store"
    run(capsys, "fixtures", "--out-dir", str(store), "--length", "240")
    outputs = []
    for i in range(2):
        code, out, _ = run(capsys, "generate", "--manifest", str(store / "manifest.json"),
                           "--batches", "3", "--batch-size", "2",
                           "--ledger", str(tmp_path / f"run{i}.otfl"))
        assert code == 0
        outputs.append(out.replace(f"run{i}.otfl", "run.otfl"))
    assert outputs[0] == outputs[1]


# ------------------------------------------------------------------- regen

def test_regen_reproduces_pregenerated_files(tmp_path, capsys):
    from otfgen.bench import Workload, run_pregeneration

    store = tmp_path / "store"
    run(capsys, "fixtures", "--out-dir", str(store), "--length", "240")
    manifest = store / "manifest.json"

    workload = Workload(manifest, batch_size=4, num_batches=5, rng_seed=42,
                        out_dir=tmp_path / "bench")
    run_pregeneration(workload)

    ledger = tmp_path / "run.otfl"
    run(capsys, "generate", "--manifest", str(manifest), "--batches", "5",
        "--batch-size", "4", "--ledger", str(ledger))

    out_dir = tmp_path / "regen"
    code, out, _ = run(capsys, "regen", "--manifest", str(manifest),
                       "--ledger", str(ledger), "--out-dir", str(out_dir))
    assert code == 0
    for k in range(5):
        name = f"batch-{k:05d}.otf1"
        assert (out_dir / name).read_bytes() == (tmp_path / "bench" / "pregen" / name).read_bytes()


def test_regen_unknown_batch_exits_1(tmp_path, capsys):
    store = tmp_path / "store"
    run(capsys, "fixtures", "--out-dir", str(store), "--length", "240")
    manifest = store / "manifest.json"
    ledger = tmp_path / "run.otfl"
    run(capsys, "generate", "--manifest", str(manifest), "--batches", "3",
        "--batch-size", "2", "--ledger", str(ledger))
    code, _, err = run(capsys, "regen", "--manifest", str(manifest),
                       "--ledger", str(ledger), "--out-dir", str(tmp_path / "o"),
                       "--batch", "5")
    assert code == 1
    assert "UnknownBatch" in err


def test_regen_wrong_manifest_digest_exits_1(tmp_path, capsys):
    store_a = tmp_path / "a"
    store_b = tmp_path / "b"
    run(capsys, "fixtures", "--out-dir", str(store_a), "--length", "240")
    run(capsys, "fixtures", "--out-dir", str(store_b), "--length", "240", "--seeds", "4")
    ledger = tmp_path / "run.otfl"
    run(capsys, "generate", "--manifest", str(store_a / "manifest.json"),
        "--batches", "2", "--batch-size", "2", "--ledger", str(ledger))
    code, _, err = run(capsys, "regen", "--manifest", str(store_b / "manifest.json"),
                       "--ledger", str(ledger), "--out-dir", str(tmp_path / "o"))
    assert code == 1
    assert "DigestMismatch" in err


# ---------------------------------------------------------------- estimate

def test_estimate_shipped_config_reproduces_reported_times(tmp_path, capsys):
    csv_path = tmp_path / "report.csv"
    code, out, _ = run(capsys, "estimate", "--config", str(ESTIMATE_CONFIG),
                       "--csv", str(csv_path))
    assert code == 0
    values = {row[0]: row[1] for row in csv.reader(csv_path.open())}
    assert values["n_batches"] == "20"
    assert float(values["t_pregen_s"]) == 2300.0
    assert abs(float(values["t_otf_s"]) - 300.0) <= 0.05
    assert abs(float(values["otf_time_ratio"]) - 0.13) <= 0.001
    assert "t_pregen_s" in out
    assert (tmp_path / "report.png").exists()  # figure alongside the CSV


def test_estimate_figure_can_be_disabled(tmp_path, capsys):
    csv_path = tmp_path / "report.csv"
    code, _, _ = run(capsys, "estimate", "--config", str(ESTIMATE_CONFIG),
                     "--csv", str(csv_path), "--no-figures")
    assert code == 0
    assert csv_path.exists()
    assert not (tmp_path / "report.png").exists()


def test_estimate_unknown_config_key_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dataset_gb": 10.0, "mystery": 1}))
    code, _, err = run(capsys, "estimate", "--config", str(bad))
    assert code == 1
    assert "unknown keys" in err


def test_estimate_flag_overrides_config(tmp_path, capsys):
    csv_path = tmp_path / "r.csv"
    code, _, _ = run(capsys, "estimate", "--config", str(ESTIMATE_CONFIG),
                     "--batch-gb", "10.0", "--csv", str(csv_path), "--no-figures")
    assert code == 0
    values = {row[0]: row[1] for row in csv.reader(csv_path.open())}
    assert values["n_batches"] == "10"


# ------------------------------------------------------------------- bench

def test_bench_mini_workload(tmp_path, capsys):
    store = tmp_path / "store"
    run(capsys, "fixtures", "--out-dir", str(store), "--length", "240")
    csv_path = tmp_path / "bench.csv"
    code, out, _ = run(capsys, "bench", "--manifest", str(store / "manifest.json"),
                       "--batches", "4", "--batch-size", "3",
                       "--out-dir", str(tmp_path / "bench"),
                       "--csv", str(csv_path))
    assert code == 0
    assert "verdict_disk" in out
    assert csv_path.exists()
    assert (tmp_path / "bench.png").exists()


# -------------------------------------------------------------------- demo

def test_demo_smoke(tmp_path, capsys):
    store = tmp_path / "store"
    run(capsys, "fixtures", "--out-dir", str(store), "--length", "240",
        "--resolution-seconds", "360")
    csv_path = tmp_path / "loss.csv"
    code, out, _ = run(capsys, "demo", "--manifest", str(store / "manifest.json"),
                       "--epochs", "3", "--csv", str(csv_path))
    assert code == 0
    lines = out.strip().splitlines()
    assert sum(1 for line in lines if line.startswith("epoch")) == 3
    assert lines[-1].startswith("accuracy ")
    assert csv_path.exists()
    assert (tmp_path / "loss.png").exists()


# ------------------------------------------------------------------ wiring

def test_no_subcommand_prints_help(capsys):
    code, out, _ = run(capsys)
    assert code == 1
    assert "usage" in out.lower()


def test_bad_flag_exits_1(capsys):
    code, _, err = run(capsys, "generate", "--no-such-flag")
    assert code == 1
