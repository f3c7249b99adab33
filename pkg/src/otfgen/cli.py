"""Command line interface.

Subcommands: fixtures, generate, regen, estimate, bench, demo.
Options resolve in three layers: built-in defaults, then an optional
JSON config file (unknown keys rejected), then explicit flags. All
output tables are deterministic for fixed seeds except bench wall times.

Exit codes: 0 success, 1 usage or IO error, 2 measured-verdict failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import iostats
from .bench import Workload, compare_pipelines
from .classifier import evaluate, train
from .costmodel import CostInputs, compare
from .digest import checksum_fold
from .errors import OtfError
from .fixtures import write_fixture_store
from .generator import GeneratorConfig, SyntheticDataGenerator, regenerate, regenerate_all
from .ledger import Ledger
from .profiles import batch_file_name, load_seed_store, serialize_batch
from . import report as rpt


class CliError(Exception):
    """Usage or configuration problem; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep exit code 2 reserved for verdict failures
        raise CliError(message)


def _load_config(path: str, allowed: set[str]) -> dict:
    p = Path(path)
    if not p.exists():
        raise CliError(f"config file not found: {p}")
    try:
        cfg = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(f"config {p} is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        raise CliError(f"config {p} must be a JSON object")
    unknown = set(cfg) - allowed
    if unknown:
        raise CliError(f"config {p} has unknown keys: {sorted(unknown)}")
    return cfg


def _resolve(args: argparse.Namespace, defaults: dict, config_keys: set[str] | None = None) -> dict:
    """defaults <- config file <- explicit flags."""
    opts = dict(defaults)
    config_path = getattr(args, "config", None)
    if config_path:
        opts.update(_load_config(config_path, config_keys if config_keys is not None else set(defaults)))
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    return opts


def _require(opts: dict, *keys: str) -> None:
    for key in keys:
        if opts[key] is None:
            raise CliError(f"missing required option: --{key.replace('_', '-')}")


def _emit_csv_and_figure(opts, header, rows, figure_writer) -> None:
    if not opts.get("csv"):
        return
    rpt.write_csv(opts["csv"], header, rows)
    if opts.get("figures", True):
        figure_writer(rpt.figure_path_for(opts["csv"]))


# ---------------------------------------------------------------- fixtures

def cmd_fixtures(args) -> int:
    defaults = dict(out_dir=None, seeds=10, noises=20, length=86400,
                    resolution_seconds=1, noise_amplitude=0.02)
    opts = _resolve(args, defaults)
    _require(opts, "out_dir")
    manifest = write_fixture_store(
        opts["out_dir"],
        n_seeds=opts["seeds"],
        n_noises=opts["noises"],
        length=opts["length"],
        resolution_seconds=opts["resolution_seconds"],
        noise_amplitude=opts["noise_amplitude"],
    )
    print(rpt.render_kv([
        ("manifest", str(manifest)),
        ("seeds", opts["seeds"]),
        ("noises", opts["noises"]),
        ("profile_length", opts["length"]),
        ("resolution_seconds", opts["resolution_seconds"]),
    ]))
    return 0


# ---------------------------------------------------------------- generate

def cmd_generate(args) -> int:
    defaults = dict(manifest=None, batches=20, batch_size=10, rng_seed=42,
                    ledger="run.otfl", spill_every=None, csv=None)
    opts = _resolve(args, defaults)
    _require(opts, "manifest")

    before = iostats.snapshot()
    store = load_seed_store(opts["manifest"])
    spill = opts["spill_every"]
    config = GeneratorConfig(
        batch_size=opts["batch_size"],
        rng_seed=opts["rng_seed"],
        spill_every=spill,
        spill_path=Path(opts["ledger"]) if spill else None,
    )
    gen = SyntheticDataGenerator(store, config)

    checksum = 0
    bytes_streamed = 0
    for _ in range(opts["batches"]):
        batch = gen.request_data()
        data = serialize_batch(batch)
        del batch
        checksum = checksum_fold(data, checksum)
        bytes_streamed += len(data)
    ledger_bytes = gen.save_params(opts["ledger"])
    counters = iostats.snapshot() - before

    rows = [
        ("batches", opts["batches"]),
        ("batch_size", opts["batch_size"]),
        ("profiles", opts["batches"] * opts["batch_size"]),
        ("profile_length", store.profile_length),
        ("bytes_streamed", bytes_streamed),
        ("stream_checksum", f"{checksum:#010x}"),
        ("read_instances", counters.read_instances),
        ("write_instances", counters.write_instances),
        ("ledger_bytes", ledger_bytes),
        ("ledger_path", str(opts["ledger"])),
    ]
    print(rpt.render_kv(rows))
    if opts.get("csv"):
        rpt.write_csv(opts["csv"], ["quantity", "value"], rows)
    return 0


# ---------------------------------------------------------------- regen

def cmd_regen(args) -> int:
    defaults = dict(manifest=None, ledger=None, out_dir=None, batch=None)
    opts = _resolve(args, defaults)
    _require(opts, "manifest", "ledger", "out_dir")

    store = load_seed_store(opts["manifest"])
    ledger = Ledger.load(opts["ledger"])
    ledger.check_store(store)

    out = Path(opts["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    if opts["batch"] is not None:
        batches = [regenerate(store, ledger, opts["batch"])]
    else:
        batches = regenerate_all(store, ledger)

    written = []
    total = 0
    for batch in batches:
        data = serialize_batch(batch)
        iostats.counted_write_file(out / batch_file_name(batch.index), data)
        written.append(batch.index)
        total += len(data)
    print(rpt.render_kv([
        ("batches_regenerated", len(written)),
        ("first_batch", written[0]),
        ("last_batch", written[-1]),
        ("bytes_written", total),
        ("out_dir", str(out)),
    ]))
    return 0


# ---------------------------------------------------------------- estimate

_WORKLOAD_KEYS = {
    "dataset_gb", "batch_gb", "seed_gb", "seed_files", "ram_dataset_gb",
    "params_gb_per_batch", "read_s_per_gb", "write_s_per_gb", "gen_s_per_batch",
}


def cmd_estimate(args) -> int:
    defaults = dict(
        dataset_gb=None, batch_gb=None, seed_gb=None, seed_files=None,
        ram_dataset_gb=None, params_gb_per_batch=None,
        read_s_per_gb=None, write_s_per_gb=None, gen_s_per_batch=None,
        csv=None, figures=True,
    )
    opts = _resolve(args, defaults, config_keys=_WORKLOAD_KEYS)
    if opts["ram_dataset_gb"] is None:
        opts["ram_dataset_gb"] = opts["dataset_gb"]  # dataset held fully in RAM
    _require(opts, *sorted(_WORKLOAD_KEYS))

    try:
        inputs = CostInputs(**{k: opts[k] for k in _WORKLOAD_KEYS})
    except ValueError as exc:
        raise CliError(str(exc))
    result = compare(inputs)
    rows = rpt.cost_report_rows(result)
    print(rpt.render_kv(rows))
    _emit_csv_and_figure(opts, ["quantity", "value"], rows,
                         lambda p: rpt.save_cost_figure(result, p))
    return 0


# ---------------------------------------------------------------- bench

def cmd_bench(args) -> int:
    defaults = dict(manifest=None, batches=20, batch_size=10, rng_seed=42,
                    out_dir=None, read_s_per_gb=10.0, write_s_per_gb=10.0,
                    gen_s_per_batch=5.0, csv=None, figures=True)
    opts = _resolve(args, defaults)
    _require(opts, "manifest", "out_dir")

    workload = Workload(
        manifest_path=Path(opts["manifest"]),
        batch_size=opts["batch_size"],
        num_batches=opts["batches"],
        rng_seed=opts["rng_seed"],
        out_dir=Path(opts["out_dir"]),
        read_s_per_gb=opts["read_s_per_gb"],
        write_s_per_gb=opts["write_s_per_gb"],
        gen_s_per_batch=opts["gen_s_per_batch"],
    )
    result = compare_pipelines(workload)

    print(rpt.render_columns(["metric", "pregen", "otf"], rpt.bench_report_rows(result)))
    print()
    print(rpt.render_kv(rpt.bench_verdict_rows(result)))
    print()
    print("predicted (analytical model):")
    print(rpt.render_kv(rpt.cost_report_rows(result.predicted)))

    if not result.verdict_time:
        print("warning: streamed pipeline was not faster on this run; "
              "wall time at desk scale is cache-dependent", file=sys.stderr)

    if opts.get("csv"):
        rows = [(m, a, b) for m, a, b in rpt.bench_report_rows(result)]
        rows += [(k, v, "") for k, v in rpt.bench_verdict_rows(result)]
        rows += [(f"predicted_{k}", v, "") for k, v in rpt.cost_report_rows(result.predicted)]
        rpt.write_csv(opts["csv"], ["metric", "pregen", "otf"], rows)
        if opts.get("figures", True):
            rpt.save_bench_figure(result, rpt.figure_path_for(opts["csv"]))

    return 0 if result.hard_pass() else 2


# ---------------------------------------------------------------- demo

def cmd_demo(args) -> int:
    defaults = dict(manifest=None, epochs=200, batch_size=10, train_batches=4,
                    test_batches=1, rng_seed=42, init_seed=7, hidden=16,
                    learning_rate=0.05, csv=None, figures=True)
    opts = _resolve(args, defaults)
    _require(opts, "manifest")

    store = load_seed_store(opts["manifest"])
    samples_per_day = 86400 // store.resolution_seconds
    gen = SyntheticDataGenerator(store, GeneratorConfig(opts["batch_size"], opts["rng_seed"]))

    result = train(
        gen,
        epochs=opts["epochs"],
        batches_per_epoch=opts["train_batches"],
        samples_per_day=samples_per_day,
        hidden=opts["hidden"],
        learning_rate=opts["learning_rate"],
        init_seed=opts["init_seed"],
    )
    accuracy = evaluate(result.classifier, gen, opts["test_batches"], samples_per_day)

    for epoch, loss in enumerate(result.epoch_losses, start=1):
        print(f"epoch {epoch:3d}  loss {loss!r}")
    print(f"accuracy {accuracy!r}")

    if opts.get("csv"):
        rows = [(e, loss) for e, loss in enumerate(result.epoch_losses, start=1)]
        rpt.write_csv(opts["csv"], ["epoch", "loss"], rows)
        if opts.get("figures", True):
            rpt.save_loss_figure(result.epoch_losses, accuracy, rpt.figure_path_for(opts["csv"]))
    return 0


# ---------------------------------------------------------------- wiring

def build_parser() -> _Parser:
    parser = _Parser(prog="otfgen", description="On-the-fly synthetic data toolkit")
    sub = parser.add_subparsers(dest="command")

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--config", help="JSON config file; flags override its keys")
        return p

    p = add("fixtures", cmd_fixtures, "write a deterministic seed/noise store")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--seeds", type=int)
    p.add_argument("--noises", type=int)
    p.add_argument("--length", type=int)
    p.add_argument("--resolution-seconds", dest="resolution_seconds", type=int)
    p.add_argument("--noise-amplitude", dest="noise_amplitude", type=float)

    p = add("generate", cmd_generate, "stream batches through a checksum consumer, save the ledger")
    p.add_argument("--manifest")
    p.add_argument("--batches", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--rng-seed", dest="rng_seed", type=int)
    p.add_argument("--ledger")
    p.add_argument("--spill-every", dest="spill_every", type=int)
    p.add_argument("--csv")

    p = add("regen", cmd_regen, "rebuild batches from a saved ledger as OTF1 files")
    p.add_argument("--manifest")
    p.add_argument("--ledger")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--batch", type=int)

    p = add("estimate", cmd_estimate, "evaluate the analytical cost model for a workload")
    p.add_argument("--dataset-gb", dest="dataset_gb", type=float)
    p.add_argument("--batch-gb", dest="batch_gb", type=float)
    p.add_argument("--seed-gb", dest="seed_gb", type=float)
    p.add_argument("--seed-files", dest="seed_files", type=int)
    p.add_argument("--ram-dataset-gb", dest="ram_dataset_gb", type=float)
    p.add_argument("--params-gb-per-batch", dest="params_gb_per_batch", type=float)
    p.add_argument("--read-s-per-gb", dest="read_s_per_gb", type=float)
    p.add_argument("--write-s-per-gb", dest="write_s_per_gb", type=float)
    p.add_argument("--gen-s-per-batch", dest="gen_s_per_batch", type=float)
    p.add_argument("--csv")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction)

    p = add("bench", cmd_bench, "run both pipelines and compare measured costs")
    p.add_argument("--manifest")
    p.add_argument("--batches", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--rng-seed", dest="rng_seed", type=int)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--read-s-per-gb", dest="read_s_per_gb", type=float)
    p.add_argument("--write-s-per-gb", dest="write_s_per_gb", type=float)
    p.add_argument("--gen-s-per-batch", dest="gen_s_per_batch", type=float)
    p.add_argument("--csv")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction)

    p = add("demo", cmd_demo, "train the residential/commercial classifier on streamed data")
    p.add_argument("--manifest")
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--train-batches", dest="train_batches", type=int)
    p.add_argument("--test-batches", dest="test_batches", type=int)
    p.add_argument("--rng-seed", dest="rng_seed", type=int)
    p.add_argument("--init-seed", dest="init_seed", type=int)
    p.add_argument("--hidden", type=int)
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--csv")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_help()
            return 1
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OtfError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
