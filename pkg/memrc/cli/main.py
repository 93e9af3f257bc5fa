import argparse
import sys
import uuid
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from loguru import logger
from pydantic.v1 import ValidationError

import memrc
from memrc.cli.config import config_hash, load_config
from memrc.cli.report import (
    ReportMeta,
    array_curves_csv,
    config_json,
    confusion_csv,
    emit_report,
    energy_csv,
    energy_table,
    fits_csv,
    history_csv,
    metrics_json,
    online_errors_csv,
    pd_statistics_csv,
    spread_csv,
    states_csv,
    sweep_csv,
    trace_csv,
)
from memrc.cli.selftest import run_selftest
from memrc.device.synapse import SynapseArray, pd_statistics, simulate_pd_cycles
from memrc.device.volatile import build_lookup_table, code_spreads
from memrc.energy.estimator import network_report
from memrc.errors import ConfigError, IngestionError, MemrcError
from memrc.logging import configure_json_logging, configure_pretty_logging
from memrc.models.energy import EnergyTask
from memrc.models.harness import HarnessConfig
from memrc.models.model import BaseModel
from memrc.models.readout import TrainingMode
from memrc.models.tasks import SERIES_WINDOW, ExperimentConfig
from memrc.readout.checkpoint import save_checkpoint
from memrc.sclc.fit import AUTO, fit_segments, read_iv_csv
from memrc.settings import get_settings
from memrc.tasks.fsdd import run_fsdd_experiment
from memrc.tasks.sweep import run_noise_sweep
from memrc.tasks.timeseries import run_timeseries_experiment
from memrc.utils.rng import LOOKUP, PD_CYCLES, SPREAD, substream

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_INGESTION = 3


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def _nonnegative_int(value: str) -> int:
    number = int(value)
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return number


def _add_global_options(parser: argparse.ArgumentParser, default) -> None:
    parser.add_argument("--config", default=default, help="JSON configuration file")
    parser.add_argument("--seed", type=int, default=default, help="root random seed")
    parser.add_argument("--out", default=default, help="output directory")
    parser.add_argument(
        "--log-json", action="store_true", default=default, help="log one JSON object per line"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memrc", description="Memristive reservoir-computing simulator and harness."
    )
    _add_global_options(parser, None)
    # global flags are accepted after the subcommand too without clobbering earlier values
    common = argparse.ArgumentParser(add_help=False)
    _add_global_options(common, argparse.SUPPRESS)
    commands = parser.add_subparsers(dest="command", required=True)

    states = commands.add_parser("states", parents=[common], help="dump a device lookup table")
    states.add_argument("--device", type=_nonnegative_int, default=None)
    states.add_argument("--runs", type=_positive_int, default=None)

    synapse = commands.add_parser(
        "synapse", parents=[common], help="potentiation/depression cycle statistics"
    )
    synapse.add_argument("--cycles", type=_positive_int, default=None)
    synapse.add_argument("--array", action="store_true", help="also dump crossbar cell curves")

    fsdd = commands.add_parser("fsdd", parents=[common], help="spoken-digit experiment")
    fsdd.add_argument("--data", default=None, help="FSDD recordings directory")
    fsdd.add_argument("--epochs", type=_nonnegative_int, default=None)
    fsdd.add_argument("--noise-sweep", action="store_true")

    series = commands.add_parser("timeseries", parents=[common], help="time-series prediction")
    series.add_argument("--mode", choices=[m.value for m in TrainingMode], default=None)
    series.add_argument("--steps", type=_positive_int, default=None)
    series.add_argument("--epochs", type=_nonnegative_int, default=None)

    energy = commands.add_parser("energy", parents=[common], help="energy and efficiency report")
    energy.add_argument("--task", choices=[t.value for t in EnergyTask], required=True)

    sclc = commands.add_parser("sclcfit", parents=[common], help="piecewise I-V power-law fits")
    sclc.add_argument("--input", required=True, help="CSV with voltage,current,branch columns")
    sclc.add_argument("--breakpoints", default=AUTO, help="comma-separated volts or 'auto'")

    commands.add_parser("selftest", parents=[common], help="run the invariant checks")
    return parser


def _updated(model: BaseModel, **changes) -> BaseModel:
    """Copy of `model` with `changes`, re-validated."""
    try:
        return model.__class__.parse_obj({**model.dict(), **changes})
    except ValidationError as e:
        raise ConfigError(f"invalid override {sorted(changes)}: {e}")


def _seeded(experiment: ExperimentConfig, seed: int) -> ExperimentConfig:
    return _updated(  # type: ignore
        experiment, seed=seed, train=_updated(experiment.train, seed=seed).dict()
    )


def _epochs(experiment: ExperimentConfig, epochs: Optional[int]) -> ExperimentConfig:
    if epochs is None:
        return experiment
    train = _updated(experiment.train, epochs=epochs)
    return _updated(experiment, train=train.dict())  # type: ignore


def cmd_states(args, config: HarnessConfig, meta: ReportMeta) -> int:
    device_id = config.states.device_id if args.device is None else args.device
    runs = config.states.runs if args.runs is None else args.runs
    lookup = build_lookup_table(
        config.device,
        device_id=device_id,
        averaging_runs=runs,
        rng=substream(config.seed, LOOKUP, device_id),
    )
    text = states_csv(lookup, meta)
    out = Path(config.out_dir)
    # an explicit file name takes the table and the spread goes next to it
    stem = out.stem if out.suffix == ".csv" else f"states_device{device_id}"
    artifacts = {f"{stem}.csv": text}
    if runs > 1:
        spreads = code_spreads(
            config.device, device_id, runs, rng=substream(config.seed, SPREAD, device_id)
        )
        artifacts[f"{stem}_spread.csv"] = spread_csv(spreads, meta)
    emit_report(artifacts, _artifact_dir(config))
    print(text, end="")
    return EXIT_OK


def cmd_synapse(args, config: HarnessConfig, meta: ReportMeta) -> int:
    report = config.synapse
    cycles = report.cycles if args.cycles is None else args.cycles
    traces = simulate_pd_cycles(report.params, cycles, rng=substream(config.seed, PD_CYCLES))
    stats = pd_statistics(traces)
    artifacts = {"synapse_pd.csv": pd_statistics_csv(stats, report.params, meta)}
    if args.array:
        array = SynapseArray.create(
            report.params, report.rows, report.cols, report.d2d_sigma, seed=config.seed
        )
        artifacts["synapse_array.csv"] = array_curves_csv(array.pd_curves(), meta)
    emit_report(artifacts, config.out_dir)
    worst = float(np.max(stats.relative_standard_error))
    print(f"cycles={cycles} max_relative_standard_error={worst:.4f}")
    return EXIT_OK


def cmd_fsdd(args, config: HarnessConfig, meta: ReportMeta) -> int:
    experiment = _epochs(_seeded(config.fsdd, config.seed), args.epochs)
    if args.data is not None:
        experiment = _updated(
            experiment, fsdd=_updated(experiment.fsdd, data_dir=args.data).dict()
        )
    if args.noise_sweep:
        sweep = run_noise_sweep(experiment)
        emit_report({"noise_sweep.csv": sweep_csv(sweep, meta)}, config.out_dir)
        for sigma, accuracy in sorted(sweep.mean_accuracy.items()):
            print(f"sigma={sigma:g} mean_accuracy={accuracy:.4f}")
        return EXIT_OK

    result = run_fsdd_experiment(experiment)
    result.metrics.config_hash = meta.config_hash
    emit_report(
        {
            "fsdd_metrics.json": metrics_json(result.metrics, meta),
            "fsdd_confusion.csv": confusion_csv(result.metrics, meta),
            "fsdd_history.csv": history_csv(result.history, meta),
        },
        config.out_dir,
    )
    save_checkpoint(result.net, Path(config.out_dir) / "fsdd_readout.json", meta.config_hash)
    print(f"accuracy={result.metrics.accuracy:.4f} wer={result.metrics.wer:.4f}")
    return EXIT_OK


def cmd_timeseries(args, config: HarnessConfig, meta: ReportMeta) -> int:
    experiment = _epochs(_seeded(config.timeseries, config.seed), args.epochs)
    if args.mode is not None:
        experiment = _updated(experiment, train=_updated(experiment.train, mode=args.mode).dict())
    if args.steps is not None:
        series = experiment.series
        length = args.steps + series.washout + SERIES_WINDOW - 1
        experiment = _updated(experiment, series=_updated(series, length=length).dict())

    result = run_timeseries_experiment(experiment)
    result.metrics.config_hash = meta.config_hash
    artifacts = {
        "timeseries_metrics.json": metrics_json(result.metrics, meta),
        "timeseries_trace.csv": trace_csv(result.trace, meta),
        "timeseries_history.csv": history_csv(result.history, meta),
    }
    if result.history.online_errors:
        artifacts["timeseries_online_errors.csv"] = online_errors_csv(result.history, meta)
    emit_report(artifacts, config.out_dir)
    save_checkpoint(
        result.net, Path(config.out_dir) / "timeseries_readout.json", meta.config_hash
    )
    flag = " (degenerate)" if result.metrics.nrmse_degenerate else ""
    print(f"nrmse={result.metrics.nrmse:.4f}{flag}")
    return EXIT_OK


def cmd_energy(args, config: HarnessConfig, meta: ReportMeta) -> int:
    report = network_report(config.energy, args.task)
    emit_report({f"energy_{report.task.value}.csv": energy_csv(report, meta)}, config.out_dir)
    print(energy_table(report))
    return EXIT_OK


def _parse_breakpoints(value: str):
    if value.strip().lower() == AUTO:
        return AUTO
    try:
        return [float(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(
            f"--breakpoints expects comma-separated volts or '{AUTO}', got {value!r}",
            key="breakpoints",
        )


def cmd_sclcfit(args, config: HarnessConfig, meta: ReportMeta) -> int:
    breakpoints = _parse_breakpoints(args.breakpoints)
    traces = read_iv_csv(args.input)
    fits = {
        branch: fit_segments(trace, breakpoints, config.sclc) for branch, trace in traces.items()
    }
    emit_report({"sclc_fits.csv": fits_csv(fits, meta)}, config.out_dir)
    for branch, regions in fits.items():
        for region in regions:
            low, high = region.v_range
            print(
                f"{branch.value} {low:.3g}-{high:.3g} V: slope {region.slope:.3f} "
                f"({region.classification.value if region.classification else '-'}, "
                f"r2={region.r_squared:.4f})"
            )
    return EXIT_OK


def cmd_selftest(args, config: HarnessConfig, meta: ReportMeta) -> int:
    return EXIT_OK if run_selftest() else EXIT_FAILURE


COMMANDS: Dict[str, Callable[..., int]] = {
    "states": cmd_states,
    "synapse": cmd_synapse,
    "fsdd": cmd_fsdd,
    "timeseries": cmd_timeseries,
    "energy": cmd_energy,
    "sclcfit": cmd_sclcfit,
    "selftest": cmd_selftest,
}


def _configure_logging(log_json: bool) -> None:
    if log_json or get_settings().log_format == "json":
        configure_json_logging()
    else:
        configure_pretty_logging()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK

    _configure_logging(bool(args.log_json))
    try:
        config = load_config(args.config)
        if args.seed is not None:
            config.seed = args.seed
        if args.out is not None:
            config.out_dir = args.out
        digest = config_hash(config)
        memrc.config_hash.set(digest)
        memrc.experiment_id.set(config.experiment_id or uuid.uuid4().hex)
        meta = ReportMeta(config_hash=digest, seed=config.seed)
        if args.command != "selftest":
            emit_report({"config.json": config_json(config)}, _artifact_dir(config))
        logger.info(f"Running {args.command} (config {digest}, seed {config.seed})")
        return COMMANDS[args.command](args, config, meta)
    except IngestionError as e:
        print(f"memrc: {e}", file=sys.stderr)
        return EXIT_INGESTION
    except MemrcError as e:
        print(f"memrc: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as e:
        logger.exception(f"Unexpected failure in {args.command}")
        print(f"memrc: unexpected error: {e}", file=sys.stderr)
        return EXIT_FAILURE


def _artifact_dir(config: HarnessConfig) -> Path:
    out = Path(config.out_dir)
    return out.parent if out.suffix == ".csv" else out


def run() -> None:
    sys.exit(main(sys.argv[1:]))
