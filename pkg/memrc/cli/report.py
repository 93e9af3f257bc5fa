"""
Plot-ready artifacts. Every CSV starts with `#` metadata lines (config hash, seed, format version,
harness version) followed by a header row; JSON artifacts carry the same fields under `meta`.
"""

import json
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from memrc import __version__
from memrc.device.synapse import PulseStatistics
from memrc.device.volatile import code_label
from memrc.models.device import SynapseParams
from memrc.models.energy import EnergyReport
from memrc.models.harness import HARNESS_FORMAT_VERSION
from memrc.models.model import BaseModel
from memrc.models.readout import TrainHistory
from memrc.models.reservoir import ReservoirLookup
from memrc.models.sclc import Branch, RegionFit
from memrc.models.tasks import MetricsReport
from memrc.sclc.fit import FITS_HEADER, fits_rows
from memrc.tasks.sweep import NoiseSweep
from memrc.utils.files import atomic_write_text, csv_text


class ReportMeta(BaseModel):
    config_hash: str
    seed: int
    format_version: int = HARNESS_FORMAT_VERSION
    harness_version: str = __version__

    def comments(self) -> List[str]:
        return [f"{key}={value}" for key, value in self.dict().items()]


def _fmt(value) -> str:
    return "" if value is None else f"{value:.10g}"


def config_json(config: BaseModel) -> str:
    return json.dumps(json.loads(config.json()), indent=2, sort_keys=True)


def metrics_json(metrics: MetricsReport, meta: ReportMeta) -> str:
    return json.dumps({"meta": meta.dict(), "metrics": metrics.dict()}, indent=2, sort_keys=True)


def confusion_csv(metrics: MetricsReport, meta: ReportMeta) -> str:
    confusion = metrics.confusion or []
    header = ["true\\predicted", *[str(j) for j in range(len(confusion))]]
    rows = [[str(i), *row] for i, row in enumerate(confusion)]
    return csv_text(header, rows, meta.comments())


def history_csv(history: TrainHistory, meta: ReportMeta) -> str:
    rows = [
        (record.epoch, _fmt(record.loss), _fmt(record.accuracy), _fmt(record.eval_metric))
        for record in history.epochs
    ]
    return csv_text(("epoch", "loss", "accuracy", "eval_metric"), rows, meta.comments())


def online_errors_csv(history: TrainHistory, meta: ReportMeta) -> str:
    cumulative = np.cumsum(history.online_errors) if history.online_errors else []
    rows = [
        (step, _fmt(error), _fmt(total))
        for step, (error, total) in enumerate(zip(history.online_errors, cumulative))
    ]
    return csv_text(("step", "abs_error", "cumulative_error"), rows, meta.comments())


def trace_csv(trace: Sequence[Tuple[int, float, float]], meta: ReportMeta) -> str:
    rows = [(k, _fmt(y), _fmt(y_hat)) for k, y, y_hat in trace]
    return csv_text(("k", "y", "y_hat"), rows, meta.comments())


def sweep_csv(sweep: NoiseSweep, meta: ReportMeta) -> str:
    rows = [(_fmt(row.sigma), row.seed, _fmt(row.accuracy)) for row in sweep.rows]
    return csv_text(("sigma", "seed", "accuracy"), rows, meta.comments())


def states_csv(lookup: ReservoirLookup, meta: ReportMeta) -> str:
    rows = [(code_label(code), *map(_fmt, lookup.row(code))) for code in range(len(lookup.table))]
    return csv_text(("code", "read1", "read2", "read3", "read4"), rows, meta.comments())


def spread_csv(spreads: np.ndarray, meta: ReportMeta) -> str:
    rows = [(code_label(code), *map(_fmt, row)) for code, row in enumerate(spreads)]
    header = ("code", "spread1", "spread2", "spread3", "spread4")
    return csv_text(header, rows, meta.comments())


def pd_statistics_csv(stats: PulseStatistics, params: SynapseParams, meta: ReportMeta) -> str:
    # index 0 is the conductance before the first pulse of a cycle
    directions = ["start"] + ["potentiation"] * params.n_pot + ["depression"] * params.n_dep
    rows = [
        (pulse, direction, _fmt(mean), _fmt(std), _fmt(rel_std), _fmt(rel_err))
        for pulse, (direction, mean, std, rel_std, rel_err) in enumerate(
            zip(
                directions,
                stats.mean,
                stats.std,
                stats.relative_std,
                stats.relative_standard_error,
            )
        )
    ]
    header = ("pulse", "direction", "mean_s", "std_s", "relative_std", "relative_standard_error")
    return csv_text(header, rows, meta.comments())


def array_curves_csv(curves: np.ndarray, meta: ReportMeta) -> str:
    rows = [(row, col, pulse, _fmt(g)) for (row, col, pulse), g in np.ndenumerate(curves)]
    return csv_text(("row", "col", "pulse", "conductance_s"), rows, meta.comments())


def energy_csv(report: EnergyReport, meta: ReportMeta) -> str:
    rows = [
        (
            row.component,
            _fmt(row.energy_per_op),
            "" if row.count is None else row.count,
            _fmt(row.power),
            _fmt(row.ops_per_second_per_watt),
        )
        for row in report.rows
    ]
    header = ("component", "energy_per_op_j", "count", "power_w", "ops_per_second_per_watt")
    return csv_text(header, rows, meta.comments())


def energy_table(report: EnergyReport) -> str:
    lines = [f"{'component':<32}{'energy/op':>14}{'count':>10}{'power':>14}{'OPS/W':>16}"]
    for row in report.rows:
        energy = "" if row.energy_per_op is None else f"{row.energy_per_op * 1e12:.3f} pJ"
        count = "" if row.count is None else str(row.count)
        power = "" if row.power is None else f"{row.power * 1e6:.1f} uW"
        ops_per_watt = row.ops_per_second_per_watt
        # whole operations, truncated
        ops = "" if ops_per_watt is None else f"{int(ops_per_watt):,}"
        lines.append(f"{row.component:<32}{energy:>14}{count:>10}{power:>14}{ops:>16}")
    return "\n".join(lines)


def fits_csv(fits: Dict[Branch, List[RegionFit]], meta: ReportMeta) -> str:
    return csv_text(FITS_HEADER, fits_rows(fits), meta.comments())


def emit_report(artifacts: Dict[str, str], out_dir: Union[str, Path]) -> List[Path]:
    """Writes each named artifact under `out_dir` atomically; returns the written paths."""
    out_dir = Path(out_dir)
    paths = [atomic_write_text(out_dir / name, text) for name, text in artifacts.items()]
    for path in paths:
        logger.info(f"Wrote {path}")
    return paths
