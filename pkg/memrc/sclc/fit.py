"""
Piecewise power-law fits of I-V sweeps.

Each segment is a straight line in (log10 V, log10 I); its slope identifies the conduction regime:
about 1 for ohmic transport, about 2 for trap-limited space-charge-limited current and steeper for
the trap-filled limit. Breakpoints are either given or chosen by the Bayesian information criterion
among 0, 1 and 2 breakpoints placed on measured voltages.
"""

import csv
import itertools
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from memrc.errors import DomainError, FormatError, IngestionError, InputShapeError
from memrc.models.sclc import Branch, ConductionRegime, IvTrace, RegionFit, SclcConfig
from memrc.utils.files import atomic_write_text, csv_text

AUTO = "auto"
# mean squared log10 residual below which segmentations count as exact fits
MIN_MEAN_SQUARED_RESIDUAL = 1e-12

Breakpoints = Union[Sequence[float], str]


def classify(region: RegionFit, config: SclcConfig = SclcConfig()) -> ConductionRegime:
    m = region.slope
    if m < config.ohmic_min:
        return ConductionRegime.UNCLASSIFIED
    if m <= config.ohmic_max:
        return ConductionRegime.OHMIC
    if m <= config.sclc_max:
        return ConductionRegime.SCLC
    return ConductionRegime.TFL


def _log_domain(trace: IvTrace) -> Tuple[np.ndarray, np.ndarray]:
    if (trace.voltage <= 0).any() or (trace.current <= 0).any():
        raise DomainError("log-log fitting needs positive voltages and currents")
    return np.log10(trace.voltage), np.log10(trace.current)


class _SegmentSums:
    """Prefix sums that give the least-squares residual of any contiguous segment in O(1)."""

    def __init__(self, x: np.ndarray, y: np.ndarray):
        # centering keeps the cancellation in the residual formula near machine precision
        x, y = x - x.mean(), y - y.mean()
        zero = np.zeros(1)
        self.n = np.arange(x.size + 1, dtype=float)
        self.sx = np.concatenate([zero, np.cumsum(x)])
        self.sy = np.concatenate([zero, np.cumsum(y)])
        self.sxx = np.concatenate([zero, np.cumsum(x * x)])
        self.sxy = np.concatenate([zero, np.cumsum(x * y)])
        self.syy = np.concatenate([zero, np.cumsum(y * y)])

    def residual(self, start: int, stop: int) -> float:
        n = self.n[stop] - self.n[start]
        sx = self.sx[stop] - self.sx[start]
        sy = self.sy[stop] - self.sy[start]
        cxx = self.sxx[stop] - self.sxx[start] - sx * sx / n
        cxy = self.sxy[stop] - self.sxy[start] - sx * sy / n
        cyy = self.syy[stop] - self.syy[start] - sy * sy / n
        if cxx <= 0:
            return max(cyy, 0.0)
        return max(cyy - cxy * cxy / cxx, 0.0)


def _information_criterion(ssr: float, n: int, segments: int) -> float:
    k = 3 * segments - 1
    return n * math.log(max(ssr / n, MIN_MEAN_SQUARED_RESIDUAL)) + k * math.log(n)


def choose_breakpoints(
    trace: IvTrace, config: SclcConfig = SclcConfig()
) -> Tuple[List[int], float]:
    """Indices where new segments start, and the total residual of that segmentation."""
    x, y = _log_domain(trace)
    n, p = x.size, config.min_points
    if n < p:
        raise InputShapeError(f"{n} points cannot fill a {p}-point segment")
    sums = _SegmentSums(x, y)

    best: Tuple[float, List[int], float] = (math.inf, [], math.inf)
    for count in range(config.max_breakpoints + 1):
        for starts in itertools.combinations(range(p, n - p + 1), count):
            bounds = [0, *starts, n]
            if any(b - a < p for a, b in zip(bounds, bounds[1:])):
                continue
            ssr = sum(sums.residual(a, b) for a, b in zip(bounds, bounds[1:]))
            score = _information_criterion(ssr, n, count + 1)
            if score < best[0]:
                best = (score, list(starts), ssr)
    logger.debug(f"Chose {len(best[1])} breakpoint(s) for the {trace.branch.value} branch")
    return best[1], best[2]


def _starts_for_voltages(trace: IvTrace, breakpoints: Sequence[float]) -> List[int]:
    # a point sitting exactly on a breakpoint opens the segment to its right
    return [int(np.searchsorted(trace.voltage, b, side="left")) for b in sorted(breakpoints)]


def _fit_region(x: np.ndarray, y: np.ndarray, config: SclcConfig) -> RegionFit:
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (intercept + slope * x)
    total = float(((y - y.mean()) ** 2).sum())
    r_squared = 1.0 if total == 0 else 1.0 - float((residual**2).sum()) / total
    region = RegionFit(
        v_range=(float(10 ** x[0]), float(10 ** x[-1])),
        slope=float(slope),
        intercept=float(intercept),
        r_squared=min(max(r_squared, 0.0), 1.0),
        num_points=x.size,
    )
    region.classification = classify(region, config)
    return region


def fit_segments(
    trace: IvTrace, breakpoints: Breakpoints = AUTO, config: SclcConfig = SclcConfig()
) -> List[RegionFit]:
    x, y = _log_domain(trace)
    if isinstance(breakpoints, str):
        if breakpoints != AUTO:
            raise ValueError(f"breakpoints must be a list of voltages or {AUTO!r}")
        starts, _ = choose_breakpoints(trace, config)
    else:
        starts = _starts_for_voltages(trace, breakpoints)

    bounds = [0, *starts, x.size]
    for a, b in zip(bounds, bounds[1:]):
        if b - a < config.min_points:
            raise InputShapeError(
                f"segment starting at {trace.voltage[min(a, x.size - 1)]:g} V has {b - a} "
                f"point(s), need {config.min_points}"
            )
    return [_fit_region(x[a:b], y[a:b], config) for a, b in zip(bounds, bounds[1:])]


def synthesize_trace(
    voltages: Sequence[float],
    segments: Sequence[Tuple[float, float]],
    i0: float = 1e-6,
    noise: float = 0.0,
    rng: Optional[np.random.Generator] = None,
    branch: Branch = Branch.HRS,
) -> IvTrace:
    """
    Continuous piecewise power law. `segments` lists (slope, start voltage); the first segment's
    start is ignored and it passes through i0 at 1 V. Noise is multiplicative, (1 + N(0, noise)).
    """
    if not segments:
        raise ValueError("at least one segment is required")
    v = np.asarray(voltages, dtype=float)
    log_v = np.log10(v)
    slopes = [slope for slope, _ in segments]
    starts = [-math.inf] + [math.log10(start) for _, start in segments[1:]]

    log_i = math.log10(i0) + slopes[0] * log_v
    for j in range(1, len(segments)):
        # continuity at each breakpoint: only the slope changes
        log_i = log_i + (slopes[j] - slopes[j - 1]) * np.maximum(log_v - starts[j], 0.0)

    current = 10**log_i
    if noise > 0:
        if rng is None:
            raise ValueError("a random source is required when noise > 0")
        current = current * np.clip(1.0 + rng.normal(0.0, noise, size=v.size), 1e-3, None)
    return IvTrace(voltage=v, current=current, branch=branch)


def read_iv_csv(path: Union[str, Path]) -> Dict[Branch, IvTrace]:
    """`voltage,current,branch` rows; each branch is sorted by voltage."""
    path = Path(path)
    if not path.is_file():
        raise IngestionError(str(path), "I-V file not found")
    points: Dict[Branch, List[Tuple[float, float]]] = {}
    with path.open(newline="", encoding="utf-8") as f:
        reader = csv.DictReader(row for row in f if not row.startswith("#"))
        missing = {"voltage", "current"} - set(reader.fieldnames or [])
        if missing:
            raise FormatError("header", f"{path.name} lacks column(s) {sorted(missing)}")
        for line, row in enumerate(reader, start=2):
            try:
                branch = Branch((row.get("branch") or Branch.HRS.value).strip().upper())
                points.setdefault(branch, []).append(
                    (float(row["voltage"]), float(row["current"]))
                )
            except ValueError as e:
                raise FormatError("row", f"{path.name} line {line}: {e}")
    if not points:
        raise FormatError("row", f"{path.name} has no data rows")
    traces = {}
    for branch, rows in points.items():
        rows.sort()
        try:
            traces[branch] = IvTrace(
                voltage=[v for v, _ in rows], current=[i for _, i in rows], branch=branch
            )
        except ValueError as e:
            raise FormatError("voltage", f"{branch.value} branch of {path.name}: {e}")
    return traces


FITS_HEADER = ("branch", "v_start", "v_end", "slope", "intercept", "r_squared", "classification")


def fits_rows(fits: Dict[Branch, List[RegionFit]]) -> List[Tuple[object, ...]]:
    return [
        (
            branch.value,
            f"{fit.v_range[0]:.6g}",
            f"{fit.v_range[1]:.6g}",
            f"{fit.slope:.6f}",
            f"{fit.intercept:.6f}",
            f"{fit.r_squared:.6f}",
            fit.classification.value if fit.classification else "",
        )
        for branch, regions in fits.items()
        for fit in regions
    ]


def write_fits_csv(
    fits: Dict[Branch, List[RegionFit]], path: Union[str, Path], comments: Sequence[str] = ()
) -> Path:
    return atomic_write_text(path, csv_text(FITS_HEADER, fits_rows(fits), comments))
