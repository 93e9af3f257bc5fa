"""
Nonvolatile analog synapse.

Potentiation and depression follow the normalized-exponential pulse-response model: after n
identical pulses the conductance has covered (1 - exp(-n/a)) / (1 - exp(-N/a)) of the range, with
a the nonlinearity constant and N the pulse count of a full sweep.
"""

from typing import Optional, Tuple, Union

import numpy as np
from pydantic.v1 import validator

from memrc.errors import DomainError
from memrc.models.device import PulseDirection, SynapseParams
from memrc.models.model import ArrayModel

POT = 1
DEP = -1

Number = Union[float, np.ndarray]


def _curve_fraction(n: Number, a: float, n_total: int) -> Number:
    return -np.expm1(-np.asarray(n, dtype=float) / a) / -np.expm1(-n_total / a)


def _inverse_curve_fraction(fraction: Number, a: float, n_total: int) -> Number:
    fraction = np.clip(fraction, 0.0, 1.0)
    return -a * np.log1p(fraction * np.expm1(-n_total / a))


def _check_pulse_index(n: float, n_total: int):
    if not 0 <= n <= n_total:
        raise DomainError(f"pulse index {n} outside [0, {n_total}]")


def potentiation_conductance(n: float, params: SynapseParams) -> float:
    _check_pulse_index(n, params.n_pot)
    return float(params.g_min + params.span * _curve_fraction(n, params.a_pot, params.n_pot))


def depression_conductance(n: float, params: SynapseParams) -> float:
    _check_pulse_index(n, params.n_dep)
    return float(params.g_max - params.span * _curve_fraction(n, params.a_dep, params.n_dep))


def apply_pulses(
    g: np.ndarray,
    direction: np.ndarray,
    params: SynapseParams,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """
    One programming pulse per element: +1 potentiates, -1 depresses, 0 leaves the element alone.

    Each conductance is mapped back onto its curve to find the effective pulse index, moved one
    pulse further, perturbed by multiplicative cycle-to-cycle noise and clamped to the range.
    """
    g = np.asarray(g, dtype=float)
    direction = np.asarray(direction)
    out = g.copy()

    pot = direction > 0
    if pot.any():
        fraction = (g[pot] - params.g_min) / params.span
        n = _inverse_curve_fraction(fraction, params.a_pot, params.n_pot)
        n = np.minimum(n + 1.0, params.n_pot)
        out[pot] = params.g_min + params.span * _curve_fraction(n, params.a_pot, params.n_pot)

    dep = direction < 0
    if dep.any():
        fraction = (params.g_max - g[dep]) / params.span
        n = _inverse_curve_fraction(fraction, params.a_dep, params.n_dep)
        n = np.minimum(n + 1.0, params.n_dep)
        out[dep] = params.g_max - params.span * _curve_fraction(n, params.a_dep, params.n_dep)

    moved = pot | dep
    if params.c2c_sigma > 0 and moved.any():
        if rng is None:
            raise ValueError("a random source is required when c2c_sigma > 0")
        out[moved] *= 1.0 + rng.normal(0.0, params.c2c_sigma, size=int(moved.sum()))
    return np.clip(out, params.g_min, params.g_max)


def noisy_pulse_update(
    g: float,
    direction: PulseDirection,
    params: SynapseParams,
    rng: Optional[np.random.Generator] = None,
) -> float:
    if not params.g_min <= g <= params.g_max:
        raise DomainError(f"conductance {g} outside [{params.g_min}, {params.g_max}]")
    step = POT if PulseDirection(direction) == PulseDirection.POTENTIATION else DEP
    return float(apply_pulses(np.array([g]), np.array([step]), params, rng)[0])


def simulate_pd_cycles(
    params: SynapseParams,
    cycles: int,
    rng: Optional[np.random.Generator] = None,
    g0: Optional[float] = None,
) -> np.ndarray:
    """
    cycles x (n_pot + n_dep + 1) conductance traces. Column 0 is the conductance before the
    cycle's first pulse; every cycle picks up where the previous one ended.
    """
    directions = np.concatenate([np.full(params.n_pot, POT), np.full(params.n_dep, DEP)])
    traces = np.empty((cycles, directions.size + 1))
    g = np.array([params.g_min if g0 is None else g0])
    for cycle in range(cycles):
        traces[cycle, 0] = g[0]
        for i, step in enumerate(directions, start=1):
            g = apply_pulses(g, np.array([step]), params, rng)
            traces[cycle, i] = g[0]
    return traces


class PulseStatistics(ArrayModel):
    mean: np.ndarray
    std: np.ndarray
    relative_std: np.ndarray
    relative_standard_error: np.ndarray


def pd_statistics(traces: np.ndarray) -> PulseStatistics:
    """Per-pulse-index spread of conductance across cycles."""
    cycles = traces.shape[0]
    mean = traces.mean(axis=0)
    std = traces.std(axis=0, ddof=1) if cycles > 1 else np.zeros_like(mean)
    relative_std = std / mean
    return PulseStatistics(
        mean=mean,
        std=std,
        relative_std=relative_std,
        relative_standard_error=relative_std / np.sqrt(cycles),
    )


class SynapseArray(ArrayModel):
    """A crossbar-sized population of synapses with frozen per-cell range variation."""

    params: SynapseParams
    g_min: np.ndarray
    g_max: np.ndarray

    @validator("g_max")
    def ranges_must_be_ordered(cls, v, values):
        if "g_min" in values and not (v > values["g_min"]).all():
            raise ValueError("every cell needs g_max > g_min")
        return v

    @classmethod
    def create(
        cls,
        params: SynapseParams,
        rows: int = 16,
        cols: int = 16,
        d2d_sigma: float = 0.05,
        seed: int = 0,
    ) -> "SynapseArray":
        rng = np.random.default_rng(seed)
        shape = (rows, cols)
        g_min = params.g_min * np.clip(1.0 + rng.normal(0.0, d2d_sigma, shape), 0.5, 1.5)
        g_max = params.g_max * np.clip(1.0 + rng.normal(0.0, d2d_sigma, shape), 0.5, 1.5)
        g_max = np.maximum(g_max, g_min * 1.01)
        return cls(params=params, g_min=g_min, g_max=g_max)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.g_min.shape  # type: ignore

    def cell_params(self, row: int, col: int) -> SynapseParams:
        return self.params.copy(
            update={"g_min": float(self.g_min[row, col]), "g_max": float(self.g_max[row, col])}
        )

    def pd_curves(self) -> np.ndarray:
        """rows x cols x (n_pot + n_dep + 1) noiseless P/D curves, one per cell."""
        p = self.params
        pot = _curve_fraction(np.arange(p.n_pot + 1), p.a_pot, p.n_pot)
        dep = 1.0 - _curve_fraction(np.arange(1, p.n_dep + 1), p.a_dep, p.n_dep)
        fraction = np.concatenate([pot, dep])
        span = (self.g_max - self.g_min)[..., None]
        return self.g_min[..., None] + span * fraction
