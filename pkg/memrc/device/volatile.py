"""
Short-term-memory reservoir neuron.

The internal state w in [0, 1] decays by `decay_factor` at the start of every pulse slot and, when
the slot carries a '1', grows toward 1 by `w_write_gain` of the remaining headroom. The device is
read after every slot; the read current interpolates linearly between g_off and g_on.
"""

from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from memrc.errors import InputShapeError, InternalConsistencyError
from memrc.models.device import VolatileDeviceParams, VolatileState
from memrc.models.reservoir import NUM_CODES, NUM_SLOTS, ReservoirLookup
from memrc.utils.rng import D2D, substream

D2D_ROOT_SEED = 0x5EED
D2D_FACTOR_BOUNDS = (0.5, 1.5)


@lru_cache(maxsize=1024)
def _d2d_factors(d2d_sigma: float, device_id: int) -> Tuple[float, float]:
    if d2d_sigma == 0:
        return 1.0, 1.0
    rng = substream(D2D_ROOT_SEED, D2D, device_id)
    off_factor, on_factor = np.clip(1.0 + rng.normal(0.0, d2d_sigma, size=2), *D2D_FACTOR_BOUNDS)
    return float(off_factor), float(on_factor)


def device_conductances(params: VolatileDeviceParams, device_id: int) -> Tuple[float, float]:
    """(g_off, g_on) of one physical device, with its frozen device-to-device perturbation."""
    off_factor, on_factor = _d2d_factors(params.d2d_sigma, device_id)
    g_off = params.g_off * off_factor
    g_on = max(params.g_on * on_factor, g_off * (1 + 1e-9))
    return g_off, g_on


def step_slot(
    state: VolatileState,
    bit: int,
    params: VolatileDeviceParams,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[VolatileState, float]:
    if bit not in (0, 1):
        raise InputShapeError(f"bit must be 0 or 1, got {bit!r}")
    w = params.decay_factor * state.w
    if bit == 1:
        w = w + params.w_write_gain * (1.0 - w)
    w = min(max(w, 0.0), 1.0)

    g_off, g_on = device_conductances(params, state.device_id)
    current = params.v_read * (g_off + w * (g_on - g_off))
    if params.c2c_sigma > 0:
        if rng is None:
            raise ValueError("a random source is required when c2c_sigma > 0")
        current *= 1.0 + rng.normal(0.0, params.c2c_sigma)
    return VolatileState(w=w, device_id=state.device_id), current


def run_bit_stream(
    bits: Sequence[int],
    params: VolatileDeviceParams,
    device_id: int = 0,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """write1-read1-write2-read2-write3-read3-write4-read4 on a fresh device."""
    if len(bits) != NUM_SLOTS:
        raise InputShapeError(f"expected {NUM_SLOTS} bits, got {len(bits)}")
    state = VolatileState(w=0.0, device_id=device_id)
    currents = np.empty(NUM_SLOTS)
    for slot, bit in enumerate(bits):
        state, currents[slot] = step_slot(state, int(bit), params, rng)
    return currents


def code_to_bits(code: int) -> Tuple[int, int, int, int]:
    if not 0 <= code < NUM_CODES:
        raise InputShapeError(f"code must be in [0, {NUM_CODES - 1}], got {code}")
    return tuple((code >> shift) & 1 for shift in range(NUM_SLOTS - 1, -1, -1))  # type: ignore


def bits_to_code(bits: Sequence[int]) -> int:
    if len(bits) != NUM_SLOTS:
        raise InputShapeError(f"expected {NUM_SLOTS} bits, got {len(bits)}")
    code = 0
    for bit in bits:
        code = (code << 1) | int(bit)
    return code


def code_label(code: int) -> str:
    return "".join(str(bit) for bit in code_to_bits(code))


def raw_state_table(
    params: VolatileDeviceParams,
    device_id: int = 0,
    averaging_runs: int = 1,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """16 x 4 read currents in amperes, averaged over `averaging_runs` repetitions."""
    if averaging_runs < 1:
        raise ValueError("averaging_runs must be at least 1")
    table = np.zeros((NUM_CODES, NUM_SLOTS))
    for _ in range(averaging_runs):
        for code in range(NUM_CODES):
            table[code] += run_bit_stream(code_to_bits(code), params, device_id, rng)
    return table / averaging_runs


def build_lookup_table(
    params: VolatileDeviceParams,
    device_id: int = 0,
    averaging_runs: int = 16,
    rng: Optional[np.random.Generator] = None,
) -> ReservoirLookup:
    table = raw_state_table(params, device_id, averaging_runs, rng)
    low, high = table.min(), table.max()
    if not high > low:
        raise InternalConsistencyError(f"device {device_id} produced a flat state table")
    logger.debug(
        f"Lookup table for device {device_id}: {low * 1e9:.2f} nA .. {high * 1e9:.2f} nA"
    )
    return ReservoirLookup(table=(table - low) / (high - low), device_id=device_id)


def repeat_bit_stream(
    bits: Sequence[int],
    params: VolatileDeviceParams,
    device_id: int = 0,
    runs: int = 16,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """runs x 4 read currents from applying the same stream to the same device repeatedly."""
    return np.stack([run_bit_stream(bits, params, device_id, rng) for _ in range(runs)])


def relative_spread(repetitions: np.ndarray) -> np.ndarray:
    """Per-read relative standard deviation of repeated recordings."""
    return repetitions.std(axis=0, ddof=1) / repetitions.mean(axis=0)


def code_spreads(
    params: VolatileDeviceParams,
    device_id: int = 0,
    runs: int = 16,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """16 x 4 relative spread of every read across `runs` repetitions of each code."""
    if runs < 2:
        raise InputShapeError(f"a spread needs at least 2 runs, got {runs}")
    return np.stack(
        [
            relative_spread(repeat_bit_stream(code_to_bits(code), params, device_id, runs, rng))
            for code in range(NUM_CODES)
        ]
    )
