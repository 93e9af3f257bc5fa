from typing import Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from memrc.device.volatile import build_lookup_table
from memrc.errors import EmptyInputError, InputShapeError, InternalConsistencyError
from memrc.models.device import VolatileDeviceParams
from memrc.models.reservoir import (
    NUM_CODES,
    NUM_SLOTS,
    Mask,
    Pooling,
    ReservoirConfig,
    ReservoirLookup,
    StateReads,
)
from memrc.reservoir.encoding import encode_frames
from memrc.reservoir.mask import random_mask
from memrc.utils.rng import LOOKUP, MASK, substream


def reservoir_forward(codes: Sequence[int], lookups: Sequence[ReservoirLookup]) -> np.ndarray:
    """Concatenated 4-read states of every node, length 4 * num_nodes."""
    if len(codes) != len(lookups):
        raise InputShapeError(f"{len(codes)} codes for {len(lookups)} node lookups")
    rows = []
    for code, lookup in zip(codes, lookups):
        if not 0 <= int(code) < lookup.table.shape[0]:
            raise InternalConsistencyError(f"no lookup row for code {code}")
        rows.append(lookup.row(int(code)))
    return np.concatenate(rows)


def pool_over_frames(states: np.ndarray, mode: Pooling = Pooling.MEAN) -> np.ndarray:
    states = np.asarray(states, dtype=float)
    if states.ndim != 2 or states.shape[0] == 0:
        raise EmptyInputError("pooling needs at least one frame")
    if Pooling(mode) == Pooling.LAST:
        return states[-1].copy()
    return states.mean(axis=0)


class Reservoir:
    """Mask encoder plus one lookup table per node."""

    def __init__(self, config: ReservoirConfig, mask: Mask, lookups: List[ReservoirLookup]):
        if mask.num_nodes != config.num_nodes or len(lookups) != config.num_nodes:
            raise InputShapeError(
                f"reservoir has {config.num_nodes} nodes but the mask has {mask.num_nodes} rows "
                f"and {len(lookups)} lookups were given"
            )
        self.config = config
        self.mask = mask
        self.lookups = lookups
        stacked = np.stack([lookup.table for lookup in lookups])
        if stacked.shape[1:] != (NUM_CODES, NUM_SLOTS):
            raise InternalConsistencyError(f"unexpected lookup shape {stacked.shape}")
        if config.state_reads == StateReads.FINAL:
            stacked = stacked[:, :, -1:]
        self._tables = stacked

    @classmethod
    def build(
        cls,
        config: ReservoirConfig,
        device_params: VolatileDeviceParams,
        num_features: int,
        seed: int,
        mask: Optional[Mask] = None,
    ) -> "Reservoir":
        if mask is None:
            mask_seed = int(substream(seed, MASK).integers(2**31))
            mask = random_mask(config.num_nodes, num_features, mask_seed, config.mask_density)
        tables: Dict[int, ReservoirLookup] = {}
        for device_id in config.per_node_device_ids or []:
            if device_id not in tables:
                tables[device_id] = build_lookup_table(
                    device_params,
                    device_id=device_id,
                    averaging_runs=config.averaging_runs,
                    rng=substream(seed, LOOKUP, device_id),
                )
        lookups = [tables[device_id] for device_id in config.per_node_device_ids or []]
        logger.debug(
            f"Built reservoir: {config.num_nodes} nodes, {len(tables)} distinct devices, "
            f"{num_features} input features"
        )
        return cls(config, mask, lookups)

    @property
    def state_dim(self) -> int:
        return self.config.state_dim

    def encode(self, frames: np.ndarray) -> np.ndarray:
        return encode_frames(frames, self.mask)

    def states_from_codes(self, codes: np.ndarray) -> np.ndarray:
        """frames x nodes codes -> frames x state_dim."""
        codes = np.atleast_2d(codes)
        nodes = np.arange(self.config.num_nodes)
        return self._tables[nodes, codes].reshape(codes.shape[0], -1)

    def transform(self, frames: np.ndarray) -> np.ndarray:
        return self.states_from_codes(self.encode(frames))

    def features(self, frames: np.ndarray) -> np.ndarray:
        return pool_over_frames(self.transform(frames), self.config.pooling)
