from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic.v1 import root_validator, validator

from memrc.models.model import ArrayModel, BaseModel

NUM_CODES = 16
NUM_SLOTS = 4


class Pooling(str, Enum):
    MEAN = "mean"
    LAST = "last"


class StateReads(str, Enum):
    ALL = "all"
    FINAL = "final"


class ReservoirConfig(BaseModel):
    num_nodes: int = 8
    pooling: Pooling = Pooling.MEAN
    state_reads: StateReads = StateReads.ALL
    per_node_device_ids: Optional[List[int]] = None
    mask_density: float = 0.5
    averaging_runs: int = 16

    @validator("num_nodes", "averaging_runs")
    def must_be_positive(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @validator("mask_density")
    def density_must_be_in_unit_interval(cls, v):
        if not 0 < v <= 1:
            raise ValueError("must be in (0, 1]")
        return v

    @root_validator(skip_on_failure=True)
    def device_ids_must_match_nodes(cls, values):
        device_ids = values.get("per_node_device_ids")
        if device_ids is None:
            values["per_node_device_ids"] = list(range(values["num_nodes"]))
        elif len(device_ids) != values["num_nodes"]:
            raise ValueError(
                f"per_node_device_ids has {len(device_ids)} entries for {values['num_nodes']} nodes"
            )
        return values

    @property
    def reads_per_node(self) -> int:
        return NUM_SLOTS if self.state_reads == StateReads.ALL else 1

    @property
    def state_dim(self) -> int:
        return self.num_nodes * self.reads_per_node


class ReservoirLookup(ArrayModel):
    """Normalized read currents, one row per 4-bit code (row index = code, MSB = first slot)."""

    table: np.ndarray
    device_id: int = 0

    @validator("table", pre=True)
    def table_must_be_normalized(cls, v):
        v = np.array(v, dtype=float)
        if v.shape != (NUM_CODES, NUM_SLOTS):
            raise ValueError(f"expected shape {(NUM_CODES, NUM_SLOTS)}, got {v.shape}")
        if v.min() < 0 or v.max() > 1:
            raise ValueError("entries must lie in [0, 1]")
        v.setflags(write=False)
        return v

    def row(self, code: int) -> np.ndarray:
        return self.table[code]


class Mask(ArrayModel):
    matrix: np.ndarray
    seed: int

    @validator("matrix", pre=True)
    def rows_must_be_binary_and_nonempty(cls, v):
        v = np.array(v, dtype=float)
        if v.ndim != 2:
            raise ValueError("mask must be a nodes x features matrix")
        if not np.isin(v, (0.0, 1.0)).all():
            raise ValueError("mask entries must be 0 or 1")
        if (v.sum(axis=1) == 0).any():
            raise ValueError("every node row needs at least one nonzero entry")
        v.setflags(write=False)
        return v

    @property
    def num_nodes(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_features(self) -> int:
        return self.matrix.shape[1]
