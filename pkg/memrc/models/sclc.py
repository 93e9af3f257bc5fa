from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic.v1 import root_validator, validator

from memrc.models.model import ArrayModel, BaseModel


class Branch(str, Enum):
    HRS = "HRS"
    LRS = "LRS"


class ConductionRegime(str, Enum):
    OHMIC = "ohmic"
    SCLC = "sclc"
    TFL = "tfl"
    # slope below the ohmic band
    UNCLASSIFIED = "unclassified"


class IvTrace(ArrayModel):
    voltage: np.ndarray
    current: np.ndarray
    branch: Branch = Branch.HRS

    @validator("voltage", "current", pre=True)
    def as_float_vector(cls, v):
        v = np.array(v, dtype=float)
        if v.ndim != 1:
            raise ValueError("must be one-dimensional")
        v.setflags(write=False)
        return v

    @validator("voltage")
    def voltages_must_increase(cls, v):
        if (np.diff(v) <= 0).any():
            raise ValueError("voltages must be strictly increasing")
        return v

    @root_validator(skip_on_failure=True)
    def lengths_must_match(cls, values):
        if values["voltage"].shape != values["current"].shape:
            raise ValueError("voltage and current differ in length")
        return values

    def __len__(self) -> int:
        return self.voltage.size


class RegionFit(BaseModel):
    v_range: Tuple[float, float]
    slope: float
    # log10 of the current extrapolated to 1 V
    intercept: float
    r_squared: float
    classification: Optional[ConductionRegime] = None
    num_points: int

    @validator("r_squared")
    def r_squared_must_be_a_fraction(cls, v):
        if not 0 <= v <= 1:
            raise ValueError("must be in [0, 1]")
        return v


class SclcConfig(BaseModel):
    ohmic_min: float = 0.8
    ohmic_max: float = 1.2
    sclc_max: float = 2.2
    min_points: int = 3
    max_breakpoints: int = 2

    @root_validator(skip_on_failure=True)
    def thresholds_must_increase(cls, values):
        if not values["ohmic_min"] < values["ohmic_max"] < values["sclc_max"]:
            raise ValueError("thresholds must satisfy ohmic_min < ohmic_max < sclc_max")
        return values

    @validator("min_points")
    def at_least_three_points(cls, v):
        if v < 3:
            raise ValueError("a segment needs at least 3 points")
        return v

    @validator("max_breakpoints")
    def breakpoints_in_range(cls, v):
        if not 0 <= v <= 2:
            raise ValueError("auto mode searches 0 to 2 breakpoints")
        return v
