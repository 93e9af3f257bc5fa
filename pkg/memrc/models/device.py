from enum import Enum

from pydantic.v1 import root_validator, validator

from memrc.models.model import BaseModel

DEFAULT_V_WRITE = 6.0
DEFAULT_V_READ = 2.0
DEFAULT_STM_PULSE_WIDTH = 10e-6
# 300 nA compliance at the 2 V read
DEFAULT_G_ON = 150e-9
DEFAULT_G_OFF = 5e-9

DEFAULT_PD_PULSES = 45
DEFAULT_PD_NONLINEARITY = 15.0
DEFAULT_SYNAPSE_C2C_SIGMA = 0.04


class PulseDirection(str, Enum):
    POTENTIATION = "pot"
    DEPRESSION = "dep"


class VolatileDeviceParams(BaseModel):
    w_write_gain: float = 0.5
    decay_factor: float = 0.8
    g_off: float = DEFAULT_G_OFF
    g_on: float = DEFAULT_G_ON
    v_read: float = DEFAULT_V_READ
    v_write: float = DEFAULT_V_WRITE
    pulse_width: float = DEFAULT_STM_PULSE_WIDTH
    c2c_sigma: float = 0.02
    d2d_sigma: float = 0.05

    @validator("w_write_gain")
    def write_gain_must_be_in_unit_interval(cls, v):
        if not 0 < v <= 1:
            raise ValueError("must be in (0, 1]")
        return v

    @validator("decay_factor")
    def decay_factor_must_be_in_open_unit_interval(cls, v):
        if not 0 < v < 1:
            raise ValueError("must be in (0, 1)")
        return v

    @validator("v_read", "v_write", "pulse_width")
    def must_be_positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @validator("c2c_sigma", "d2d_sigma")
    def sigma_must_be_nonnegative(cls, v):
        if v < 0:
            raise ValueError("must be nonnegative")
        return v

    @root_validator(skip_on_failure=True)
    def conductances_must_be_ordered(cls, values):
        if not values["g_on"] > values["g_off"] > 0:
            raise ValueError("requires g_on > g_off > 0")
        return values

    def noiseless(self) -> "VolatileDeviceParams":
        return self.copy(update={"c2c_sigma": 0.0, "d2d_sigma": 0.0})


class VolatileState(BaseModel):
    w: float = 0.0
    device_id: int = 0

    class Config:
        allow_mutation = False

    @validator("w")
    def w_must_be_in_unit_interval(cls, v):
        if not 0 <= v <= 1:
            raise ValueError("must be in [0, 1]")
        return v


class SynapseParams(BaseModel):
    g_min: float = 10e-9
    g_max: float = 100e-9
    n_pot: int = DEFAULT_PD_PULSES
    n_dep: int = DEFAULT_PD_PULSES
    a_pot: float = DEFAULT_PD_NONLINEARITY
    a_dep: float = DEFAULT_PD_NONLINEARITY
    c2c_sigma: float = DEFAULT_SYNAPSE_C2C_SIGMA
    v_pot: float = 5.0
    v_dep: float = -2.0
    pulse_width: float = 5e-6

    @validator("n_pot", "n_dep")
    def pulse_count_must_be_positive(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @validator("a_pot", "a_dep", "pulse_width")
    def must_be_positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @validator("c2c_sigma")
    def sigma_must_be_nonnegative(cls, v):
        if v < 0:
            raise ValueError("must be nonnegative")
        return v

    @root_validator(skip_on_failure=True)
    def conductances_must_be_ordered(cls, values):
        if not values["g_max"] > values["g_min"] > 0:
            raise ValueError("requires g_max > g_min > 0")
        return values

    def noiseless(self) -> "SynapseParams":
        return self.copy(update={"c2c_sigma": 0.0})

    @property
    def span(self) -> float:
        return self.g_max - self.g_min
