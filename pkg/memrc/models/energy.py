from enum import Enum
from typing import List, Optional

from pydantic.v1 import validator

from memrc.models.device import (
    DEFAULT_STM_PULSE_WIDTH,
    DEFAULT_V_READ,
    DEFAULT_V_WRITE,
)
from memrc.models.model import BaseModel

# 300 nA compliance current of the reservoir devices
DEFAULT_DEVICE_CURRENT = 300e-9
DEFAULT_READOUT_VOLTAGE = 5.0
DEFAULT_READOUT_CURRENT = 1e-6
DEFAULT_READOUT_PULSE_WIDTH = 5e-6
DEFAULT_ADC_ENERGY = 3e-12
DEFAULT_POWER_PER_MEMRISTOR = 1e-6


class EnergyTask(str, Enum):
    SPEECH = "speech"
    TIMESERIES = "timeseries"


class TaskFigures(BaseModel):
    readout_sizes: List[int]
    ops_per_epoch: float
    epoch_time: float
    # published figures, echoed for comparison
    published_memristors: int
    published_ops_per_epoch: float
    published_epoch_time: float
    published_power: float


TASK_FIGURES = {
    EnergyTask.SPEECH: TaskFigures(
        readout_sizes=[32, 128, 64, 10],
        ops_per_epoch=150,
        epoch_time=5.5e-3,
        published_memristors=150,
        published_ops_per_epoch=150,
        published_epoch_time=5.5e-3,
        published_power=150e-6,
    ),
    EnergyTask.TIMESERIES: TaskFigures(
        readout_sizes=[20, 128, 64, 1],
        ops_per_epoch=27200,
        epoch_time=1.0,
        published_memristors=8896,
        published_ops_per_epoch=27200,
        published_epoch_time=1.0,
        published_power=8896e-6,
    ),
}


class EnergyConfig(BaseModel):
    # reservoir write pulse
    pulse_voltage: float = DEFAULT_V_WRITE
    device_current: float = DEFAULT_DEVICE_CURRENT
    pulse_width: float = DEFAULT_STM_PULSE_WIDTH
    read_voltage: float = DEFAULT_V_READ
    readout_voltage: float = DEFAULT_READOUT_VOLTAGE
    readout_current: float = DEFAULT_READOUT_CURRENT
    readout_pulse_width: float = DEFAULT_READOUT_PULSE_WIDTH
    adc_energy: float = DEFAULT_ADC_ENERGY
    power_per_memristor: float = DEFAULT_POWER_PER_MEMRISTOR
    # None takes the task's figure (or, for the count, the readout shape)
    ops_per_epoch: Optional[float] = None
    epoch_time: Optional[float] = None
    num_memristors: Optional[int] = None

    @validator(
        "pulse_voltage",
        "device_current",
        "pulse_width",
        "read_voltage",
        "readout_voltage",
        "readout_current",
        "readout_pulse_width",
        "adc_energy",
        "power_per_memristor",
    )
    def must_be_positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @validator("ops_per_epoch", "epoch_time", "num_memristors")
    def overrides_must_be_positive(cls, v):
        if v is not None and v <= 0:
            raise ValueError("must be positive")
        return v


class EnergyRow(BaseModel):
    component: str
    energy_per_op: Optional[float] = None
    count: Optional[int] = None
    power: Optional[float] = None
    ops_per_second_per_watt: Optional[float] = None


class EnergyReport(BaseModel):
    task: EnergyTask
    rows: List[EnergyRow]
    memristors: int
    published_memristors: int

    @property
    def totals(self) -> EnergyRow:
        return next(row for row in self.rows if row.component == "total")

    @property
    def published(self) -> EnergyRow:
        return next(row for row in self.rows if row.component == "published")
