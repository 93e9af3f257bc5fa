from typing import Optional

from pydantic.v1 import validator

from memrc.models.device import SynapseParams, VolatileDeviceParams
from memrc.models.energy import EnergyConfig
from memrc.models.model import BaseModel
from memrc.models.sclc import SclcConfig
from memrc.models.tasks import FsddExperimentConfig, TimeSeriesExperimentConfig

HARNESS_FORMAT_VERSION = 1


class StatesConfig(BaseModel):
    device_id: int = 0
    runs: int = 16

    @validator("runs")
    def runs_must_be_positive(cls, v):
        if v < 1:
            raise ValueError("must be positive")
        return v


class SynapseReportConfig(BaseModel):
    params: SynapseParams = SynapseParams()
    cycles: int = 100
    # crossbar population for the multi-device curves
    rows: int = 16
    cols: int = 16
    d2d_sigma: float = 0.05

    @validator("cycles", "rows", "cols")
    def counts_must_be_positive(cls, v):
        if v < 1:
            raise ValueError("must be positive")
        return v

    @validator("d2d_sigma")
    def spread_must_be_nonnegative(cls, v):
        if v < 0:
            raise ValueError("must be nonnegative")
        return v


class HarnessConfig(BaseModel):
    seed: int = 0
    out_dir: str = "results"
    # device used by the `states` dump; experiments carry their own
    device: VolatileDeviceParams = VolatileDeviceParams()
    states: StatesConfig = StatesConfig()
    synapse: SynapseReportConfig = SynapseReportConfig()
    fsdd: FsddExperimentConfig = FsddExperimentConfig()
    timeseries: TimeSeriesExperimentConfig = TimeSeriesExperimentConfig()
    energy: EnergyConfig = EnergyConfig()
    sclc: SclcConfig = SclcConfig()
    experiment_id: Optional[str] = None
