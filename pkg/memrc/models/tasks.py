from enum import Enum
from typing import List, Optional

from pydantic.v1 import root_validator, validator

from memrc.models.audio import FeatureConfig, SplitStrategy
from memrc.models.device import VolatileDeviceParams
from memrc.models.model import BaseModel, TypedModel
from memrc.models.readout import LossType, TrainConfig, WeightUpdateRule
from memrc.models.reservoir import Pooling, ReservoirConfig

NUM_DIGITS = 10
SERIES_WINDOW = 5


class ExperimentType(str, Enum):
    BASE = "experiment_base"
    FSDD = "experiment_fsdd"
    TIMESERIES = "experiment_timeseries"


class TimeSeriesConfig(BaseModel):
    length: int = 5054
    washout: int = 50
    train_fraction: float = 0.8
    seed: int = 0

    @validator("washout")
    def washout_must_be_nonnegative(cls, v):
        if v < 0:
            raise ValueError("must be nonnegative")
        return v

    @validator("train_fraction")
    def train_fraction_must_be_proper(cls, v):
        if not 0 < v < 1:
            raise ValueError("must be in (0, 1)")
        return v

    @root_validator(skip_on_failure=True)
    def length_must_exceed_washout(cls, values):
        if values["length"] <= values["washout"] + 10:
            raise ValueError("length must exceed washout + 10")
        return values

    @property
    def num_samples(self) -> int:
        """Windows u[k..k+4] that fit after the washout."""
        return self.length - self.washout - (SERIES_WINDOW - 1)

    @property
    def num_train(self) -> int:
        return int(round(self.train_fraction * self.num_samples))


class FsddConfig(BaseModel):
    data_dir: Optional[str] = None
    split: SplitStrategy = SplitStrategy.RANDOM
    test_fraction: float = 0.1
    test_speakers: List[str] = []
    features: FeatureConfig = FeatureConfig()
    noise_sigma: float = 0.0
    sweep_sigmas: List[float] = [0.0, 0.01, 0.05, 0.1]
    sweep_seeds: List[int] = [0, 1, 2, 3, 4]
    max_concurrency: Optional[int] = None

    @validator("test_fraction")
    def test_fraction_must_be_proper(cls, v):
        if not 0 < v < 1:
            raise ValueError("must be in (0, 1)")
        return v

    @validator("noise_sigma")
    def noise_must_be_nonnegative(cls, v):
        if v < 0:
            raise ValueError("must be nonnegative")
        return v

    @validator("sweep_sigmas")
    def sweep_sigmas_must_be_nonnegative(cls, v):
        if any(sigma < 0 for sigma in v):
            raise ValueError("sigmas must be nonnegative")
        return v

    @root_validator(skip_on_failure=True)
    def speaker_split_needs_speakers(cls, values):
        if values["split"] == SplitStrategy.SPEAKER and not values["test_speakers"]:
            raise ValueError("a speaker split needs test_speakers")
        return values


class MetricsReport(BaseModel):
    accuracy: Optional[float] = None
    wer: Optional[float] = None
    confusion: Optional[List[List[int]]] = None
    # None where the class never appears among predictions (precision) or labels (recall)
    precision: Optional[List[Optional[float]]] = None
    recall: Optional[List[Optional[float]]] = None
    nrmse: Optional[float] = None
    nrmse_degenerate: bool = False
    num_train: int = 0
    num_test: int = 0
    config_hash: Optional[str] = None
    seed: Optional[int] = None


class ExperimentConfig(TypedModel, type=ExperimentType.BASE.value):  # type: ignore
    seed: int = 0
    device: VolatileDeviceParams = VolatileDeviceParams()
    reservoir: ReservoirConfig = ReservoirConfig()
    train: TrainConfig = TrainConfig()


class FsddExperimentConfig(ExperimentConfig, type=ExperimentType.FSDD.value):  # type: ignore
    fsdd: FsddConfig = FsddConfig()
    train: TrainConfig = TrainConfig(epochs=100)


class TimeSeriesExperimentConfig(  # type: ignore
    ExperimentConfig, type=ExperimentType.TIMESERIES.value
):
    series: TimeSeriesConfig = TimeSeriesConfig()
    reservoir: ReservoirConfig = ReservoirConfig(num_nodes=SERIES_WINDOW, pooling=Pooling.LAST)
    train: TrainConfig = TrainConfig(
        epochs=30,
        loss=LossType.MSE,
        weight_update=WeightUpdateRule.STOCHASTIC_PULSE,
        validation_fraction=0.1,
    )

    @validator("reservoir")
    def one_node_per_window_input(cls, v):
        if v.num_nodes != SERIES_WINDOW:
            raise ValueError(f"the time-series reservoir has {SERIES_WINDOW} nodes")
        return v
