from enum import Enum
from typing import List, Optional

from pydantic.v1 import root_validator, validator

from memrc.models.device import SynapseParams
from memrc.models.model import BaseModel


class TrainingMode(str, Enum):
    OFFLINE = "offline"
    ONLINE = "online"


class LossType(str, Enum):
    CROSS_ENTROPY = "cross_entropy"
    MSE = "mse"


class OutputActivation(str, Enum):
    SOFTMAX = "softmax"
    IDENTITY = "identity"


class WeightUpdateRule(str, Enum):
    MANHATTAN = "manhattan"
    NONLINEAR_DEVICE = "nonlinear_device"
    # fixed Manhattan steps, each fired only on a row/column pulse coincidence
    STOCHASTIC_PULSE = "stochastic_pulse"


class TrainConfig(BaseModel):
    epochs: int = 200
    batch_size: int = 32
    mode: TrainingMode = TrainingMode.OFFLINE
    loss: LossType = LossType.CROSS_ENTROPY
    noise_enabled: bool = False
    weight_update: WeightUpdateRule = WeightUpdateRule.MANHATTAN
    hidden_sizes: List[int] = [128, 64]
    shuffle: bool = True
    # largest coincidence probability of a pulse, for the stochastic_pulse rule
    pulse_probability: float = 0.05
    # tail of the training data held out to keep the best epoch; 0 keeps the last one
    validation_fraction: float = 0.0
    seed: int = 0
    synapse: SynapseParams = SynapseParams()

    @validator("epochs")
    def epochs_must_be_nonnegative(cls, v):
        if v < 0:
            raise ValueError("must be nonnegative")
        return v

    @validator("batch_size")
    def batch_size_must_be_positive(cls, v):
        if v < 1:
            raise ValueError("must be positive")
        return v

    @validator("pulse_probability")
    def pulse_probability_must_be_a_probability(cls, v):
        if not 0 < v <= 1:
            raise ValueError("must lie in (0, 1]")
        return v

    @validator("validation_fraction")
    def validation_fraction_must_leave_training_data(cls, v):
        if not 0 <= v < 1:
            raise ValueError("must lie in [0, 1)")
        return v

    @validator("hidden_sizes")
    def hidden_sizes_must_be_positive(cls, v):
        if any(size < 1 for size in v):
            raise ValueError("hidden layer sizes must be positive")
        return v

    @root_validator(skip_on_failure=True)
    def online_mode_uses_single_samples(cls, values):
        if values["mode"] == TrainingMode.ONLINE:
            values["batch_size"] = 1
        return values


class EpochRecord(BaseModel):
    epoch: int
    loss: float
    accuracy: Optional[float] = None
    eval_metric: Optional[float] = None
    # accuracy (classification) or loss (regression) on the held-out training tail
    validation_metric: Optional[float] = None


class TrainHistory(BaseModel):
    epochs: List[EpochRecord] = []
    # prequential absolute error per streamed sample (online mode only)
    online_errors: List[float] = []
    # epoch whose weights were returned when a validation tail is held out
    best_epoch: Optional[int] = None
