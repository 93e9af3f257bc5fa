import json
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from memrc.errors import FormatError, IngestionError
from memrc.models.model import BaseModel
from memrc.models.readout import OutputActivation
from memrc.readout.network import DenseLayer, ReadoutNetwork
from memrc.utils.files import atomic_write_text

CHECKPOINT_FORMAT_VERSION = 1


class LayerCheckpoint(BaseModel):
    shape: Tuple[int, int]
    gain: float
    weights: List[List[float]]
    biases: List[float]


class Checkpoint(BaseModel):
    format_version: int = CHECKPOINT_FORMAT_VERSION
    config_hash: Optional[str] = None
    output: OutputActivation
    layers: List[LayerCheckpoint]


def save_checkpoint(
    net: ReadoutNetwork, path: Union[str, Path], config_hash: Optional[str] = None
) -> Path:
    path = Path(path)
    checkpoint = Checkpoint(
        config_hash=config_hash,
        output=net.output,
        layers=[
            LayerCheckpoint(
                shape=layer.weights.shape,
                gain=layer.gain,
                weights=layer.weights.tolist(),
                biases=layer.biases.tolist(),
            )
            for layer in net.layers
        ],
    )
    atomic_write_text(path, checkpoint.json())
    logger.debug(f"Saved readout checkpoint to {path}")
    return path


def load_checkpoint(path: Union[str, Path]) -> Tuple[ReadoutNetwork, Optional[str]]:
    """Returns the network and the config hash it was trained under."""
    path = Path(path)
    if not path.is_file():
        raise IngestionError(str(path), "checkpoint not found")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise FormatError("checkpoint", f"{path.name} is not valid JSON ({e})")
    version = raw.get("format_version") if isinstance(raw, dict) else None
    if version != CHECKPOINT_FORMAT_VERSION:
        raise FormatError("format_version", f"unsupported checkpoint version {version!r}")
    try:
        checkpoint = Checkpoint.parse_obj(raw)
        layers = []
        for layer in checkpoint.layers:
            weights = np.array(layer.weights, dtype=float).reshape(layer.shape)
            layers.append(DenseLayer(weights=weights, biases=layer.biases, gain=layer.gain))
        net = ReadoutNetwork(layers=layers, output=checkpoint.output)
    except ValueError as e:
        raise FormatError("layers", str(e))
    return net, checkpoint.config_hash
