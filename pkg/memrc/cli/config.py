import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Type, Union

from pydantic.v1 import BaseModel as Pydantic1BaseModel
from pydantic.v1 import ValidationError

from memrc.errors import ConfigError, IngestionError
from memrc.models.harness import HarnessConfig
from memrc.models.model import BaseModel, TypedModel

CONFIG_HASH_LENGTH = 16


def _model_class(field_type: Any, value: Any) -> Optional[Type[Pydantic1BaseModel]]:
    if not isinstance(field_type, type) or not issubclass(field_type, Pydantic1BaseModel):
        return None
    if issubclass(field_type, TypedModel) and isinstance(value, dict) and "type" in value:
        try:
            return TypedModel.for_type(value["type"])
        except ValueError:
            return field_type
    return field_type


def find_unknown_key(model: Type[Pydantic1BaseModel], data: Any, prefix: str = "") -> Optional[str]:
    """Dotted path of the first key that `model` does not declare, if any."""
    if not isinstance(data, dict):
        return None
    for key, value in data.items():
        dotted = f"{prefix}{key}"
        if key == "type" and issubclass(model, TypedModel):
            continue
        field = model.__fields__.get(key)
        if field is None:
            return dotted
        nested = _model_class(field.type_, value)
        if nested is not None:
            found = find_unknown_key(nested, value, prefix=f"{dotted}.")
            if found is not None:
                return found
    return None


def parse_config(data: Dict[str, Any]) -> HarnessConfig:
    if not isinstance(data, dict):
        raise ConfigError("the configuration must be a JSON object")
    unknown = find_unknown_key(HarnessConfig, data)
    if unknown is not None:
        raise ConfigError(f"unknown configuration key {unknown!r}", key=unknown)
    try:
        return HarnessConfig(**data)
    except ValidationError as e:
        error = e.errors()[0]
        key = ".".join(str(part) for part in error["loc"])
        raise ConfigError(f"invalid configuration value at {key!r}: {error['msg']}", key=key)
    except ValueError as e:
        raise ConfigError(f"invalid configuration: {e}")


def load_config(path: Optional[Union[str, Path]] = None) -> HarnessConfig:
    """Strict JSON parse; a missing path or an empty file yields every default."""
    if path is None:
        return HarnessConfig()
    path = Path(path)
    if not path.is_file():
        raise IngestionError(str(path), "configuration file not found")
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        return HarnessConfig()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path.name} is not valid JSON: {e}")
    return parse_config(data)


def canonical_json(config: BaseModel) -> str:
    return json.dumps(json.loads(config.json()), sort_keys=True, separators=(",", ":"))


def config_hash(config: BaseModel) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()[:CONFIG_HASH_LENGTH]
