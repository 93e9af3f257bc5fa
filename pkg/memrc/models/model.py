from typing import Any, ClassVar, Dict, Type

from pydantic.v1 import BaseModel as Pydantic1BaseModel
from pydantic.v1 import Extra


class BaseModel(Pydantic1BaseModel):
    class Config:
        extra = Extra.forbid
        validate_assignment = True

    def __init__(self, **data):
        # nested experiment configs arrive as {"type": ..., ...} dicts
        for key, value in data.items():
            if isinstance(value, dict) and "type" in value:
                data[key] = TypedModel.parse_obj(value)
        super().__init__(**data)


class ArrayModel(BaseModel):
    """Value types that carry numpy arrays."""

    class Config:
        extra = Extra.forbid
        arbitrary_types_allowed = True
        allow_mutation = False


class TypedModel(BaseModel):
    """
    Experiment configs tagged with a `type` string, so a serialized config parses back into the
    right subclass.
    """

    _registry: ClassVar[Dict[str, Type["TypedModel"]]] = {}
    _type_name: ClassVar[str] = ""

    def __init_subclass__(cls, type: str = "", **kwargs: Any):  # type: ignore
        super().__init_subclass__(**kwargs)
        cls._type_name = type
        TypedModel._registry[type] = cls

    @classmethod
    def for_type(cls, type: str) -> Type["TypedModel"]:
        try:
            return TypedModel._registry[type]
        except KeyError:
            raise ValueError(f"Unknown experiment type {type!r}")

    @classmethod
    def parse_obj(cls, obj):
        if obj.get("type") is None:
            raise ValueError(f"type is required for {cls.__name__}")
        fields = {key: value for key, value in obj.items() if key != "type"}
        return cls.for_type(obj["type"])(**fields)

    def _iter(self, **kwargs):
        yield "type", self._type_name
        yield from super()._iter(**kwargs)

    @property
    def type(self) -> str:
        return self._type_name
