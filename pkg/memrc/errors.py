from typing import Optional


class MemrcError(Exception):
    pass


class InputShapeError(MemrcError, ValueError):
    pass


class DomainError(MemrcError, ValueError):
    pass


class InvalidValueError(MemrcError, ValueError):
    pass


class EmptyInputError(MemrcError, ValueError):
    pass


class FitError(MemrcError, ValueError):
    pass


class FormatError(MemrcError, ValueError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ConfigError(MemrcError, ValueError):
    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(message)


class IngestionError(MemrcError, FileNotFoundError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{message}: {path}")


class InternalConsistencyError(MemrcError, RuntimeError):
    pass
