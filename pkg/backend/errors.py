"""
Exception hierarchy shared by the simulation backend
"""
from typing import Optional


class SicaError(Exception):
    """Base class for all backend errors"""


class DomainError(SicaError, ValueError):
    """Input outside the domain of an operation (non-finite, negative rate, ...)"""


class JumpOverflowError(SicaError):
    """A jump would make S negative: 1 - J*I <= 0"""

    def __init__(self, jump_size: float, infected: float):
        self.jump_size = jump_size
        self.infected = infected
        super().__init__(
            f"jump overflow: 1 - J*I = {1.0 - jump_size * infected:.6g} <= 0 "
            f"(J={jump_size:.6g}, I={infected:.6g}); jump size must stay below mu/lambda"
        )


class SimulationError(SicaError):
    """Hard failure while integrating a path"""

    def __init__(self, message: str, time: float, path_index: Optional[int] = None):
        self.time = time
        self.path_index = path_index
        where = f"t={time:.6g}" if path_index is None else f"path {path_index}, t={time:.6g}"
        super().__init__(f"{message} ({where})")


class InsufficientDataError(SicaError):
    """Too few usable points for a fit"""


class ConfigError(SicaError):
    """Invalid run configuration; `field` is the dotted path of the offending value"""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field or '<root>'}: {message}")


class ExportError(SicaError):
    """Writing an output file failed"""

    def __init__(self, path, cause: Exception):
        self.path = str(path)
        super().__init__(f"cannot write {self.path}: {cause}")
