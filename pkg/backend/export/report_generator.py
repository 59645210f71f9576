"""
JSON report writer with deterministic key order and explicit non-finite markers
"""
import json
import math
import os
from pathlib import Path
from typing import Any

import numpy as np

from backend.errors import ExportError
from config import Config


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and non-finite floats ("inf", "-inf", "nan")"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def dumps_report(data: Any) -> str:
    return json.dumps(to_jsonable(data), indent=2, sort_keys=True, allow_nan=False) + "\n"


class JSONReportGenerator:
    """Write report dictionaries as JSON files"""

    def __init__(self, output_dir: str = None):
        self.output_dir = output_dir or Config.OUTPUT_DIR
        os.makedirs(self.output_dir, exist_ok=True)

    def generate(self, data: Any, filename: str) -> Path:
        path = Path(self.output_dir) / filename
        try:
            path.write_text(dumps_report(data), encoding="utf-8")
        except OSError as e:
            raise ExportError(path, e) from e
        return path
