"""
CSV / JSON table writers for trajectories and ensemble statistics
"""
import json
import os
from pathlib import Path
from typing import Union

import pandas as pd

from backend.errors import DomainError, ExportError
from backend.integrator import Trajectory
from config import Config

FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def _write_frame(frame: pd.DataFrame, path: PathLike, fmt: str) -> Path:
    path = Path(path)
    try:
        if fmt == "csv":
            frame.to_csv(path, index=False, float_format=FLOAT_FORMAT,
                         lineterminator="\n", encoding="utf-8")
        elif fmt == "json":
            columns = {name: frame[name].tolist() for name in frame.columns}
            path.write_text(json.dumps(columns) + "\n", encoding="utf-8")
        else:
            raise DomainError(f"unknown table format {fmt!r}")
    except OSError as e:
        raise ExportError(path, e) from e
    return path


def write_trajectory_csv(traj: Trajectory, path: PathLike) -> Path:
    """Header t,S,I,C,A,N then one row per recorded point, 17 significant digits"""
    if len(traj) == 0:
        raise DomainError("refusing to write an empty trajectory")
    return _write_frame(traj.to_frame(), path, "csv")


class TableGenerator:
    """Write trajectories and statistics tables into an output directory"""

    def __init__(self, output_dir: str = None, fmt: str = "csv"):
        self.output_dir = output_dir or Config.OUTPUT_DIR
        self.fmt = fmt
        os.makedirs(self.output_dir, exist_ok=True)

    def _path(self, stem: str) -> Path:
        return Path(self.output_dir) / f"{stem}.{self.fmt}"

    def generate_trajectory(self, traj: Trajectory, stem: str = "trajectory") -> Path:
        if len(traj) == 0:
            raise DomainError("refusing to write an empty trajectory")
        return _write_frame(traj.to_frame(), self._path(stem), self.fmt)

    def generate_stats(self, frame: pd.DataFrame, stem: str = "ensemble_stats") -> Path:
        return _write_frame(frame, self._path(stem), self.fmt)
