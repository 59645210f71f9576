"""
Time grids and recorded trajectories
"""
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from backend.errors import DomainError
from backend.model import COMPARTMENTS, Compartment, SicaState
from config import Config


class GridSpec(BaseModel):
    """Fixed-step time grid on [0, t_end]"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    t_end: float = Field(gt=0, allow_inf_nan=False)
    dt: float = Field(default=Config.DEFAULT_DT, gt=0, allow_inf_nan=False)
    record_every: int = Field(default=Config.RECORD_EVERY, ge=1)

    @model_validator(mode="after")
    def _dt_within_horizon(self):
        if self.dt > self.t_end:
            raise ValueError(f"dt={self.dt} exceeds t_end={self.t_end}")
        return self

    @property
    def n_steps(self) -> int:
        ratio = self.t_end / self.dt
        nearest = round(ratio)
        if abs(ratio - nearest) <= 1e-9 * max(1.0, ratio):
            return max(1, int(nearest))
        return math.ceil(ratio)

    def step_times(self) -> np.ndarray:
        """Times t_0 = 0, ..., t_n = t_end; only the last step may be shorter than dt"""
        times = np.arange(self.n_steps + 1, dtype=float) * self.dt
        times[-1] = self.t_end
        return times

    def record_steps(self) -> np.ndarray:
        """Step indices stored in the trajectory; always includes 0 and the final step"""
        n = self.n_steps
        return np.unique(np.r_[np.arange(0, n + 1, self.record_every), n])


@dataclass
class Diagnostics:
    """Counters and running martingale quantities gathered while integrating"""

    clamp_count: int = 0
    jump_count: int = 0
    jump_overflow_count: int = 0
    martingale_path: np.ndarray = field(default_factory=lambda: np.zeros(0))
    quadratic_variation_path: np.ndarray = field(default_factory=lambda: np.zeros(0))
    max_balance_residual: float = 0.0

    def summary(self) -> dict:
        return {
            'clamp_count': int(self.clamp_count),
            'jump_count': int(self.jump_count),
            'jump_overflow_count': int(self.jump_overflow_count),
            'max_balance_residual': float(self.max_balance_residual),
            'martingale_final': float(self.martingale_path[-1]) if len(self.martingale_path) else 0.0,
            'quadratic_variation_final': (
                float(self.quadratic_variation_path[-1]) if len(self.quadratic_variation_path) else 0.0
            ),
        }


ColumnKey = Union[Compartment, str]


@dataclass
class Trajectory:
    """Recorded times, states (rows of S, I, C, A) and run diagnostics"""

    times: np.ndarray
    states: np.ndarray
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=float).reshape(-1, 4)
        if len(self.times) != len(self.states):
            raise DomainError(
                f"{len(self.times)} times but {len(self.states)} states"
            )
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise DomainError("trajectory times must be strictly increasing")

    @classmethod
    def from_arrays(cls, times, states) -> "Trajectory":
        """Trajectory with zeroed diagnostics, e.g. for synthetic inputs"""
        times = np.asarray(times, dtype=float)
        zeros = np.zeros(len(times))
        return cls(times, states, Diagnostics(martingale_path=zeros, quadratic_variation_path=zeros.copy()))

    def __len__(self) -> int:
        return len(self.times)

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def column(self, key: ColumnKey) -> np.ndarray:
        key = Compartment(key)
        if key is Compartment.N:
            return self.states.sum(axis=1)
        return self.states[:, COMPARTMENTS.index(key)]

    def state_at(self, index: int) -> SicaState:
        return SicaState.from_array(self.states[index])

    @property
    def final_state(self) -> SicaState:
        return self.state_at(-1)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.states, columns=[c.value for c in COMPARTMENTS])
        frame.insert(0, 't', self.times)
        frame['N'] = frame['S'] + frame['I'] + frame['C'] + frame['A']
        return frame
