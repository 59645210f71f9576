"""
Run configuration: JSON document validated with pydantic
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, ValidationInfo, field_validator

from backend.errors import ConfigError
from backend.integrator import GridSpec
from backend.model import LevyMeasure, SicaParams, SicaState, default_initial_state, validate_hypothesis_h
from config import Config

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class RunConfig(BaseModel):
    """Everything a run needs: model, jump measure, initial state, grid, seed and analysis knobs"""

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    schema_version: Literal[1] = Field(default=SCHEMA_VERSION, alias="schema")
    notes: str = ""
    params: SicaParams
    h_cap: float = Field(default=Config.H_CAP, gt=0, le=1)
    levy: LevyMeasure = Field(default_factory=LevyMeasure)
    initial: Optional[SicaState] = None
    grid: GridSpec
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    path_count: int = Field(default=Config.DEFAULT_PATH_COUNT, ge=1)
    tail_fraction: float = Field(default=Config.TAIL_FRACTION, gt=0, lt=1)
    margin: float = Field(default=Config.PERSISTENCE_MARGIN, gt=0)
    eps_extinct: float = Field(default=Config.EPS_EXTINCT, gt=0)

    @field_validator("levy")
    @classmethod
    def _levy_satisfies_hypothesis(cls, levy: LevyMeasure, info: ValidationInfo) -> LevyMeasure:
        params = info.data.get("params")
        h_cap = info.data.get("h_cap")
        if params is None or h_cap is None:
            return levy
        check = validate_hypothesis_h(levy, params, h_cap)
        if not check.valid:
            raise ValueError(check.describe())
        return levy

    @property
    def initial_state(self) -> SicaState:
        return self.initial if self.initial is not None else default_initial_state(self.params)

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)

    def with_overrides(self, seed: Optional[int] = None, path_count: Optional[int] = None,
                       dt: Optional[float] = None, t_end: Optional[float] = None) -> "RunConfig":
        """Copy with CLI overrides applied, re-validated"""
        data = self.to_dict()
        if seed is not None:
            data['seed'] = seed
        if path_count is not None:
            data['path_count'] = path_count
        if dt is not None:
            data['grid']['dt'] = dt
        if t_end is not None:
            data['grid']['t_end'] = t_end
        return parse_run_config(data)


def _field_path(loc) -> str:
    parts = []
    for item in loc:
        if isinstance(item, int):
            parts.append(f"[{item}]")
        else:
            parts.append(("." if parts else "") + str(item))
    return "".join(parts)


def parse_run_config(data: Dict[str, Any]) -> RunConfig:
    """
    Validate a config mapping

    Raises:
        ConfigError: first validation error, with its dotted field path
    """
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigError(_field_path(first['loc']), first['msg']) from e


def load_run_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ConfigError("", f"config file {path} not found") from e
    except json.JSONDecodeError as e:
        raise ConfigError("", f"{path} is not valid JSON: {e}") from e
    config = parse_run_config(data)
    logger.info("loaded config %s (seed=%d, paths=%d)", path, config.seed, config.path_count)
    return config


def save_run_config(config: RunConfig, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
