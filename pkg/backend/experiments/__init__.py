"""Backend experiments package"""
from backend.experiments.run_config import (
    SCHEMA_VERSION,
    RunConfig,
    load_run_config,
    parse_run_config,
    save_run_config,
)
from backend.experiments.experiment_engine import ExperimentEngine

__all__ = [
    'SCHEMA_VERSION',
    'ExperimentEngine',
    'RunConfig',
    'load_run_config',
    'parse_run_config',
    'save_run_config',
]
