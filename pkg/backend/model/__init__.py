"""Backend model package"""
from backend.model.sica_model import (
    COMPARTMENTS,
    Compartment,
    HypothesisCheck,
    JumpMark,
    LevyMeasure,
    Rates,
    SicaParams,
    SicaState,
    apply_jump,
    default_initial_state,
    diffusion,
    drift,
    dt_safe,
    in_feasible_region,
    validate_hypothesis_h,
)
from backend.model.thresholds import (
    ThresholdReport,
    compute_thresholds,
    log_infected_generator,
    population_envelope,
)

__all__ = [
    'COMPARTMENTS',
    'Compartment',
    'HypothesisCheck',
    'JumpMark',
    'LevyMeasure',
    'Rates',
    'SicaParams',
    'SicaState',
    'ThresholdReport',
    'apply_jump',
    'compute_thresholds',
    'default_initial_state',
    'diffusion',
    'drift',
    'dt_safe',
    'in_feasible_region',
    'log_infected_generator',
    'population_envelope',
    'validate_hypothesis_h',
]
