"""Backend analysis package"""
from backend.analysis.time_averages import tail_mask, time_average
from backend.analysis.extinction import ExtinctionVerdict, lyapunov_estimate
from backend.analysis.persistence import PersistenceVerdict, verify_persistence
from backend.analysis.martingale import MartingaleReport, martingale_diagnostic
from backend.analysis.convergence import convergence_order, relative_gap
from backend.analysis.ensemble import EnsembleResult, EnsembleStats, ensemble_run

__all__ = [
    'EnsembleResult',
    'EnsembleStats',
    'ExtinctionVerdict',
    'MartingaleReport',
    'PersistenceVerdict',
    'convergence_order',
    'ensemble_run',
    'lyapunov_estimate',
    'martingale_diagnostic',
    'relative_gap',
    'tail_mask',
    'time_average',
    'verify_persistence',
]
