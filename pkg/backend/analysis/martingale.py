"""
Strong-law diagnostic for M_t = int sigma S dW
"""
import logging
from dataclasses import asdict, dataclass

import numpy as np

from backend.integrator import Trajectory
from backend.model import SicaParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MartingaleReport:
    m_over_t_final: float
    qv_over_t_final: float
    qv_bound: float
    within_bound: bool
    stayed_in_region: bool

    def to_dict(self) -> dict:
        return asdict(self)


def martingale_diagnostic(traj: Trajectory, p: SicaParams, rel_tol: float = 1e-6) -> MartingaleReport:
    """
    M_T/T, <M>_T/T and the bound sigma^2 (lambda/mu)^2

    The bound follows from S <= lambda/mu, so it is only checked when the
    recorded path stayed below lambda/mu without clamps or jump overflows.
    """
    diag = traj.diagnostics
    horizon = traj.t_end - float(traj.times[0])
    qv_bound = p.sigma ** 2 * p.n_upper ** 2
    if p.sigma == 0.0 or horizon <= 0.0 or len(diag.martingale_path) == 0:
        return MartingaleReport(0.0, 0.0, qv_bound, True, True)

    m_over_t = float(diag.martingale_path[-1]) / horizon
    qv_over_t = float(diag.quadratic_variation_path[-1]) / horizon
    stayed = (
        diag.clamp_count == 0
        and diag.jump_overflow_count == 0
        and bool(np.all(traj.column('S') <= p.n_upper * (1.0 + rel_tol)))
    )
    within = qv_over_t <= qv_bound * (1.0 + rel_tol)
    if stayed and not within:
        logger.error("quadratic variation rate %.6g exceeds the bound %.6g on a path inside the region",
                     qv_over_t, qv_bound)
    return MartingaleReport(
        m_over_t_final=m_over_t,
        qv_over_t_final=qv_over_t,
        qv_bound=qv_bound,
        within_bound=within,
        stayed_in_region=stayed,
    )
