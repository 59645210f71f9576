"""
Closed-form extinction / persistence thresholds and population bounds
"""
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, Tuple

from backend.errors import DomainError
from backend.model.sica_model import LevyMeasure, SicaParams, SicaState


@dataclass(frozen=True)
class ThresholdReport:
    """Both sides of the extinction and persistence criteria plus derived bounds"""

    ext_lhs: float
    ext_rhs: float
    extinction_holds: bool
    pers_lhs: float
    pers_rhs: float
    persistence_holds: bool
    i_mean_lower_bound: float
    s_mean_lower_bound: float
    c_mean_lower_bound: float
    a_mean_lower_bound: float
    log_i_rate_bound: float
    n_upper: float
    n_lower: float
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict:
        data = asdict(self)
        data['notes'] = list(self.notes)
        return data


def compute_thresholds(p: SicaParams, levy: LevyMeasure) -> ThresholdReport:
    """
    Evaluate the extinction and persistence criteria

    Extinction: beta^2/(2 sigma^2) < (rho+phi+mu) + (alpha+omega) lambda/mu.
    Persistence: beta lambda/(mu+d) > (rho+phi+mu) + sigma^2 lambda^2/(2 mu^2).

    With sigma = 0 the extinction left side is reported as +inf and the
    criterion as not met; a note records this in the report.

    The jump measure does not enter either criterion; it is accepted so the
    report can be computed from the same inputs as a simulation.
    """
    del levy
    notes = []
    removal = p.removal_rate
    n_upper = p.n_upper
    n_lower = p.n_lower

    if p.sigma > 0.0:
        ext_lhs = p.beta ** 2 / (2.0 * p.sigma ** 2)
    else:
        ext_lhs = math.inf
        notes.append("sigma = 0: ext_lhs reported as +inf, extinction criterion cannot hold")
    ext_rhs = removal + (p.alpha + p.omega) * n_upper
    extinction_holds = ext_lhs < ext_rhs

    pers_lhs = p.beta * p.lambda_ / (p.mu + p.d)
    pers_rhs = removal + p.sigma ** 2 * p.lambda_ ** 2 / (2.0 * p.mu ** 2)
    persistence_holds = pers_lhs > pers_rhs

    i_bound = (pers_lhs - pers_rhs) / removal
    s_bound = p.lambda_ * p.mu / (p.lambda_ * p.beta + p.mu ** 2)
    # time-averaging dC = (phi I - (omega+mu) C)dt with C bounded
    c_bound = p.phi / (p.omega + p.mu) * i_bound
    a_bound = p.rho / (p.alpha + p.mu + p.d) * i_bound

    return ThresholdReport(
        ext_lhs=ext_lhs,
        ext_rhs=ext_rhs,
        extinction_holds=extinction_holds,
        pers_lhs=pers_lhs,
        pers_rhs=pers_rhs,
        persistence_holds=persistence_holds,
        i_mean_lower_bound=i_bound,
        s_mean_lower_bound=s_bound,
        c_mean_lower_bound=c_bound,
        a_mean_lower_bound=a_bound,
        log_i_rate_bound=ext_lhs - ext_rhs,
        n_upper=n_upper,
        n_lower=n_lower,
        notes=tuple(notes),
    )


def population_envelope(n0: float, p: SicaParams, t: float) -> Tuple[float, float]:
    """
    Comparison bounds on N(t) from lambda - (mu+d)N <= dN/dt <= lambda - mu N

    Returns:
        (lower, upper) with upper = L/mu + (n0 - L/mu) e^{-mu t} and
        lower = L/(mu+d) + (n0 - L/(mu+d)) e^{-(mu+d) t}
    """
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    upper = p.n_upper + (n0 - p.n_upper) * math.exp(-p.mu * t)
    lower = p.n_lower + (n0 - p.n_lower) * math.exp(-(p.mu + p.d) * t)
    return lower, upper


def log_infected_generator(state: SicaState, p: SicaParams, levy: LevyMeasure) -> float:
    """
    Generator applied to V = log I

    (beta I S - (rho+phi+mu) I + alpha A + omega C)/I - sigma^2 S^2 / 2
    + sum_k lambda_k [log(1 + J_k S) - J_k S]
    """
    if not state.i > 0.0:
        raise DomainError("log I generator needs I > 0")
    s = state.s
    flow = (p.beta * state.i * s - p.removal_rate * state.i
            + p.alpha * state.a + p.omega * state.c) / state.i
    jump_correction = math.fsum(
        m.rate * (math.log1p(m.jump_size * s) - m.jump_size * s) for m in levy.marks
    )
    return flow - 0.5 * p.sigma ** 2 * s ** 2 + jump_correction
