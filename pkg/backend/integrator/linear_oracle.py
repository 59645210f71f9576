"""
Closed forms for the C and A rows with I held constant
"""
import math
from typing import Tuple

from backend.errors import DomainError
from backend.model import SicaParams


def exact_linear_ca(i_const: float, c0: float, a0: float, p: SicaParams, t: float) -> Tuple[float, float]:
    """
    Solve dC = (phi I - (omega+mu) C)dt and dA = (rho I - (alpha+mu+d) A)dt exactly

    Returns:
        (C(t), A(t))
    """
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if i_const < 0:
        raise DomainError(f"i_const must be >= 0, got {i_const}")
    c_rate = p.omega + p.mu
    a_rate = p.alpha + p.mu + p.d
    c_inf = p.phi * i_const / c_rate
    a_inf = p.rho * i_const / a_rate
    c = c_inf + (c0 - c_inf) * math.exp(-c_rate * t)
    a = a_inf + (a0 - a_inf) * math.exp(-a_rate * t)
    return c, a
