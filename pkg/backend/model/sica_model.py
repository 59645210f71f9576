"""
SICA model with Brownian and compensated Levy jump noise

Holds the parameter, state and jump-measure records together with the
coefficient functions of the stochastic system. The array kernels at the
bottom work on scalars or numpy arrays alike and are shared by the single-step
integrator and the vectorised ensemble engine.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Annotated, NamedTuple, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from backend.errors import DomainError, JumpOverflowError
from config import Config

logger = logging.getLogger(__name__)

PositiveFinite = Annotated[float, Field(gt=0, allow_inf_nan=False)]
NonNegativeFinite = Annotated[float, Field(ge=0, allow_inf_nan=False)]


class Compartment(str, Enum):
    """Column selector for states and trajectories"""

    S = "S"
    I = "I"
    C = "C"
    A = "A"
    N = "N"


COMPARTMENTS = (Compartment.S, Compartment.I, Compartment.C, Compartment.A)


class SicaParams(BaseModel):
    """Epidemiological rates plus the diffusion intensity sigma"""

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    lambda_: PositiveFinite = Field(alias="lambda", description="recruitment rate")
    mu: PositiveFinite = Field(description="natural death rate")
    beta: NonNegativeFinite = Field(description="transmission rate")
    phi: NonNegativeFinite = Field(description="HIV treatment rate for I")
    rho: NonNegativeFinite = Field(description="default treatment rate for I")
    alpha: NonNegativeFinite = Field(description="AIDS treatment rate")
    omega: NonNegativeFinite = Field(description="default treatment rate for C")
    d: NonNegativeFinite = Field(description="AIDS-induced death rate")
    sigma: NonNegativeFinite = Field(description="Brownian intensity")

    @property
    def removal_rate(self) -> float:
        """rho + phi + mu, the total exit rate of I"""
        return self.rho + self.phi + self.mu

    @property
    def n_upper(self) -> float:
        return self.lambda_ / self.mu

    @property
    def n_lower(self) -> float:
        return self.lambda_ / (self.mu + self.d)


class SicaState(BaseModel):
    """Compartment values at one time point"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    s: NonNegativeFinite
    i: NonNegativeFinite
    c: NonNegativeFinite
    a: NonNegativeFinite

    @property
    def n(self) -> float:
        return self.s + self.i + self.c + self.a

    def as_array(self) -> np.ndarray:
        return np.array([self.s, self.i, self.c, self.a], dtype=float)

    @classmethod
    def from_array(cls, values) -> "SicaState":
        s, i, c, a = (float(v) for v in values)
        return cls(s=s, i=i, c=c, a=a)


class JumpMark(BaseModel):
    """One atom of the jump measure: jump size J_k fired at rate lambda_k"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    jump_size: PositiveFinite
    rate: PositiveFinite


class LevyMeasure(BaseModel):
    """Finite-activity jump measure given as a list of marks"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    marks: Tuple[JumpMark, ...] = ()

    @classmethod
    def of(cls, *pairs: Tuple[float, float]) -> "LevyMeasure":
        """Build from (jump_size, rate) pairs"""
        return cls(marks=tuple(JumpMark(jump_size=j, rate=r) for j, r in pairs))

    @property
    def is_empty(self) -> bool:
        return len(self.marks) == 0

    @property
    def total_rate(self) -> float:
        return math.fsum(m.rate for m in self.marks)

    @property
    def kappa(self) -> float:
        """Compensator weight sum_k J_k * lambda_k"""
        return math.fsum(m.jump_size * m.rate for m in self.marks)

    @property
    def jump_sizes(self) -> np.ndarray:
        return np.array([m.jump_size for m in self.marks], dtype=float)

    @property
    def rates(self) -> np.ndarray:
        return np.array([m.rate for m in self.marks], dtype=float)


@dataclass(frozen=True)
class HypothesisCheck:
    """Result of checking the jump-size bound against mu/lambda"""

    valid: bool
    bound: float
    offending: Tuple[Tuple[int, float], ...] = ()

    def describe(self) -> str:
        if self.valid:
            return f"all jump sizes within (0, {self.bound:.6g}]"
        listed = ", ".join(f"marks[{k}].jump_size={j:.6g}" for k, j in self.offending)
        return f"jump sizes must lie in (0, {self.bound:.6g}]: {listed}"


class Rates(NamedTuple):
    """Flat float view of the parameters used by the array kernels"""

    lam: float
    mu: float
    beta: float
    phi: float
    rho: float
    alpha: float
    omega: float
    d: float
    sigma: float
    kappa: float
    removal: float
    c_exit: float
    a_exit: float

    @classmethod
    def from_params(cls, p: SicaParams, levy: LevyMeasure) -> "Rates":
        return cls(
            lam=p.lambda_, mu=p.mu, beta=p.beta, phi=p.phi, rho=p.rho,
            alpha=p.alpha, omega=p.omega, d=p.d, sigma=p.sigma,
            kappa=levy.kappa,
            removal=p.removal_rate,
            c_exit=p.omega + p.mu,
            a_exit=p.alpha + p.mu + p.d,
        )


# ---------------------------------------------------------------------------
# Array kernels
# ---------------------------------------------------------------------------

def drift_terms(s, i, c, a, r: Rates):
    """Deterministic rates including the jump compensator kappa*I*S"""
    infection = r.beta * i * s
    compensator = r.kappa * i * s
    ds = r.lam - infection - r.mu * s + compensator
    di = infection - r.removal * i + r.alpha * a + r.omega * c - compensator
    dc = r.phi * i - r.c_exit * c
    da = r.rho * i - r.a_exit * a
    return ds, di, dc, da


def noise_amplitude(s, i, r: Rates):
    """sigma*I*S; enters the S row with minus sign and the I row with plus sign"""
    return r.sigma * i * s


def jump_update(s: float, i: float, jump_size: float) -> Tuple[float, float]:
    """Move J*I*S individuals from S to I using left limits"""
    if 1.0 - jump_size * i <= 0.0:
        raise JumpOverflowError(jump_size, i)
    transfer = jump_size * i * s
    return s - transfer, i + transfer


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def _require_finite(state: SicaState) -> None:
    if not all(math.isfinite(v) for v in (state.s, state.i, state.c, state.a)):
        raise DomainError(f"non-finite state {state!r}")


def drift(state: SicaState, p: SicaParams, levy: LevyMeasure) -> np.ndarray:
    """
    Drift (dS, dI, dC, dA)/dt of the simulated system

    The compensated jump integral is expanded into raw Poisson jumps plus the
    deterministic compensator, which adds +kappa*I*S to S and -kappa*I*S to I
    with kappa = sum_k J_k * lambda_k.
    """
    _require_finite(state)
    r = Rates.from_params(p, levy)
    return np.array(drift_terms(state.s, state.i, state.c, state.a, r), dtype=float)


def diffusion(state: SicaState, p: SicaParams) -> np.ndarray:
    """Diffusion column (-sigma*I*S, +sigma*I*S, 0, 0)"""
    _require_finite(state)
    g = p.sigma * state.i * state.s
    return np.array([-g, g, 0.0, 0.0], dtype=float)


def apply_jump(state: SicaState, jump_size: float) -> SicaState:
    """
    Apply one jump event: S <- S(1 - J*I), I <- I(1 + J*S)

    Raises:
        DomainError: jump size not a positive finite number
        JumpOverflowError: 1 - J*I <= 0
    """
    if not (math.isfinite(jump_size) and jump_size > 0):
        raise DomainError(f"jump size must be positive and finite, got {jump_size}")
    s, i = jump_update(state.s, state.i, jump_size)
    return SicaState(s=s, i=i, c=state.c, a=state.a)


def in_feasible_region(state: SicaState, p: SicaParams, tol: float = 0.0) -> bool:
    """True iff every component >= -tol and lambda/(mu+d) - tol <= N <= lambda/mu + tol"""
    if tol < 0:
        raise DomainError(f"tol must be >= 0, got {tol}")
    values = (state.s, state.i, state.c, state.a)
    if any(v < -tol for v in values):
        return False
    # plain sum overflows to inf on huge states, which fails the bound
    n = state.n
    return p.n_lower - tol <= n <= p.n_upper + tol


def validate_hypothesis_h(levy: LevyMeasure, p: SicaParams, h_cap: float = Config.H_CAP) -> HypothesisCheck:
    """Accept iff every jump size lies in (0, h_cap * mu/lambda]"""
    if not 0.0 < h_cap <= 1.0:
        raise DomainError(f"h_cap must lie in (0, 1], got {h_cap}")
    bound = h_cap * p.mu / p.lambda_
    offending = tuple(
        (k, m.jump_size) for k, m in enumerate(levy.marks)
        if not 0.0 < m.jump_size <= bound
    )
    return HypothesisCheck(valid=not offending, bound=bound, offending=offending)


def default_initial_state(p: SicaParams) -> SicaState:
    """(0.9, 0.1, 0, 0) * lambda/(mu+d), on the lower edge of the feasible region"""
    n0 = p.n_lower
    return SicaState(s=0.9 * n0, i=0.1 * n0, c=0.0, a=0.0)


def dt_safe(p: SicaParams, z: float = Config.POSITIVITY_Z) -> float:
    """
    Stability heuristic for the explicit step size

    The first term resolves the stiffest linear exit rate. The second keeps
    one Gaussian step from flipping the sign of I unless the increment lies
    beyond z standard deviations: sigma * S * sqrt(dt) <= 1/z with S bounded
    by lambda/mu.
    """
    stiffest = max(p.removal_rate, p.omega + p.mu, p.alpha + p.mu + p.d)
    linear_limit = 0.1 / stiffest
    if p.sigma == 0.0:
        return linear_limit
    noise_limit = (1.0 / (z * p.sigma * p.n_upper)) ** 2
    return min(linear_limit, noise_limit)
