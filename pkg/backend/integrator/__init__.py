"""Backend integrator package"""
from backend.integrator.trajectory import Diagnostics, GridSpec, Trajectory
from backend.integrator.euler_maruyama import (
    em_step,
    euler_increment,
    simulate,
    simulate_paths,
    warn_run_conditions,
)
from backend.integrator.runge_kutta import rk4_step, simulate_ode
from backend.integrator.linear_oracle import exact_linear_ca

__all__ = [
    'Diagnostics',
    'GridSpec',
    'Trajectory',
    'em_step',
    'euler_increment',
    'exact_linear_ca',
    'rk4_step',
    'simulate',
    'simulate_ode',
    'simulate_paths',
    'warn_run_conditions',
]
