import json
from pathlib import Path

import pytest

from backend.experiments import parse_run_config
from backend.model import LevyMeasure, SicaParams

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def fig1_rates(sigma: float = 0.01) -> SicaParams:
    return SicaParams(**{
        "lambda": 10.0, "mu": 0.0125, "beta": 0.0001, "phi": 1.0, "rho": 0.1,
        "alpha": 0.33, "omega": 0.09, "d": 1.0, "sigma": sigma,
    })


def fig2_rates(sigma: float = 1e-5) -> SicaParams:
    return SicaParams(**{
        "lambda": 100.0, "mu": 0.0013, "beta": 0.1, "phi": 1.0, "rho": 0.1,
        "alpha": 0.33, "omega": 0.09, "d": 1.0, "sigma": sigma,
    })


@pytest.fixture
def fig1_params():
    return fig1_rates()


@pytest.fixture
def fig2_params():
    return fig2_rates()


@pytest.fixture
def no_jumps():
    return LevyMeasure()


@pytest.fixture
def fig1_config_data():
    return json.loads((CONFIG_DIR / "fig1.json").read_text(encoding="utf-8"))


@pytest.fixture
def fig2_config_data():
    return json.loads((CONFIG_DIR / "fig2.json").read_text(encoding="utf-8"))


@pytest.fixture
def small_config(fig1_config_data):
    """Extinction-regime model on a short horizon with a handful of paths"""
    data = dict(fig1_config_data)
    data["grid"] = {"t_end": 2.0, "dt": 1e-3, "record_every": 50}
    data["path_count"] = 4
    return parse_run_config(data)
