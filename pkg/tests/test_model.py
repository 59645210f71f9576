import math

import numpy as np
import pytest
from pydantic import ValidationError

from backend.errors import DomainError, JumpOverflowError
from backend.model import (
    Compartment,
    LevyMeasure,
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
from tests.conftest import fig1_rates


class TestParams:
    def test_lambda_key_and_field_name(self, fig1_params):
        assert fig1_params.lambda_ == 10.0
        same = SicaParams(lambda_=10.0, mu=0.0125, beta=0.0001, phi=1, rho=0.1,
                          alpha=0.33, omega=0.09, d=1, sigma=0.01)
        assert same == fig1_params

    @pytest.mark.parametrize("field,value", [("mu", 0.0), ("lambda", -1.0), ("beta", -0.1), ("sigma", math.inf)])
    def test_rejects_out_of_range(self, field, value):
        data = fig1_rates().model_dump(by_alias=True)
        data[field] = value
        with pytest.raises(ValidationError):
            SicaParams(**data)

    def test_derived_bounds(self, fig1_params):
        assert fig1_params.n_upper == pytest.approx(800.0)
        assert fig1_params.n_lower == pytest.approx(9.8765, abs=1e-4)
        assert fig1_params.removal_rate == pytest.approx(1.1125)


class TestState:
    def test_negative_component_rejected(self):
        with pytest.raises(ValidationError):
            SicaState(s=-1.0, i=0.0, c=0.0, a=0.0)

    def test_array_round_trip_and_total(self):
        st = SicaState(s=1.0, i=2.0, c=3.0, a=4.0)
        assert st.n == 10.0
        assert SicaState.from_array(st.as_array()) == st


class TestDrift:
    def test_empty_state_gives_recruitment_only(self, fig1_params, no_jumps):
        out = drift(SicaState(s=0, i=0, c=0, a=0), fig1_params, no_jumps)
        assert out.tolist() == [10.0, 0.0, 0.0, 0.0]

    def test_fig1_hand_values(self, fig1_params, no_jumps):
        out = drift(SicaState(s=800, i=1, c=0, a=0), fig1_params, no_jumps)
        assert out == pytest.approx([-0.08, -1.0325, 1.0, 0.1], abs=1e-12)

    def test_compensator_moves_kappa_i_s(self, fig1_params, no_jumps):
        state = SicaState(s=800, i=1, c=0, a=0)
        base = drift(state, fig1_params, no_jumps)
        with_jumps = drift(state, fig1_params, LevyMeasure.of((0.001, 1.0)))
        assert with_jumps - base == pytest.approx([0.8, -0.8, 0.0, 0.0], abs=1e-12)

    @pytest.mark.parametrize("values", [(400, 10, 5, 5), (1.5, 700, 30, 60), (0, 3, 0, 9)])
    def test_components_sum_to_population_balance(self, fig1_params, values):
        state = SicaState(s=values[0], i=values[1], c=values[2], a=values[3])
        p = fig1_params
        out = drift(state, p, LevyMeasure.of((0.0005, 1.0), (0.0003, 2.5)))
        expected = p.lambda_ - p.mu * state.n - p.d * state.a
        assert math.fsum(out) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_non_finite_state_is_domain_error(self, fig1_params, no_jumps):
        bad = SicaState.model_construct(s=math.nan, i=1.0, c=0.0, a=0.0)
        with pytest.raises(DomainError):
            drift(bad, fig1_params, no_jumps)


class TestDiffusion:
    def test_fig1_values(self, fig1_params):
        assert diffusion(SicaState(s=800, i=1, c=0, a=0), fig1_params).tolist() == [-8.0, 8.0, 0.0, 0.0]

    def test_zero_sigma(self):
        out = diffusion(SicaState(s=800, i=1, c=0, a=0), fig1_rates(sigma=0.0))
        assert not out.any()

    def test_antisymmetric(self, fig1_params):
        out = diffusion(SicaState(s=123.4567, i=8.9101, c=1, a=2), fig1_params)
        assert out[0] + out[1] == 0.0


class TestApplyJump:
    def test_hand_value(self):
        out = apply_jump(SicaState(s=100, i=10, c=5, a=2), 0.001)
        assert (out.s, out.i, out.c, out.a) == pytest.approx((99.0, 11.0, 5.0, 2.0))

    def test_no_infected_no_transfer(self):
        state = SicaState(s=100, i=0, c=5, a=2)
        assert apply_jump(state, 0.001) == state

    def test_conserves_population(self):
        state = SicaState(s=654.321, i=12.5, c=7.0, a=1.25)
        out = apply_jump(state, 0.0007)
        assert out.s + out.i == pytest.approx(state.s + state.i, rel=1e-15)
        assert (out.c, out.a) == (state.c, state.a)

    def test_overflow(self):
        with pytest.raises(JumpOverflowError) as info:
            apply_jump(SicaState(s=100, i=2000, c=0, a=0), 0.001)
        assert info.value.jump_size == 0.001

    @pytest.mark.parametrize("size", [0.0, -0.001, math.nan])
    def test_invalid_size(self, size):
        with pytest.raises(DomainError):
            apply_jump(SicaState(s=1, i=1, c=0, a=0), size)


class TestFeasibleRegion:
    def test_inside(self, fig1_params):
        assert in_feasible_region(SicaState(s=400, i=10, c=5, a=5), fig1_params)

    def test_above_upper_bound(self, fig1_params):
        assert not in_feasible_region(SicaState(s=900, i=0, c=0, a=0), fig1_params)

    def test_negative_component(self, fig1_params):
        state = SicaState.model_construct(s=400.0, i=-1e-9, c=0.0, a=0.0)
        assert not in_feasible_region(state, fig1_params)
        assert in_feasible_region(state, fig1_params, tol=1e-6)

    def test_huge_finite_state_is_outside(self, fig1_params):
        assert not in_feasible_region(SicaState(s=1e308, i=1e308, c=0, a=0), fig1_params)

    def test_negative_tolerance(self, fig1_params):
        with pytest.raises(DomainError):
            in_feasible_region(SicaState(s=400, i=10, c=5, a=5), fig1_params, tol=-1.0)


class TestHypothesisH:
    def test_accepts_mark_below_bound(self, fig1_params):
        assert validate_hypothesis_h(LevyMeasure.of((0.001, 1.0)), fig1_params, h_cap=1.0).valid

    def test_rejects_and_lists_offending(self, fig1_params):
        check = validate_hypothesis_h(LevyMeasure.of((0.001, 1.0), (0.002, 1.0)), fig1_params, h_cap=1.0)
        assert not check.valid
        assert check.offending == ((1, 0.002),)
        assert "marks[1]" in check.describe()

    def test_empty_measure_is_valid(self, fig1_params, no_jumps):
        assert validate_hypothesis_h(no_jumps, fig1_params).valid

    def test_strictness_margin(self, fig1_params):
        near_bound = LevyMeasure.of((0.00124, 1.0))
        assert validate_hypothesis_h(near_bound, fig1_params, h_cap=1.0).valid
        assert not validate_hypothesis_h(near_bound, fig1_params, h_cap=0.99).valid

    @pytest.mark.parametrize("h_cap", [0.0, 1.5])
    def test_h_cap_range(self, fig1_params, no_jumps, h_cap):
        with pytest.raises(DomainError):
            validate_hypothesis_h(no_jumps, fig1_params, h_cap=h_cap)


class TestLevyMeasure:
    def test_rates_and_kappa(self):
        levy = LevyMeasure.of((0.001, 1.0), (0.0005, 3.0))
        assert levy.total_rate == pytest.approx(4.0)
        assert levy.kappa == pytest.approx(0.0025)
        assert levy.jump_sizes.tolist() == [0.001, 0.0005]

    def test_empty(self, no_jumps):
        assert no_jumps.is_empty
        assert no_jumps.total_rate == 0.0
        assert no_jumps.kappa == 0.0


def test_default_initial_state_is_on_lower_edge(fig1_params):
    st = default_initial_state(fig1_params)
    assert st.n == pytest.approx(fig1_params.n_lower)
    assert st.i / st.n == pytest.approx(0.1)
    assert in_feasible_region(st, fig1_params, tol=1e-12)


def test_dt_safe(fig1_params):
    assert dt_safe(fig1_params) == pytest.approx((1 / (6.5 * 0.01 * 800)) ** 2)
    assert dt_safe(fig1_rates(sigma=0.0)) == pytest.approx(0.1 / 1.3425)


def test_compartment_selector():
    assert Compartment("N") is Compartment.N
    assert np.array_equal(SicaState(s=1, i=2, c=3, a=4).as_array(), [1, 2, 3, 4])
