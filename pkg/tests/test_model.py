import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from suspopt.errors import DomainError
from suspopt.model import (
    DEFAULT_EPS,
    LIGHT,
    MID_HEAVY,
    PhysicalSuspension,
    State,
    SuspensionDesign,
    VehicleParams,
    derive_physical,
    outputs,
    piecewise_damping,
    piecewise_tire_stiffness,
    smoothed_damping,
    smoothed_tire_stiffness,
    state_derivative,
    static_equilibrium,
)

from oracles import matrix_form_derivative

fn_st = st.floats(1.0, 2.0)
zeta_st = st.floats(0.0, 1.0)
designs = st.builds(SuspensionDesign, f_n=fn_st, zeta_p=zeta_st, zeta_n=zeta_st)
vehicles = st.builds(
    VehicleParams,
    m_s=st.floats(50, 2000), m_u=st.floats(10, 200), k_t_nom=st.floats(5e4, 1e6),
)


# -- derive_physical ------------------------------------------------------


def test_spring_rate_light_vehicle():
    phys = derive_physical(SuspensionDesign(1.5, 0.3, 0.3), LIGHT)
    assert phys.k_s == pytest.approx(22206.6, abs=0.1)
    assert math.sqrt(phys.k_s / LIGHT.m_s) / (2 * math.pi) == pytest.approx(1.5, rel=1e-12)


def test_damping_coefficients_recover_ratio():
    phys = derive_physical(SuspensionDesign(1.5, 0.3, 0.3), LIGHT)
    assert phys.c_p == pytest.approx(0.6 * math.sqrt(phys.k_s * 250.0), rel=1e-12)
    assert phys.c_n == phys.c_p
    assert phys.c_p / (2 * math.sqrt(phys.k_s * LIGHT.m_s)) == pytest.approx(0.3, rel=1e-12)


def test_zero_damping():
    phys = derive_physical(SuspensionDesign(1.2, 0.0, 0.0), LIGHT)
    assert phys.c_p == 0.0 and phys.c_n == 0.0


@pytest.mark.parametrize("kw", [
    dict(f_n=0.99, zeta_p=0.3, zeta_n=0.3),
    dict(f_n=2.01, zeta_p=0.3, zeta_n=0.3),
    dict(f_n=1.5, zeta_p=-0.01, zeta_n=0.3),
    dict(f_n=1.5, zeta_p=0.3, zeta_n=1.01),
])
def test_design_out_of_bounds(kw):
    with pytest.raises(DomainError):
        SuspensionDesign(**kw)


@pytest.mark.parametrize("kw", [dict(m_s=0), dict(m_u=-1), dict(k_t_nom=math.nan), dict(g=-9.81)])
def test_vehicle_validation(kw):
    base = dict(m_s=250.0, m_u=40.0, k_t_nom=2e5)
    with pytest.raises(DomainError):
        VehicleParams(**{**base, **kw})


@given(designs, vehicles)
def test_physical_invariants(design, params):
    phys = derive_physical(design, params)
    assert phys.k_s > 0 and phys.c_p >= 0 and phys.c_n >= 0
    c_crit = 2 * math.sqrt(phys.k_s * params.m_s)
    assert phys.c_p == pytest.approx(design.zeta_p * c_crit)
    assert phys.c_n == pytest.approx(design.zeta_n * c_crit)


# -- smoothed laws ------------------------------------------------------


PHYS = PhysicalSuspension(k_s=2e4, c_p=3000.0, c_n=1000.0)


def test_damping_midpoint_and_symmetric():
    assert smoothed_damping(0.0, PHYS) == 2000.0
    sym = PhysicalSuspension(2e4, 1500.0, 1500.0)
    assert np.all(smoothed_damping(np.linspace(-2, 2, 41), sym) == 1500.0)


def test_damping_rebound_branch():
    got = smoothed_damping(1.0, PHYS, eps=1e-6)
    assert abs(got - PHYS.c_p) <= 1e-6 * (PHYS.c_p - PHYS.c_n) / 2 * 1.0000001


def test_tire_stiffness_examples():
    kt = LIGHT.k_t_nom
    assert smoothed_tire_stiffness(0.0, LIGHT) == kt / 2
    assert abs(smoothed_tire_stiffness(0.01, LIGHT) - kt) < 1e-4 * kt
    assert abs(smoothed_tire_stiffness(-0.01, LIGHT)) < 1e-4 * kt


@given(st.floats(-10, 10), st.floats(0, 5e3), st.floats(0, 5e3))
def test_damping_bounded_by_branches(v, c_p, c_n):
    phys = PhysicalSuspension(1e4, c_p, c_n)
    c = smoothed_damping(v, phys)
    assert min(c_p, c_n) - 1e-9 <= c <= max(c_p, c_n) + 1e-9


@given(st.floats(-10, 10).filter(lambda v: abs(v) > 100 * DEFAULT_EPS), st.floats(0, 5e3), st.floats(0, 5e3))
def test_damping_matches_piecewise_away_from_switch(v, c_p, c_n):
    phys = PhysicalSuspension(1e4, c_p, c_n)
    assert abs(smoothed_damping(v, phys) - piecewise_damping(v, phys)) <= 0.01 * abs(c_p - c_n) + 1e-12


@given(st.floats(-1, 1).filter(lambda d: abs(d) > 100 * DEFAULT_EPS))
def test_tire_matches_piecewise_away_from_switch(d):
    kt = LIGHT.k_t_nom
    err = abs(smoothed_tire_stiffness(d, LIGHT) - piecewise_tire_stiffness(d, LIGHT))
    assert err <= 0.01 * kt


@given(st.floats(-1, 1))
def test_tire_stiffness_range(d):
    k = smoothed_tire_stiffness(d, LIGHT)
    assert 0.0 <= k <= LIGHT.k_t_nom


def test_laws_accept_arrays():
    v = np.array([-1.0, 0.0, 1.0])
    assert smoothed_damping(v, PHYS).shape == (3,)
    assert smoothed_tire_stiffness(v, LIGHT).shape == (3,)


# -- state_derivative / outputs -----------------------------------------


states = st.builds(
    State,
    x_u=st.floats(-0.1, 0.1), v_u=st.floats(-2, 2), x_s=st.floats(-0.2, 0.2), v_s=st.floats(-2, 2),
)


def test_equilibrium_is_fixed_point(design):
    x0 = static_equilibrium(LIGHT, design)
    assert np.max(np.abs(state_derivative(x0, 0.0, LIGHT, design))) < 1e-10


def test_rest_at_origin_without_gravity(design):
    p = VehicleParams(250.0, 40.0, 2e5, g=0.0)
    d = state_derivative(State(0, 0, 0, 0), 0.0, p, design)
    assert np.all(d == 0.0)


@given(states, st.floats(-0.1, 0.1), designs)
def test_derivative_matches_matrix_form(state, y, design):
    phys = derive_physical(design, LIGHT)
    got = state_derivative(state, y, LIGHT, design)
    want = matrix_form_derivative(
        state.as_array(), y, LIGHT.m_s, LIGHT.m_u, LIGHT.k_t_nom, LIGHT.g,
        phys.k_s, phys.c_p, phys.c_n, DEFAULT_EPS,
    )
    np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-8)


@given(states, st.floats(-0.1, 0.1), designs)
def test_output_acceleration_consistent(state, y, design):
    out = outputs(state, y, LIGHT, design)
    assert out.a_s == state_derivative(state, y, LIGHT, design)[3]


def test_static_tire_force(design):
    for p in (LIGHT, MID_HEAVY):
        x0 = static_equilibrium(p, design)
        assert outputs(x0, 0.0, p, design).f_t == pytest.approx(p.static_load, rel=1e-12)
    assert MID_HEAVY.static_load == pytest.approx(550 * 9.81)


def test_lift_off_force_vanishes(design):
    s = State(x_u=0.05, v_u=0.0, x_s=0.1, v_s=0.0)
    # residual of the smoothed law is about k_t * eps / 2
    assert abs(outputs(s, 0.0, LIGHT, design).f_t) <= LIGHT.k_t_nom * DEFAULT_EPS


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_nonfinite_derivative_raises(design):
    with pytest.raises(FloatingPointError):
        state_derivative(State(math.inf, 0, 0, 0), 0.0, LIGHT, design)


# -- static equilibrium -------------------------------------------------


def test_equilibrium_matches_linear_statics(design):
    x0 = static_equilibrium(LIGHT, design)
    phys = derive_physical(design, LIGHT)
    assert x0.x_u == pytest.approx(-LIGHT.static_load / LIGHT.k_t_nom, abs=1e-6)
    assert x0.x_u - x0.x_s == pytest.approx(LIGHT.m_s * LIGHT.g / phys.k_s, rel=1e-12)


def test_equilibrium_zero_gravity(design):
    x0 = static_equilibrium(VehicleParams(250.0, 40.0, 2e5, g=0.0), design)
    assert x0.as_array().tolist() == [0.0, 0.0, 0.0, 0.0]


@settings(max_examples=200)
@given(vehicles, designs)
def test_equilibrium_residual(params, design):
    x0 = static_equilibrium(params, design)
    assert np.linalg.norm(state_derivative(x0, 0.0, params, design)) < 1e-10


def test_state_round_trip():
    s = State(0.1, 0.2, 0.3, 0.4)
    assert State.from_array(s.as_array()) == s
