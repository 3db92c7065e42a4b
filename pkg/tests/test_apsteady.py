import math

import numpy as np
import pytest
from scipy.integrate import solve_bvp, solve_ivp

from stefan_front import io
from stefan_front.apsteady import compute_uc, compute_va
from stefan_front.errors import MeanConditionViolation, NoConvergence, PositivityViolation
from stefan_front.nonlinearity import QuasiPeriodicSignal

SIGNAL = QuasiPeriodicSignal.standard()


@pytest.fixture(scope="module")
def uc():
    return compute_uc(SIGNAL, (0.0, 60.0), 0.01)


def test_constant_coefficient_gives_constant_state():
    lim = compute_uc(QuasiPeriodicSignal(1.7), (0.0, 5.0), 0.1)
    assert np.max(np.abs(lim.values - 1.7)) <= 1e-12


def test_uc_residual_and_bounds(uc):
    assert uc.ode_residual() <= 1e-6
    assert np.all(uc.values > 0)
    assert uc.values.max() <= max(SIGNAL.upper_bound, 0.0) + 1e-8


def test_uc_matches_forward_integration(uc):
    for u0 in (0.3, 2.5):
        sol = solve_ivp(lambda t, u: u * (SIGNAL(t) - u), (-60.0, 60.0), [u0], method="DOP853",
                        rtol=1e-12, atol=1e-14, dense_output=True)
        assert np.max(np.abs(sol.sol(uc.t)[0] - uc.values)) <= 1e-6


def test_uc_horizon_independence(uc):
    longer = compute_uc(SIGNAL, (0.0, 10.0), 0.05, horizon=2.0 * uc.horizon)
    assert np.max(np.abs(longer.values - uc(longer.t))) <= 1e-9


def test_uc_allows_negative_dips():
    c = QuasiPeriodicSignal(0.3, ((0.5, 1.0, 0.0), (0.2, math.sqrt(2), 0.0)))
    lim = compute_uc(c, (0.0, 30.0), 0.01)
    assert c.lower_bound < 0 and np.all(lim.values > 0)
    assert lim.ode_residual() <= 1e-6


def test_uc_mean_condition():
    with pytest.raises(MeanConditionViolation):
        compute_uc(QuasiPeriodicSignal(0.0, ((0.3, 1.0, 0.0),)))


def test_va_constant():
    v = compute_va(QuasiPeriodicSignal(0.8), (-10.0, 10.0), 10.0)
    assert np.max(np.abs(v.values - 0.8)) <= 1e-8


def test_va_periodic_coefficient_gives_periodic_state():
    a = QuasiPeriodicSignal(1.0, ((0.3, 1.0, 0.0),))
    v = compute_va(a, (-20.0, 20.0), 30.0, dx=0.01)
    x = np.linspace(-10.0, 10.0 - 2 * np.pi, 500)
    assert np.max(np.abs(v(x) - v(x + 2 * np.pi))) <= 1e-6


def test_va_residual_pad_and_sandwich():
    v = compute_va(SIGNAL, (-30.0, 30.0), 30.0)
    assert v.ode_residual() <= 1e-5
    v2 = compute_va(SIGNAL, (-30.0, 30.0), 60.0)
    assert np.max(np.abs(v2.values - v.values)) <= 1e-6
    a = SIGNAL(v.x)
    assert a.min() <= v.values.min() and v.values.max() <= a.max()


def test_va_matches_boundary_value_solver():
    v = compute_va(SIGNAL, (-20.0, 20.0), 30.0)
    x = np.linspace(-50.0, 50.0, 2001)
    sol = solve_bvp(lambda s, y: np.vstack([y[1], -y[0] * (SIGNAL(s) - y[0])]),
                    lambda ya, yb: np.array([ya[0] - SIGNAL(-50.0), yb[0] - SIGNAL(50.0)]),
                    x, np.vstack([SIGNAL(x), 0 * x]), tol=1e-10, max_nodes=10**6)
    assert sol.status == 0
    assert np.max(np.abs(sol.sol(v.x)[0] - v.values)) <= 1e-8


def test_va_errors():
    with pytest.raises(PositivityViolation):
        compute_va(QuasiPeriodicSignal(0.5, ((0.6, 1.0, 0.0),)), (-5.0, 5.0), 5.0)
    with pytest.raises(NoConvergence):
        compute_va(SIGNAL, (-5.0, 5.0), 5.0, max_steps=1)


def test_limit_state_csv(tmp_path, uc):
    io.write_limit_state(tmp_path / "uc.csv", uc)
    header, cols = io.read_csv(tmp_path / "uc.csv")
    assert header["kind"] == "u_c"
    assert np.array_equal(cols["u_c"], uc.values)
    v = compute_va(SIGNAL, (-5.0, 5.0), 20.0)
    io.write_limit_state(tmp_path / "va.csv", v)
    _, cols = io.read_csv(tmp_path / "va.csv")
    assert np.array_equal(cols["v_a"], v.values)
