import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from stefan_front.errors import NoSemiWave
from stefan_front.nonlinearity import bistable, combustion, logistic
from stefan_front.scenarios import semiwave_for
from stefan_front.semiwave import (
    AXIS_CONTACT,
    REACHED_Q0,
    AxisContact,
    find_cstar,
    phase_trajectory,
    residual_scan,
    saddle_slope,
    shoot_residual,
)

CLASSES = {"logistic": logistic(), "bistable": bistable(0.25), "combustion": combustion(0.3)}


def test_saddle_slope():
    assert saddle_slope(-1.0, 0.0) == -1.0
    lam = saddle_slope(-1.0, 0.7)
    assert lam * lam - 0.7 * lam - 1.0 == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("name,expected", [("logistic", math.sqrt(1 / 3)),
                                           ("bistable", math.sqrt(1 / 12)),
                                           ("combustion", math.sqrt(0.7**3 / 3))])
def test_zero_speed_intercept_is_energy(name, expected):
    curve = phase_trajectory(CLASSES[name], 0.0)
    assert curve.terminal == REACHED_Q0
    assert curve.P0 == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize("name", sorted(CLASSES))
def test_phase_curve_solves_its_ode(name):
    curve = phase_trajectory(CLASSES[name], 0.15)
    assert curve.ode_residual() <= 1e-7
    assert np.all(np.diff(curve.q) < 0)


def test_axis_contact_for_large_speed():
    curve = phase_trajectory(bistable(0.25), 3.0)
    assert curve.terminal == AXIS_CONTACT
    assert 0.0 < curve.q_contact < 1.0
    r = shoot_residual(bistable(0.25), 3.0, 1.0)
    assert isinstance(r, AxisContact)
    assert r < -1e9 and not (r > -1e9)


def test_unbalanced_bistable_has_no_semiwave():
    with pytest.raises(NoSemiWave) as info:
        find_cstar(bistable(0.6), 1.0)
    assert info.value.c_cap > 0


@pytest.mark.parametrize("name", sorted(CLASSES))
def test_speed_profile_contract(name):
    prof = semiwave_for(CLASSES[name], 1.0)
    assert abs(prof.residual) <= 1e-8
    assert prof.slope0 == pytest.approx(prof.c_star / prof.mu, abs=1e-6)
    assert np.all(np.diff(prof.q) > 0)
    assert prof.q[0] == 0.0 and 1 - 1e-9 < prof.q[-1] < 1.0
    assert prof.ode_residual() <= 1e-6
    assert float(prof(prof.inverse(0.5))) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("name", sorted(CLASSES))
def test_profile_matches_forward_integration(name):
    # independent route: integrate q'' = c q' - f(q) forward from (0, c/mu)
    f = CLASSES[name]
    prof = semiwave_for(f, 1.0)
    z = np.linspace(0.0, 8.0, 401)
    sol = solve_ivp(lambda s, y: [y[1], prof.c_star * y[1] - f.f(y[0])], (0.0, 8.0),
                    [0.0, prof.c_star], t_eval=z, rtol=1e-12, atol=1e-14, method="DOP853")
    assert np.max(np.abs(sol.y[0] - prof(z))) <= 1e-5


def test_speed_increases_with_mu():
    cs = [semiwave_for(logistic(), mu).c_star for mu in (0.1, 1.0, 10.0)]
    assert cs[0] < cs[1] < cs[2] < 2.0


def test_single_sign_change_on_scan():
    f = logistic()
    res, changes = residual_scan(f, 1.0, np.linspace(0.0, 1.0, 16))
    assert len(changes) == 1
    c = semiwave_for(f, 1.0).c_star
    k = changes[0]
    assert np.linspace(0.0, 1.0, 16)[k] <= c <= np.linspace(0.0, 1.0, 16)[k + 1]


def test_bisection_is_deterministic():
    a = find_cstar(logistic(), 0.5)
    b = find_cstar(logistic(), 0.5)
    assert a.c_star == b.c_star and np.array_equal(a.q, b.q)
