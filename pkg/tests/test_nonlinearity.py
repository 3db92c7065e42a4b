import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad, solve_ivp

from stefan_front.errors import BadWindow, HypothesisViolation, MeanConditionViolation
from stefan_front.nonlinearity import (
    KPP_SPACE_AP,
    NonlinearitySpec,
    QuasiPeriodicSignal,
    bistable,
    check_hypothesis,
    classify,
    combustion,
    evaluate,
    homogeneous_from_json,
    logistic,
    make_homogeneous,
    make_kpp_space_ap,
    make_kpp_time_ap,
    make_two_phase,
    polynomial,
)

CLASSES = [logistic(), bistable(0.25), combustion(0.3), logistic(2.0)]
SIGNAL = QuasiPeriodicSignal.standard()


def all_specs():
    return [make_homogeneous(f) for f in CLASSES] + [
        make_kpp_time_ap(SIGNAL),
        make_kpp_space_ap(SIGNAL),
        make_two_phase(logistic(), logistic(2.0), 1.0, 2.0),
    ]


@given(t=st.floats(-50, 50), x=st.floats(-50, 50))
def test_zero_is_an_equilibrium_for_every_kind(t, x):
    for spec in all_specs():
        assert spec(t, x, 0.0) == 0.0


@settings(max_examples=60)
@given(s=st.floats(0.0, 1.9))
def test_antiderivative_matches_quadrature(s):
    for f in CLASSES:
        ref, _ = quad(f.f, 0.0, s, points=[0.3] if 0.0 < 0.3 < s else None)
        assert f.F(s) == pytest.approx(ref, abs=1e-12)


@settings(max_examples=40)
@given(u=st.floats(0.01, 1.9).filter(lambda u: abs(u - 0.3) > 1e-3))
def test_derivative_matches_difference_quotient(u):
    h = 1e-6
    for f in CLASSES:
        assert f.df(u) == pytest.approx((f.f(u + h) - f.f(u - h)) / (2 * h), abs=1e-6)


def test_evaluation_clamps_to_cap():
    spec = make_homogeneous(logistic(), u_cap=2.0)
    assert spec(0.0, 0.0, 5.0) == spec(0.0, 0.0, 2.0) == -2.0
    assert spec(0.0, 0.0, -1.0) == 0.0
    assert evaluate(spec, 0.0, 0.0, 0.5) == 0.25


def test_classification():
    assert classify(logistic()) == "monostable"
    assert classify(bistable(0.25)) == "bistable"
    assert classify(combustion(0.3)) == "combustion"


def test_hypothesis_rejects_positive_slope_at_one():
    with pytest.raises(HypothesisViolation):
        check_hypothesis(polynomial([0.0, -1.0, 1.0]))  # u(u - 1)
    with pytest.raises(HypothesisViolation):
        check_hypothesis(polynomial([0.1, 1.0, -1.0]))  # f(0) != 0
    check_hypothesis(logistic())


def test_bistable_closed_form_antiderivative():
    f = bistable(0.25)
    assert f.F(1.0) == pytest.approx(1.0 / 24.0, abs=1e-15)


def test_signal_integral_is_exact():
    t0, t1 = -3.2, 17.5
    ref, _ = quad(SIGNAL, t0, t1, limit=200)
    assert SIGNAL.integral(t0, t1) == pytest.approx(ref, abs=1e-11)


def test_ap_coefficient_conditions():
    with pytest.raises(MeanConditionViolation):
        make_kpp_time_ap(QuasiPeriodicSignal(-0.1, ((0.3, 1.0, 0.0),)))
    with pytest.raises(MeanConditionViolation):
        make_kpp_space_ap(QuasiPeriodicSignal(0.5, ((0.3, 1.0, 0.0), (0.3, math.sqrt(2), 0.0))))
    # time coefficient may dip negative as long as the mean is positive
    make_kpp_time_ap(QuasiPeriodicSignal(0.2, ((0.5, 1.0, 0.0),)))


def test_two_phase_window_and_phases():
    with pytest.raises(BadWindow):
        make_two_phase(logistic(), bistable(), 5.0, 5.0)
    spec = make_two_phase(logistic(), logistic(2.0), 1.0, 2.0)
    assert spec(0.5, 0.0, 0.5) == logistic()(0.5)
    assert spec(3.0, 0.0, 0.5) == logistic(2.0)(0.5)
    mid = spec(1.5, 0.0, 0.5)
    assert logistic()(0.5) < mid < logistic(2.0)(0.5)


def test_json_round_trip():
    for spec in all_specs():
        back = NonlinearitySpec.from_json(spec.to_json())
        assert back.kind == spec.kind
        us = np.linspace(0, 1.5, 7)
        assert np.array_equal(back(0.7, 1.3, us), spec(0.7, 1.3, us))
    assert homogeneous_from_json("bistable(0.3)").F(1.0) == bistable(0.3).F(1.0)
    assert homogeneous_from_json({"poly": [0, 1, -1]})(0.5) == pytest.approx(0.25)


@pytest.mark.parametrize("kind", ["time", "space"])
def test_exact_reaction_flow(kind):
    spec = make_kpp_time_ap(SIGNAL) if kind == "time" else make_kpp_space_ap(SIGNAL)
    x, t, dt = 0.7, 2.3, 0.05
    for u0 in (0.0, 0.2, 1.4):
        got = spec.flow(t, dt, x, u0)
        ref = solve_ivp(lambda s, u: spec(s, x, u), (t, t + dt), [u0], rtol=1e-13, atol=1e-15)
        assert float(got) == pytest.approx(ref.y[0, -1], abs=1e-12)
    assert spec.kind != KPP_SPACE_AP or spec.flow(t, dt, x, 0.0) == 0.0


def test_homogeneous_flow_is_one_euler_step():
    spec = make_homogeneous(logistic())
    assert spec.flow(0.0, 0.1, 0.0, 0.5) == pytest.approx(0.5 + 0.1 * 0.25)
