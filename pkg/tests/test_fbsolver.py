import numpy as np
import pytest

from stefan_front.diagnostics import verify_ordering
from stefan_front.errors import BlowUp, FrontCollision, NonPositive, ShapeMismatch
from stefan_front.fbsolver import (
    DIRICHLET,
    FrontFixedState,
    _check,
    make_initial,
    make_two_front_initial,
    solve_one_front,
    solve_two_front,
    stefan_speed,
    xi_grid,
)
from stefan_front.nonlinearity import bistable, logistic, make_homogeneous
from stefan_front.scenarios import semiwave_for

LOGISTIC = make_homogeneous(logistic())


def _state(xi, w, mu=1.0):
    return FrontFixedState(0.0, xi, w, 0.0, 0.0, mu)


def test_stefan_speed_exact_on_linear_and_quadratic():
    xi = xi_grid(1.0, 50)
    assert stefan_speed(_state(xi, -0.7 * xi / 2.0, mu=2.0)) == pytest.approx(0.7, rel=1e-13)
    assert stefan_speed(_state(xi, -xi * (1 + xi), mu=1.5)) == pytest.approx(1.5, rel=1e-12)


def test_stefan_speed_second_order():
    errs = []
    for N in (100, 200, 400):
        xi = xi_grid(1.0, N)
        errs.append(abs(stefan_speed(_state(xi, np.sin(-xi))) - 1.0))
    assert 3.5 < errs[0] / errs[1] < 4.5 and 3.5 < errs[1] / errs[2] < 4.5


def test_make_initial_variants():
    xi = xi_grid(40.0, 400)
    s = make_initial("step", xi, support="full")
    assert np.all(s.w[:-1] == 1.0) and s.w[-1] == 0.0
    prof = semiwave_for(logistic(), 1.0)
    sw = make_initial("semiwave", xi_grid(40.0, 2000), profile=prof)
    assert abs(sw.h_dot - prof.c_star) <= 1e-4
    with pytest.raises(ShapeMismatch):
        make_initial("sampled", xi, values=-np.ones_like(xi))
    with pytest.raises(ShapeMismatch):
        make_initial("sampled", xi, values=np.ones(3))


def test_zero_data_is_stationary():
    xi = xi_grid(10.0, 200)
    traj = solve_one_front(LOGISTIC, make_initial("sampled", xi, values=np.zeros_like(xi)),
                           0.05, 5.0, snapshot_times=[5.0])
    assert np.all(traj.h == 0.0) and np.all(traj.snapshots[-1].w == 0.0)


def test_constant_dirichlet_one_and_front_never_retreats():
    xi = xi_grid(20.0, 400)
    init = make_initial("step", xi, support=(-20.0, -3.0), height=0.6)
    traj = solve_one_front(LOGISTIC, init, 0.01, 10.0, left_bc=(DIRICHLET, 1.0),
                           snapshot_times=[10.0])
    assert traj.snapshots[-1].w[0] == 1.0
    assert np.all(np.diff(traj.h) >= -1e-14)
    assert traj.snapshots[-1].w.max() <= 1.0 + 1e-12


def test_ordered_pair_stays_ordered():
    xi = xi_grid(40.0, 1000)
    snaps = np.arange(0.0, 10.01, 1.0)
    f = make_homogeneous(bistable(0.25))
    lo = solve_one_front(f, make_initial("step", xi, support=(-40, -5), height=0.7), 0.01, 10.0,
                         snapshot_times=snaps)
    hi = solve_one_front(f, make_initial("step", xi, support=(-40, -5), height=1.0), 0.01, 10.0,
                         snapshot_times=snaps)
    rep = verify_ordering(lo, hi, tol=1e-8)
    assert rep.passed, rep.first_violation
    swapped = verify_ordering(hi, lo, tol=1e-8)
    assert not swapped.passed


def test_check_guards():
    with pytest.raises(NonPositive):
        _check(np.array([0.5, -1e-6, 0.0]), 2.0)
    with pytest.raises(BlowUp):
        _check(np.array([0.5, 25.0, 0.0]), 2.0)
    w = np.array([0.5, -1e-14, 0.0])
    _check(w, 2.0)
    assert w[1] == 0.0


def test_two_front_symmetry_and_speed():
    c = semiwave_for(logistic(), 1.0).c_star
    init = make_two_front_initial(lambda x: 4.0 * np.cos(np.pi * x), 0.5, 2000)
    traj = solve_two_front(LOGISTIC, init, 0.01, 200.0)
    assert np.max(np.abs(traj.h + traj.channels["g_minus"])) <= 1e-10
    assert abs(traj.h[-1] / traj.t[-1] - c) / c <= 0.02


def test_two_front_stays_above_cosine_lower_solution():
    # delta cos(pi x / 2 ell) is a stationary lower solution when delta < 1 - (pi / 2 ell)^2
    ell = 2.0
    delta = 0.5 * (1.0 - (np.pi / (2 * ell)) ** 2)
    init = make_two_front_initial(lambda x: 0.5 * np.cos(np.pi * x / (2 * ell)), ell, 1000)
    traj = solve_two_front(LOGISTIC, init, 0.01, 20.0, snapshot_times=np.arange(0, 20.01, 1.0))
    for s in traj.snapshots:
        inside = np.abs(s.x) <= ell
        assert np.min(s.v[inside] - delta * np.cos(np.pi * s.x[inside] / (2 * ell))) >= -1e-8
        assert s.g_minus <= -ell + 1e-12 and s.g_plus >= ell - 1e-12


def test_two_front_collision_guard():
    init = make_two_front_initial(lambda x: np.cos(np.pi * x), 0.5, 200)
    with pytest.raises(FrontCollision):
        solve_two_front(LOGISTIC, init, 0.01, 1.0, min_width=2.0)


def test_monotone_data_stays_monotone():
    xi = xi_grid(40.0, 1000)
    init = make_initial("sampled", xi, values=-np.expm1(xi / 2.0))
    traj = solve_one_front(make_homogeneous(bistable(0.25)), init, 0.01, 20.0,
                           snapshot_times=np.arange(0, 20.01, 2.0))
    for s in traj.snapshots:
        assert np.max(np.diff(s.w)) / s.dx <= 1e-8


def test_kink_correction_restores_second_order_laplacian():
    # w = theta - s + k s^3 / 6 for s > 0 beyond the kink, cubic jump J = k w_s
    from stefan_front.fbsolver import _kink_correction
    theta, jump = 0.3, 2.0
    df = lambda u: np.where(u > theta, jump, 0.0)
    errs = []
    for N in (200, 400, 800):
        x = np.linspace(-1.0, 1.0, N + 1) + 1.1 / N  # kink at 45% of a cell
        alpha = 0.0
        s = x - alpha
        J = -(0.0 - jump) * (-1.0)  # -[f'] w_x with w decreasing through theta
        w = theta - s + np.where(s > 0, J * s**3 / 6.0, 0.0)
        dx = x[1] - x[0]
        lap = (w[2:] - 2 * w[1:-1] + w[:-2]) / dx**2
        exact = np.where(s[1:-1] > 0, J * s[1:-1], 0.0)
        corrected = lap - _kink_correction(w, dx, (theta,), df)[1:-1]
        assert np.max(np.abs(lap - exact)) > 0.01 * abs(J) * dx
        errs.append(np.max(np.abs(corrected - exact)))
    # residual error comes from locating alpha by linear interpolation
    assert errs[0] <= 1e-7 and errs[0] / errs[1] > 6 and errs[1] / errs[2] > 6
