import numpy as np
import pytest

from stefan_front import diagnostics as dg
from stefan_front.apsteady import compute_uc
from stefan_front.errors import DegenerateSlope, LevelNotAttained, NotOrdered, WindowTooShort
from stefan_front.fbsolver import (DIRICHLET, FrontFixedState, Trajectory, make_initial,
                                   solve_one_front, xi_grid)
from stefan_front.nonlinearity import QuasiPeriodicSignal, logistic, make_homogeneous, make_kpp_time_ap
from stefan_front.scenarios import semiwave_for


def _traj(t, h):
    return Trajectory(np.asarray(t), np.asarray(h), np.gradient(h, t), [], {}, {})


def test_speed_of_exact_linear_front():
    t = np.linspace(0, 100, 201)
    rep = dg.estimate_global_mean_speed(_traj(t, 3 * t))
    assert rep.spread <= 1e-12 and rep.mean_estimate == pytest.approx(3.0)


def test_speed_spread_of_oscillating_front():
    t = np.linspace(0, 100, 1001)
    rep = dg.estimate_global_mean_speed(_traj(t, 3 * t + np.sin(t)), delta_min=20.0)
    assert 0 < rep.spread <= 4.0 / 20.0
    assert np.all(np.abs(rep.samples[:, 0] - rep.samples[:, 1]) >= 20.0 - 1e-9)


def test_window_too_short():
    t = np.linspace(0, 10, 11)
    with pytest.raises(WindowTooShort):
        dg.estimate_global_mean_speed(_traj(t, t), delta_min=6.0)


def test_drift_of_shifted_front():
    t = np.linspace(0, 50, 101)
    rep = dg.drift(_traj(t, 0.4 * t + 5.0), 0.4)
    assert rep.G_hat == pytest.approx(5.0, abs=1e-12)
    assert rep.sup_drift <= 1e-12 and rep.tail_drift <= rep.sup_drift + 1e-15


def test_profile_distance_cases():
    prof = semiwave_for(logistic(), 1.0)
    xi = xi_grid(40.0, 2000)
    s = make_initial("semiwave", xi, profile=prof)
    assert dg.profile_distance(s, prof) <= 1e-8
    zero = FrontFixedState(0.0, xi, np.zeros_like(xi), 0.0, 0.0, 1.0)
    assert dg.profile_distance(zero, prof) == pytest.approx(float(prof(40.0)), abs=1e-12)


def test_part_metric_definition():
    xi = xi_grid(10.0, 200)
    w1 = -np.expm1(xi)
    assert dg.part_metric(w1, 2 * w1, dx=0.05) == pytest.approx(np.log(2.0), abs=1e-12)
    assert dg.part_metric(w1, w1, dx=0.05) == 0.0
    with pytest.raises(NotOrdered):
        dg.part_metric(2 * w1, w1, dx=0.05)
    with pytest.raises(DegenerateSlope):
        dg.part_metric(w1, 2 * w1, slope_at_0=(0.0, -1.0))


def _brute_force_rho(w1, w2, dx):
    # smallest alpha on a fine scan with w2 <= alpha w1 nodewise and slope-wise
    s1 = (4 * w1[-2] - w1[-3]) / (2 * dx)
    s2 = (4 * w2[-2] - w2[-3]) / (2 * dx)
    best = 1.0
    for k in range(len(w1) - 1):
        best = max(best, w2[k] / w1[k])
    return np.log(max(best, s2 / s1))


def test_part_metric_on_time_ap_pair():
    c = QuasiPeriodicSignal.standard()
    uc = compute_uc(c, (0.0, 5.0), 0.01)
    xi = xi_grid(20.0, 400)
    u0 = float(uc(0.0))
    spec = make_kpp_time_ap(c)
    bc = (DIRICHLET, lambda t, x: uc(t))
    a = solve_one_front(spec, make_initial("sampled", xi, values=u0 * -np.expm1(xi / 3)), 0.01,
                        2.0, bc, [2.0])
    b = solve_one_front(spec, make_initial("sampled", xi, values=u0 * -np.expm1(xi)), 0.01,
                        2.0, bc, [2.0])
    wa, wb = a.snapshots[-1].w, b.snapshots[-1].w
    dx = xi[1] - xi[0]
    assert dg.part_metric(wa, wb, dx=dx) == pytest.approx(_brute_force_rho(wa, wb, dx), abs=1e-14)


@pytest.fixture(scope="module")
def hold_traj():
    prof = semiwave_for(logistic(), 1.0)
    xi = xi_grid(40.0, 2000)
    traj = solve_one_front(make_homogeneous(logistic()), make_initial("semiwave", xi, profile=prof),
                           0.01, 5.0, snapshot_times=np.arange(0, 5.01, 1.0))
    return prof, traj


def test_level_set_width_matches_profile(hold_traj):
    prof, traj = hold_traj
    assert dg.level_set_width(traj, 0.5) == pytest.approx(prof.inverse(0.5), abs=1e-3)
    with pytest.raises(LevelNotAttained):
        dg.level_set_width(traj, 1.0)


def test_ordering_identical_and_swapped(hold_traj):
    _, traj = hold_traj
    rep = dg.verify_ordering(traj, traj)
    assert rep.passed and rep.margin == 0.0
    xi = traj.snapshots[0].xi
    lower = solve_one_front(make_homogeneous(logistic()),
                            make_initial("step", xi, support=(-40, -5), height=0.5), 0.01, 5.0,
                            snapshot_times=np.arange(0, 5.01, 1.0))
    assert dg.verify_ordering(lower, traj).passed
    bad = dg.verify_ordering(traj, lower)
    assert not bad.passed and bad.first_violation["t"] == 0.0


def test_energy_cases(hold_traj):
    prof, traj = hold_traj
    F = logistic().F
    s0 = traj.snapshots[0]
    zero = FrontFixedState(0.0, s0.xi, np.zeros_like(s0.xi), 0.0, 0.0, 1.0)
    assert dg.energy_functional(zero, prof.c_star, F) == 0.0
    e = [dg.energy_functional(s, prof.c_star, F) for s in traj.snapshots]
    assert max(e) - min(e) <= 1e-4


def test_front_matched_difference_of_identical_runs(hold_traj):
    _, traj = hold_traj
    out = dg.front_matched_difference(traj, traj)
    assert out["sup_diff"] == 0.0
