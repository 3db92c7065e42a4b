"""Interval problem with two free boundaries: symmetric data spread at speed c* each way."""
import numpy as np

from stefan_front.fbsolver import make_two_front_initial, solve_two_front
from stefan_front.nonlinearity import logistic, make_homogeneous
from stefan_front.scenarios import semiwave_for

c = semiwave_for(logistic(), 1.0).c_star
init = make_two_front_initial(lambda x: 4.0 * np.cos(np.pi * x), 0.5, 2000)
traj = solve_two_front(make_homogeneous(logistic()), init, 0.01, 200.0, record_every=100)
print(f"g+(T)/T = {traj.h[-1] / traj.t[-1]:.5f}, c* = {c:.5f}")
print("symmetry defect", np.max(np.abs(traj.h + traj.channels["g_minus"])))
