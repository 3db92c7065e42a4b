"""Limit states of the almost periodic KPP problems.

* u_c(t): the positive almost periodic solution of u' = u (c(t) - u).
  Since 1/u solves a linear equation,

      1 / u_c(t) = int_0^inf exp(-int_{t-s}^t c(r) dr) ds,

  which is evaluated by Gauss-Legendre panels on a truncated horizon.
* v_a(x): the positive bounded solution of v'' + v (a(x) - v) = 0,
  obtained by relaxing v_t = v_xx + v (a - v) from the constant
  super-solution sup a on a padded interval with v = a at its ends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded

from .errors import MeanConditionViolation, NoConvergence, PositivityViolation
from .nonlinearity import QuasiPeriodicSignal

TAIL_TOL = 1e-13
PANEL = 0.5
GAUSS_NODES = 16


def _horizon(c: QuasiPeriodicSignal, tail_tol=TAIL_TOL):
    # int_{t-s}^t c >= mean*s - 2 sum |a_i| / w_i gives the tail bound below
    osc = 2.0 * sum(abs(a) / w for a, w, _ in c.modes)
    return (math.log(1.0 / (tail_tol * c.mean)) + osc) / c.mean


def uc_values(c: QuasiPeriodicSignal, t, horizon: float | None = None):
    """u_c at the times ``t`` by direct quadrature of the closed form."""
    if not c.mean > 0:
        raise MeanConditionViolation(f"time average of c must be positive, got {c.mean}")
    H = _horizon(c) if horizon is None else float(horizon)
    n_panels = max(1, math.ceil(H / PANEL))
    x, wts = np.polynomial.legendre.leggauss(GAUSS_NODES)
    edges = np.linspace(0.0, H, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    s = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    ws = (half[:, None] * wts[None, :]).ravel()
    t = np.atleast_1d(np.asarray(t, dtype=float))
    expo = -c.integral(t[:, None] - s[None, :], t[:, None])
    inv = np.exp(expo) @ ws
    out = 1.0 / inv
    return out


@dataclass
class LimitStateTime:
    """u_c sampled on a window, callable at any t."""

    c: QuasiPeriodicSignal
    t: np.ndarray
    values: np.ndarray
    horizon: float

    def __call__(self, t):
        out = uc_values(self.c, t, self.horizon)
        return out[0] if np.ndim(t) == 0 else out

    def ode_residual(self):
        """max |u' - u (c - u)| with u' from fourth-order central differences."""
        u, t = self.values, self.t
        dt = t[1] - t[0]
        du = (-u[4:] + 8 * u[3:-1] - 8 * u[1:-3] + u[:-4]) / (12 * dt)
        ui = u[2:-2]
        return float(np.max(np.abs(du - ui * (self.c(t[2:-2]) - ui))))


def compute_uc(c: QuasiPeriodicSignal, window=(0.0, 100.0), dt: float = 0.01,
               horizon: float | None = None) -> LimitStateTime:
    """Almost periodic solution u_c of u' = u (c(t) - u) sampled on ``window``."""
    if not c.mean > 0:
        raise MeanConditionViolation(f"time average of c must be positive, got {c.mean}")
    H = _horizon(c) if horizon is None else float(horizon)
    t0, t1 = window
    n = int(round((t1 - t0) / dt)) + 1
    t = np.linspace(t0, t1, n)
    vals = np.concatenate([uc_values(c, chunk, H) for chunk in np.array_split(t, max(1, n // 2000))])
    return LimitStateTime(c, t, vals, H)


@dataclass
class LimitStateSpace:
    """v_a sampled on the central window [-X, X] (of a padded relaxation)."""

    a: QuasiPeriodicSignal
    x: np.ndarray
    values: np.ndarray
    pad: float
    steps: int = 0
    full_x: np.ndarray = field(default=None, repr=False)
    full_values: np.ndarray = field(default=None, repr=False)
    _spline: object = field(default=None, repr=False)

    def __post_init__(self):
        self._spline = CubicSpline(self.x, self.values)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < self.x[0] - 1e-12) or np.any(x > self.x[-1] + 1e-12):
            raise ValueError("v_a requested outside the computed window")
        return self._spline(x)[()]

    def ode_residual(self, interior_fraction: float = 0.5):
        """max |v'' + v (a - v)| on the central part, fourth-order differences."""
        v, x = self.values, self.x
        dx = x[1] - x[0]
        d2 = (-v[4:] + 16 * v[3:-1] - 30 * v[2:-2] + 16 * v[1:-3] - v[:-4]) / (12 * dx**2)
        xi = x[2:-2]
        r = d2 + v[2:-2] * (self.a(xi) - v[2:-2])
        centre = 0.5 * (x[0] + x[-1])
        radius = 0.5 * interior_fraction * (x[-1] - x[0])
        m = np.abs(xi - centre) <= radius
        return float(np.max(np.abs(r[m])))


def _newton_polish(v, ax, dx, iters: int = 8, tol: float = 1e-13):
    # fourth-order interior stencil, second order next to the Dirichlet ends
    n = len(v) - 1
    ab = np.zeros((5, n + 1))  # rows: +2, +1, 0, -1, -2 diagonals
    c4 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / (12 * dx**2)
    c2 = np.array([1.0, -2.0, 1.0]) / dx**2
    for _ in range(iters):
        g = np.zeros(n + 1)
        g[2:-2] = (c4[0] * v[:-4] + c4[1] * v[1:-3] + c4[2] * v[2:-2] + c4[3] * v[3:-1] + c4[4] * v[4:])
        g[1] = c2 @ v[0:3]
        g[-2] = c2 @ v[-3:]
        g[1:-1] += v[1:-1] * (ax[1:-1] - v[1:-1])
        g[0] = g[-1] = 0.0
        ab[:] = 0.0
        ab[2, 0] = ab[2, -1] = 1.0
        jac = ax - 2.0 * v
        for i_row, stencil in ((1, c2), (n - 1, c2)):
            for k, coef in enumerate(stencil):
                col = i_row - 1 + k
                ab[2 + i_row - col, col] += coef
            ab[2, i_row] += jac[i_row]
        rows = np.arange(2, n - 1)
        for k, coef in enumerate(c4):
            cols = rows - 2 + k
            ab[2 + rows - cols, cols] += coef
        ab[2, rows] += jac[rows]
        dv = solve_banded((2, 2), ab, -g, check_finite=False)
        v = v + dv
        if np.max(np.abs(dv)) < tol:
            break
    return v


def compute_va(a: QuasiPeriodicSignal, window=(-50.0, 50.0), pad: float = 30.0,
               dx: float = 0.01, dt: float = 5.0, tol: float = 1e-10,
               max_steps: int = 10000) -> LimitStateSpace:
    """Steady state of v_t = v_xx + v (a - v) on ``window`` padded by ``pad``.

    Each step solves  (v1 - v0)/dt = v1_xx + a v0 - v0 v1,  an M-matrix
    system that keeps v positive for any dt; iteration starts at v = sup a
    and stops when the sup norm of the
    discrete time derivative drops below ``tol``.
    """
    if not a.lower_bound > 0:
        raise PositivityViolation(f"a must be positive, inf-bound {a.lower_bound}")
    x0, x1 = window
    lo, hi = x0 - pad, x1 + pad
    n = int(round((hi - lo) / dx))
    x = lo + dx * np.arange(n + 1)
    ax = a(x)
    if np.any(ax <= 0):
        raise PositivityViolation("a(x) <= 0 on the grid")
    v = np.full(n + 1, float(np.max(ax)))
    v[0], v[-1] = ax[0], ax[-1]
    r = dt / dx**2
    ab = np.zeros((3, n + 1))
    for step in range(1, max_steps + 1):
        ab[0, 2:] = -r
        ab[2, :-2] = -r
        ab[1, 1:-1] = 1.0 + 2.0 * r + dt * v[1:-1]
        ab[1, 0] = ab[1, -1] = 1.0
        ab[0, 1] = ab[2, -2] = 0.0
        rhs = v * (1.0 + dt * ax)
        rhs[0], rhs[-1] = ax[0], ax[-1]
        v_new = solve_banded((1, 1), ab, rhs, check_finite=False)
        rate = float(np.max(np.abs(v_new - v))) / dt
        v = v_new
        if rate < tol:
            break
    else:
        raise NoConvergence(f"relaxation rate {rate:.3e} after {max_steps} steps")
    v = _newton_polish(v, ax, dx)
    if np.any(v <= 0):
        raise PositivityViolation("steady state lost positivity")
    i0 = int(round(pad / dx))
    i1 = n - i0
    return LimitStateSpace(a, x[i0:i1 + 1].copy(), v[i0:i1 + 1].copy(), float(pad), step,
                           full_x=x, full_values=v)
