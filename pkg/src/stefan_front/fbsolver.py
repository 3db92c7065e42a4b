"""Time stepping of the free boundary problem in front-fixed coordinates.

One front: u_t = u_xx + f(t, x, u) on x < h(t), u(t, h) = 0,
h' = -mu u_x(t, h).  With xi = x - h(t) and w(t, xi) = u(t, xi + h(t))
the domain becomes the fixed interval [-L, 0] and

    w_t = w_xixi + h' w_xi + f(t, xi + h, w),   w(t, 0) = 0,
    h'  = -mu w_xi(t, 0).

Two fronts: the interval [g-, g+] is mapped onto y in [-1, 1] with
x = m + l y, m = (g+ + g-)/2, l = (g+ - g-)/2, which gives

    v_t = v_yy / l^2 + (m' + l' y) v_y / l + f(t, m + l y, v),
    g+' = -mu v_y(1) / l,   g-' = -mu v_y(-1) / l.

Each step treats diffusion and advection implicitly (one tridiagonal
solve), the reaction explicitly, and lags the front speed by one step.
Advection uses central differences while the cell Peclet number
|speed| dx / 2 stays below one, which keeps the implicit matrix an
M-matrix and the scheme monotone; otherwise it falls back to upwinding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded

from .errors import BlowUp, FrontCollision, NonPositive, ShapeMismatch
from .nonlinearity import HOMOGENEOUS, NonlinearitySpec

TOL_POS = 1e-12
SAFETY = 0.5

NEUMANN_ZERO = "neumann_zero"
DIRICHLET = "dirichlet"


@dataclass
class FrontFixedState:
    """One time slice of the front-fixed field on [-L, 0]."""

    t: float
    xi: np.ndarray
    w: np.ndarray
    h: float
    h_dot: float
    mu: float

    @property
    def dx(self):
        return float(self.xi[1] - self.xi[0])

    @property
    def x(self):
        """Physical positions of the nodes."""
        return self.xi + self.h

    def copy(self):
        return replace(self, xi=self.xi, w=self.w.copy())


@dataclass
class TwoFrontState:
    """One time slice of the interval problem on the Landau grid y in [-1, 1]."""

    t: float
    y: np.ndarray
    v: np.ndarray
    g_minus: float
    g_plus: float
    mu: float
    gm_dot: float = 0.0
    gp_dot: float = 0.0

    @property
    def x(self):
        m = 0.5 * (self.g_plus + self.g_minus)
        half = 0.5 * (self.g_plus - self.g_minus)
        return m + half * self.y

    def copy(self):
        return replace(self, y=self.y, v=self.v.copy())


@dataclass
class Trajectory:
    """Time series of the front plus sparse field snapshots.

    ``channels`` holds named scalar series aligned with ``t``.
    """

    t: np.ndarray
    h: np.ndarray
    h_dot: np.ndarray
    snapshots: list = field(default_factory=list)
    channels: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def snapshot_times(self):
        return np.array([s.t for s in self.snapshots])

    def snapshot_at(self, t):
        times = self.snapshot_times
        k = int(np.argmin(np.abs(times - t)))
        return self.snapshots[k]


def xi_grid(L: float, N: int) -> np.ndarray:
    return np.linspace(-float(L), 0.0, int(N) + 1)


def one_sided_slope(w: np.ndarray, dx: float) -> float:
    """Second-order backward difference of w at the last node, assuming w[-1] = 0."""
    return (3.0 * w[-1] - 4.0 * w[-2] + w[-3]) / (2.0 * dx)


def stefan_speed(state: FrontFixedState) -> float:
    """h' = -mu w_xi(0) from the three-point one-sided difference."""
    if state.w.size < 4:
        raise ValueError("stefan_speed needs at least N = 3")
    return -state.mu * (-4.0 * state.w[-2] + state.w[-3]) / (2.0 * state.dx)


def make_initial(kind, xi: np.ndarray, mu: float = 1.0, h: float = 0.0, t: float = 0.0,
                 profile=None, height: float = 1.0, support=None, values=None) -> FrontFixedState:
    """Build a valid initial state with w = 0 at the front.

    ``kind`` is ``"semiwave"`` (sample ``profile`` at z = -xi), ``"step"``
    (``height`` on the closed interval ``support`` = (xi_a, xi_b), or on the
    whole grid when ``support`` is ``None``/``"full"``) or ``"sampled"``
    (explicit nodal ``values``).
    """
    xi = np.asarray(xi, dtype=float)
    if kind == "semiwave":
        if profile is None:
            raise ShapeMismatch("semiwave initial data needs a profile")
        w = np.asarray(profile(-xi), dtype=float)
    elif kind == "step":
        if support is None or support == "full":
            w = np.full(xi.shape, float(height))
        else:
            a, b = support
            w = np.where((xi >= a) & (xi <= b), float(height), 0.0)
    elif kind == "sampled":
        w = np.asarray(values, dtype=float).copy()
        if w.shape != xi.shape:
            raise ShapeMismatch(f"expected {xi.shape[0]} values, got {w.shape}")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ShapeMismatch("initial values must be finite and nonnegative")
    else:
        raise ValueError(f"unknown initial data kind {kind!r}")
    w = w.copy()
    w[-1] = 0.0
    state = FrontFixedState(float(t), xi, w, float(h), 0.0, float(mu))
    state.h_dot = stefan_speed(state)
    return state


def _left_value(left_bc, t, x_left):
    if left_bc == NEUMANN_ZERO or left_bc is None:
        return None
    kind, source = left_bc
    if kind != DIRICHLET:
        raise ValueError(f"unknown left boundary condition {left_bc!r}")
    return float(source(t, x_left)) if callable(source) else float(source)


def _advection_coeffs(speed, diff, dx):
    """Sub/super-diagonal weights of  diff * w_xx + speed * w_x  at interior nodes."""
    speed = np.asarray(speed, dtype=float)
    d = diff / dx**2
    central = np.abs(speed) * dx <= 2.0 * diff
    lower = np.where(central, d - speed / (2 * dx), d - np.minimum(speed, 0.0) / dx)
    upper = np.where(central, d + speed / (2 * dx), d + np.maximum(speed, 0.0) / dx)
    return lower, upper


def _check(w, u_cap):
    lo = float(w.min())
    if lo < -TOL_POS:
        raise NonPositive(f"field undershoot {lo:.3e}; refine dt or dx")
    if not np.all(np.isfinite(w)) or float(np.abs(w).max()) > 10.0 * u_cap:
        raise BlowUp("field exceeded 10 * u_cap")
    np.maximum(w, 0.0, out=w)


def _substeps(dt, lip):
    dt_max = SAFETY / (2.0 * lip) if lip > 0 else math.inf
    return max(1, math.ceil(dt / dt_max - 1e-12))


def _kink_correction(w, dx, kinks, df):
    """Truncation error of the 3-point Laplacian next to kinks of f.

    Where w crosses a level theta at which f' jumps, w''' jumps by
    J = -[f'(w)] w_xi across the crossing point alpha.  The centred second
    difference at the node left of alpha then exceeds w'' by J s^3 / (6 dx^2)
    with s the distance from alpha to the right neighbour, and symmetrically
    on the right; these terms are returned so they can be subtracted.
    """
    corr = np.zeros_like(w)
    for theta in kinks:
        a, b = w[:-1] - theta, w[1:] - theta
        for i in np.nonzero(a * b < 0)[0]:
            if i == 0 or i + 1 >= w.size - 1:
                continue
            frac = a[i] / (a[i] - b[i])  # alpha = xi_i + frac dx
            slope = (w[i + 1] - w[i]) / dx
            eps = 1e-9
            jump_f = float(df(theta + eps) - df(theta - eps))  # f' above minus below
            # right of alpha lies above theta when w increases
            J = -(jump_f if slope > 0 else -jump_f) * slope
            s_right = (1.0 - frac) * dx
            s_left = frac * dx
            corr[i] += J * s_right**3 / (6.0 * dx * dx)
            corr[i + 1] += J * s_left**3 / (6.0 * dx * dx)
    return corr


def _step_one_front(spec, w, xi, dx, t, h, hd, dt, mu, left_bc, ab):
    N = w.size - 1
    rhs = spec.flow(t, dt, xi + h, w)
    kinks = getattr(spec.params, "kinks", ()) if spec.kind == HOMOGENEOUS else ()
    if kinks:
        rhs -= dt * _kink_correction(w, dx, kinks, spec.params.df)
    lower, upper = _advection_coeffs(hd, 1.0, dx)
    # ab rows: super, main, sub (scipy banded layout)
    ab[0, 2:] = -dt * upper
    ab[1, 1:N] = 1.0 + dt * (lower + upper)
    ab[2, :N - 1] = -dt * lower
    ab[1, N] = 1.0
    ab[2, N - 1] = 0.0
    rhs[N] = 0.0
    value = _left_value(left_bc, t + dt, xi[0] + h + dt * hd)  # predicted front
    if value is None:
        ab[1, 0] = 1.0 + 2.0 * dt / dx**2
        ab[0, 1] = -2.0 * dt / dx**2
    else:
        ab[1, 0] = 1.0
        ab[0, 1] = 0.0
        rhs[0] = value
    w_new = solve_banded((1, 1), ab, rhs, overwrite_b=True, check_finite=False)
    w_new[N] = 0.0
    if value is not None:
        w_new[0] = value
    hd_new = mu * (4.0 * w_new[N - 1] - w_new[N - 2]) / (2.0 * dx)
    h_new = h + 0.5 * dt * (hd + hd_new)
    return w_new, h_new, hd_new


def solve_one_front(spec: NonlinearitySpec, init: FrontFixedState, dt: float, T_end: float,
                    left_bc=NEUMANN_ZERO, snapshot_times=(), record_every: int = 1,
                    monitors=None) -> Trajectory:
    """Advance the one-front problem from ``init.t`` to ``T_end``.

    ``left_bc`` is ``"neumann_zero"`` or ``("dirichlet", source)`` with
    ``source(t, x_left)`` (or a constant) giving the value at xi = -L.
    ``monitors`` maps channel names to callables of the current state; they
    are recorded together with (t, h, h') every ``record_every`` steps.
    Snapshots are stored at the steps nearest to ``snapshot_times``.
    """
    xi = init.xi
    dx = float(xi[1] - xi[0])
    mu = init.mu
    w = init.w.astype(float).copy()
    w[-1] = 0.0
    _check(w, spec.u_cap)
    t0 = float(init.t)
    n_steps = int(round((T_end - t0) / dt))
    k_sub = _substeps(dt, spec.lipschitz)
    dts = dt / k_sub
    snap_steps = {int(round((ts - t0) / dt)) for ts in snapshot_times if t0 <= ts <= T_end + 1e-12}
    monitors = dict(monitors or {})

    h = float(init.h)
    hd = mu * (4.0 * w[-2] - w[-3]) / (2.0 * dx)
    ab = np.zeros((3, w.size))
    ts_, hs, hds = [], [], []
    chans = {name: [] for name in monitors}
    snaps = []

    def record(n, t):
        state = FrontFixedState(t, xi, w, h, hd, mu)
        if n % record_every == 0 or n == n_steps:
            ts_.append(t)
            hs.append(h)
            hds.append(hd)
            for name, fn in monitors.items():
                chans[name].append(fn(state))
        if n in snap_steps:
            snaps.append(state.copy())

    record(0, t0)
    for n in range(1, n_steps + 1):
        t = t0 + (n - 1) * dt
        for j in range(k_sub):
            w, h, hd = _step_one_front(spec, w, xi, dx, t + j * dts, h, hd, dts, mu, left_bc, ab)
            _check(w, spec.u_cap)
        record(n, t0 + n * dt)

    meta = {"N": int(w.size - 1), "L": float(-xi[0]), "dt": float(dt), "substeps": k_sub,
            "mu": mu, "left_bc": _bc_label(left_bc), "kind": spec.kind}
    return Trajectory(np.array(ts_), np.array(hs), np.array(hds), snaps,
                      {k: np.array(v) for k, v in chans.items()}, meta)


def _bc_label(left_bc):
    if left_bc == NEUMANN_ZERO or left_bc is None:
        return NEUMANN_ZERO
    return DIRICHLET


def make_two_front_initial(values_fn, g0: float, N: int, mu: float = 1.0,
                           t: float = 0.0, center: float = 0.0) -> TwoFrontState:
    """Interval state on [center - g0, center + g0] with v = values_fn(x), zero at the ends."""
    N = int(N)
    # exactly antisymmetric nodes, so symmetric data stays symmetric
    y = (2.0 * np.arange(N + 1) - N) / N
    x = center + g0 * y
    v = np.asarray(values_fn(x), dtype=float).copy()
    if v.shape != y.shape or np.any(v < 0):
        raise ShapeMismatch("two-front initial values must be nonnegative on the grid")
    v[0] = v[-1] = 0.0
    state = TwoFrontState(float(t), y, v, center - g0, center + g0, float(mu))
    state.gm_dot, state.gp_dot = _two_front_speeds(v, y[1] - y[0], g0, mu)
    return state


def _two_front_speeds(v, dy, half, mu):
    vy_right = (4.0 * v[-2] - v[-3]) / (2.0 * dy)   # = -v_y(1)
    vy_left = (-4.0 * v[1] + v[2]) / (2.0 * dy)     # = -v_y(-1)
    return mu * vy_left / half, mu * vy_right / half


def _mirror_averaged_solve(ab, rhs):
    """Average of the tridiagonal solve and the solve of its mirror image.

    Elimination always sweeps in one direction, which leaves a one-sided
    rounding bias; averaging with the reflected system removes it, so a
    mirror-symmetric system yields an exactly symmetric solution.
    """
    direct = solve_banded((1, 1), ab, rhs, check_finite=False)
    flipped = np.empty_like(ab)
    flipped[0, 1:] = ab[2, :-1][::-1]
    flipped[0, 0] = 0.0
    flipped[1] = ab[1, ::-1]
    flipped[2, :-1] = ab[0, 1:][::-1]
    flipped[2, -1] = 0.0
    mirrored = solve_banded((1, 1), flipped, rhs[::-1].copy(), check_finite=False)[::-1]
    return 0.5 * (direct + mirrored)


def solve_two_front(spec: NonlinearitySpec, init: TwoFrontState, dt: float, T_end: float,
                    snapshot_times=(), record_every: int = 1, monitors=None,
                    mirror_solve: bool = True, min_width: float | None = None) -> Trajectory:
    """Advance the interval problem on the Landau grid.

    ``min_width`` (default: ten cells of the initial physical grid) is the
    interval length below which FrontCollision is raised.  The returned trajectory carries g+ as ``h`` and g- in the channels
    ``g_minus`` / ``g_minus_dot``.
    """
    y = init.y
    dy = float(y[1] - y[0])
    N = y.size - 1
    mu = init.mu
    v = init.v.astype(float).copy()
    gm, gp = float(init.g_minus), float(init.g_plus)
    gm_dot, gp_dot = _two_front_speeds(v, dy, 0.5 * (gp - gm), mu)
    t0 = float(init.t)
    n_steps = int(round((T_end - t0) / dt))
    k_sub = _substeps(dt, spec.lipschitz)
    dts = dt / k_sub
    snap_steps = {int(round((ts - t0) / dt)) for ts in snapshot_times if t0 <= ts <= T_end + 1e-12}
    monitors = dict(monitors or {})
    ab = np.zeros((3, N + 1))
    yi = y[1:N]
    if min_width is None:
        min_width = 10.0 * 0.5 * (gp - gm) * dy

    ts_, gps, gpds, gms, gmds = [], [], [], [], []
    chans = {name: [] for name in monitors}
    snaps = []

    def record(n, t):
        state = TwoFrontState(t, y, v, gm, gp, mu, gm_dot, gp_dot)
        if n % record_every == 0 or n == n_steps:
            ts_.append(t)
            gps.append(gp)
            gpds.append(gp_dot)
            gms.append(gm)
            gmds.append(gm_dot)
            for name, fn in monitors.items():
                chans[name].append(fn(state))
        if n in snap_steps:
            snaps.append(state.copy())

    _check(v, spec.u_cap)
    record(0, t0)
    for n in range(1, n_steps + 1):
        t_out = t0 + (n - 1) * dt
        for j in range(k_sub):
            t = t_out + j * dts
            half = 0.5 * (gp - gm)
            mid = 0.5 * (gp + gm)
            if gp - gm < min_width:
                raise FrontCollision(f"interval length {gp - gm:.3e} below {min_width:.3e}")
            m_dot = 0.5 * (gp_dot + gm_dot)
            l_dot = 0.5 * (gp_dot - gm_dot)
            rhs = spec.flow(t, dts, mid + half * y, v)
            speed = (m_dot + l_dot * yi) / half
            lower, upper = _advection_coeffs(speed, 1.0 / half**2, dy)
            ab[0, 2:] = -dts * upper
            ab[1, 1:N] = 1.0 + dts * (lower + upper)
            ab[2, :N - 1] = -dts * lower
            ab[1, 0] = ab[1, N] = 1.0
            ab[0, 1] = 0.0
            ab[2, N - 1] = 0.0
            rhs[0] = rhs[N] = 0.0
            if mirror_solve:
                v = _mirror_averaged_solve(ab, rhs)
            else:
                v = solve_banded((1, 1), ab, rhs, check_finite=False)
            v[0] = v[N] = 0.0
            _check(v, spec.u_cap)
            gm_new, gp_new = _two_front_speeds(v, dy, half, mu)
            gm = gm + 0.5 * dts * (gm_dot + gm_new)
            gp = gp + 0.5 * dts * (gp_dot + gp_new)
            gm_dot, gp_dot = gm_new, gp_new
        record(n, t0 + n * dt)

    chans["g_minus"] = np.array(gms)
    chans["g_minus_dot"] = np.array(gmds)
    meta = {"N": N, "dt": float(dt), "substeps": k_sub, "mu": mu, "kind": spec.kind,
            "problem": "two_front"}
    out = Trajectory(np.array(ts_), np.array(gps), np.array(gpds), snaps,
                     {k: (np.array(vv) if not isinstance(vv, np.ndarray) else vv)
                      for k, vv in chans.items()}, meta)
    return out
