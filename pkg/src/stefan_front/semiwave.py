"""Semi-wave speed and profile by phase-plane shooting.

A semi-wave is a pair (c, q) with

    q'' - c q' + f(q) = 0 on (0, inf),   q(0) = 0,  q(inf) = 1,  q'(0) = c / mu.

Writing p = q' as a function of q turns this into the scalar problem
dP/dq = c - f(q) / P.  The trajectory entering the saddle (1, 0) is
integrated backward in q from a point on its linearized direction, and the
intercept P_c(0) is compared with the free boundary slope c / mu.  The
residual R(c) = P_c(0) - c / mu changes sign exactly once, and bisection
on c finds the semi-wave speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import OdeSolution, solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import DegenerateCurve, HypothesisViolation, NonMonotoneScan, NoSemiWave
from .nonlinearity import HomogeneousF

EPS0 = 1e-6
AXIS_TOL = 1e-10
AXIS_Q_MIN = 1e-6
RTOL = 1e-10
ATOL = 1e-24
PROFILE_TAIL_TOL = 1e-10

REACHED_Q0 = "reached_q0"
AXIS_CONTACT = "axis_contact"


@dataclass(frozen=True)
class AxisContact:
    """Shooting outcome when the phase curve hits P = 0 at q0 > 0.

    Compares below every finite residual, so bisection treats it as the
    R < 0 side.
    """

    q0: float

    def __lt__(self, other):
        return not isinstance(other, AxisContact)

    def __gt__(self, other):
        return False


@dataclass(frozen=True)
class PhaseCurve:
    """Backward-integrated phase curve P_c(q) of the semi-wave ODE.

    ``q`` and ``P`` are the accepted integrator steps, ordered strictly
    decreasing in q.  ``dense`` evaluates P on the integrated q-range.
    """

    f: HomogeneousF
    c: float
    q: np.ndarray
    P: np.ndarray
    terminal: str
    q_contact: float | None
    slope1: float
    eps0: float
    dense: object = field(repr=False)

    @property
    def P0(self):
        """Intercept P_c(0) (only meaningful when the curve reached q = 0)."""
        return float(self.P[-1])

    def __call__(self, q):
        """P at q; linear saddle asymptotics above the starting point 1 - eps0."""
        q = np.asarray(q, dtype=float)
        q_start = 1.0 - self.eps0
        inside = np.clip(q, self.q[-1], q_start)
        energy = np.asarray(self.dense(inside))
        if energy.ndim > inside.ndim:
            energy = energy[0]
        vals = np.sqrt(2.0 * np.maximum(energy, 0.0))
        tail = -self.slope1 * (1.0 - q)
        return np.where(q > q_start, np.maximum(tail, 0.0), vals)[()]

    def ode_residual(self, h=1e-6):
        """max |P P' - c P + f(q)| over the samples.

        P P' = dE/dq with E = P^2/2 is taken from the dense interpolant,
        one-sided inside the step that ends at each sample so the stencil
        never straddles a step boundary or a kink of f.
        """
        qs = self.q[1:]
        h = np.minimum(h, 0.25 * (self.q[:-1] - self.q[1:]))
        E = lambda x: self.dense(x)[0]
        dE = (-3 * E(qs) + 4 * E(qs + h) - E(qs + 2 * h)) / (2 * h)
        P = self.P[1:]
        return float(np.max(np.abs(dE - self.c * P + self.f.f(qs))))


def saddle_slope(fp1: float, c: float) -> float:
    """Slope (c - sqrt(c^2 - 4 f'(1))) / 2 of the stable direction at (1, 0)."""
    return 0.5 * (c - math.sqrt(c * c - 4.0 * fp1))


def phase_trajectory(f: HomogeneousF, c: float, eps0: float = EPS0, rtol: float = RTOL,
                     atol: float = ATOL, axis_tol: float = AXIS_TOL) -> PhaseCurve:
    """Integrate dP/dq = c - f(q)/P from q = 1 - eps0 down to q = 0 or to P = 0."""
    if c < 0:
        raise ValueError("speed must be nonnegative")
    fp1 = float(f.df(1.0))
    if not fp1 < 0.0:
        raise HypothesisViolation(f"f'(1) must be negative, got {fp1}")
    lam = saddle_slope(fp1, c)
    q_start = 1.0 - eps0
    P_start = -lam * eps0

    # E = P^2 / 2 obeys dE/dq = c P - f(q), which stays smooth where P -> 0
    def rhs(q, y):
        return [c * math.sqrt(2.0 * max(y[0], 0.0)) - f.f(q)]

    def hit_axis(q, y):
        return y[0] - 0.5 * axis_tol**2

    hit_axis.terminal = True
    hit_axis.direction = -1

    stops = sorted((k for k in f.kinks if 0.0 < k < q_start), reverse=True) + [0.0]
    y0, q0 = 0.5 * P_start**2, q_start
    ts, pieces, qs, Es = [q_start], [], [np.array([q_start])], [np.array([y0])]
    status = 0
    for stop in stops:
        sol = solve_ivp(rhs, (q0, stop), [y0], method="DOP853", rtol=rtol, atol=atol,
                        dense_output=True, events=hit_axis)
        if sol.status < 0:
            raise RuntimeError(f"phase integration failed: {sol.message}")
        ts.extend(sol.sol.ts[1:])
        pieces.extend(sol.sol.interpolants)
        qs.append(sol.t[1:])
        Es.append(sol.y[0, 1:])
        status = sol.status
        if status == 1:
            break
        q0, y0 = stop, float(sol.y[0, -1])
    dense = OdeSolution(ts, pieces)
    q = np.concatenate(qs)
    P = np.sqrt(2.0 * np.maximum(np.concatenate(Es), 0.0))
    if status == 1 and q[-1] > AXIS_Q_MIN:
        return PhaseCurve(f, float(c), q, P, AXIS_CONTACT, float(q[-1]), lam, eps0, dense)
    return PhaseCurve(f, float(c), q, P, REACHED_Q0, None, lam, eps0, dense)


def shoot_residual(f: HomogeneousF, c: float, mu: float, **kw):
    """R(c) = P_c(0) - c/mu, or :class:`AxisContact` if the curve hits P = 0 first."""
    curve = phase_trajectory(f, c, **kw)
    if curve.terminal == AXIS_CONTACT:
        return AxisContact(curve.q_contact)
    return curve.P0 - c / mu


def _sign(r):
    if isinstance(r, AxisContact):
        return -1
    return 1 if r > 0 else (-1 if r < 0 else 0)


def residual_scan(f: HomogeneousF, mu: float, c_values, **kw):
    """Residuals on a list of speeds and the indices where the sign changes."""
    res = [shoot_residual(f, float(c), mu, **kw) for c in c_values]
    signs = [_sign(r) for r in res]
    changes = [i for i in range(len(signs) - 1) if signs[i] > 0 >= signs[i + 1]
               or signs[i] <= 0 < signs[i + 1]]
    return res, changes


@dataclass(frozen=True)
class SemiWaveProfile:
    """Semi-wave speed with the profile q(z) sampled on a uniform z-grid."""

    c_star: float
    mu: float
    z: np.ndarray
    q: np.ndarray
    slope0: float
    tail_rate: float
    residual: float
    f: HomogeneousF | None = field(default=None, repr=False, compare=False)
    _spline: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._spline is None:
            object.__setattr__(self, "_spline", CubicSpline(self.z, self.q))

    @property
    def z_max(self):
        return float(self.z[-1])

    def __call__(self, z):
        """q(z), extended by 0 for z <= 0 and saddle asymptotics beyond z_max."""
        z = np.asarray(z, dtype=float)
        inside = np.clip(z, 0.0, self.z_max)
        vals = self._spline(inside)
        gap = 1.0 - self.q[-1]
        tail = 1.0 - gap * np.exp(self.tail_rate * np.maximum(z - self.z_max, 0.0))
        out = np.where(z > self.z_max, tail, vals)
        return np.where(z <= 0.0, 0.0, out)[()]

    def inverse(self, level):
        """Smallest z with q(z) = level."""
        if not 0.0 < level < self.q[-1]:
            raise ValueError(f"level {level} not attained on the sampled profile")
        k = int(np.argmax(self.q >= level))
        return brentq(lambda s: float(self(s)) - level, self.z[k - 1], self.z[k], xtol=1e-14)

    def ode_residual(self, lo_frac=0.1, hi_frac=0.9):
        """sup |q'' - c q' + f(q)| on the central part of the grid, by differences."""
        f = self.f
        dz = self.z[1] - self.z[0]
        q = self.q
        # fourth-order central stencils
        d1 = (-q[4:] + 8 * q[3:-1] - 8 * q[1:-3] + q[:-4]) / (12 * dz)
        d2 = (-q[4:] + 16 * q[3:-1] - 30 * q[2:-2] + 16 * q[1:-3] - q[:-4]) / (12 * dz**2)
        r = d2 - self.c_star * d1 + f.f(q[2:-2])
        zi = self.z[2:-2]
        mask = (zi >= lo_frac * self.z_max) & (zi <= hi_frac * self.z_max)
        return float(np.max(np.abs(r[mask])))


def profile_from_trajectory(curve: PhaseCurve, z_max: float | None = None, dz: float = 0.01,
                            mu: float | None = None,
                            tail_tol: float = PROFILE_TAIL_TOL) -> SemiWaveProfile:
    """Solve dq/dz = P(q), q(0) = 0, and sample q on a uniform z-grid.

    Without ``z_max`` the grid ends at the first node where 1 - q drops
    below ``tail_tol``; beyond the grid the profile follows the saddle
    asymptotics, which keeps the samples strictly increasing in floating
    point.
    """
    if curve.terminal != REACHED_Q0:
        raise DegenerateCurve("phase curve ended on the axis before q = 0")
    if curve.P0 <= AXIS_TOL:
        raise DegenerateCurve(f"P(0) = {curve.P0:g} is too small")

    def rhs(s, y):
        return [float(curve(y[0]))]

    if z_max is None:
        def near_one(s, y):
            return 1.0 - y[0] - tail_tol

        near_one.terminal = True
        horizon = 10.0 * math.log(1.0 / tail_tol) / max(-curve.slope1, 1e-3) + 10.0
        probe = solve_ivp(rhs, (0.0, horizon), [0.0], method="DOP853", rtol=1e-12, atol=1e-14,
                          events=near_one)
        z_max = math.ceil(probe.t[-1] / dz) * dz
    n = int(round(z_max / dz)) + 1
    z = np.linspace(0.0, z_max, n)
    sol = solve_ivp(rhs, (0.0, z_max), [0.0], method="DOP853", rtol=1e-12, atol=1e-14, t_eval=z)
    q = sol.y[0]
    q[0] = 0.0
    if mu is None:
        mu = curve.c / curve.P0
    return SemiWaveProfile(curve.c, float(mu), z, q, curve.P0, curve.slope1,
                           curve.P0 - curve.c / mu, f=curve.f)


def find_cstar(f: HomogeneousF, mu: float, tol_c: float = 1e-11, scan_n: int = 64,
               z_max: float | None = None, dz: float = 0.01, **kw) -> SemiWaveProfile:
    """Unique semi-wave speed c* for (f, mu) by bracketing and bisection on R(c)."""
    if not mu > 0:
        raise ValueError("mu must be positive")
    us = np.linspace(0.0, 1.0, 1001)
    c_cap = 64.0 * math.sqrt(max(float(np.max(f.df(us))), 1e-12))
    r0 = shoot_residual(f, 0.0, mu, **kw)
    if _sign(r0) <= 0:
        raise NoSemiWave("R(0) <= 0: the phase curve does not cross the velocity axis above 0",
                         c_cap=c_cap, last_residual=r0)
    c_hi = 1.0
    r_hi = shoot_residual(f, c_hi, mu, **kw)
    while _sign(r_hi) > 0:
        c_hi *= 2.0
        if c_hi > c_cap:
            raise NoSemiWave(f"no sign change of R(c) for c <= {c_cap:g}", c_cap=c_cap,
                             last_residual=r_hi)
        r_hi = shoot_residual(f, c_hi, mu, **kw)

    cs = np.linspace(0.0, c_hi, scan_n)
    res, changes = residual_scan(f, mu, cs, **kw)
    if len(changes) > 1:
        raise NonMonotoneScan(f"{len(changes)} sign changes of R(c) on [0, {c_hi:g}]")
    if not changes:
        raise NoSemiWave("scan found no sign change", c_cap=c_cap, last_residual=res[-1])
    k = changes[0]
    lo, hi = float(cs[k]), float(cs[k + 1])
    if _sign(res[k]) == 0:
        hi = lo
    while hi - lo > tol_c:
        mid = 0.5 * (lo + hi)
        s = _sign(shoot_residual(f, mid, mu, **kw))
        if s == 0:
            lo = hi = mid
        elif s > 0:
            lo = mid
        else:
            hi = mid
    c_star = 0.5 * (lo + hi)
    curve = phase_trajectory(f, c_star, **kw)
    return profile_from_trajectory(curve, z_max=z_max, dz=dz, mu=mu)
