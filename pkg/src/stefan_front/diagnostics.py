"""Verdicts computed from completed trajectories.

Speed estimates, drift against a reference speed, distances to a
semi-wave profile, level-set widths, the part metric between ordered
front-fixed fields, ordering checks between two runs and the weighted
energy E(t) used in the convergence argument.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateSlope, LevelNotAttained, NotOrdered, WindowTooShort
from .fbsolver import FrontFixedState, TwoFrontState, one_sided_slope


@dataclass
class SpeedReport:
    """Pairwise quotients (h(t) - h(s)) / (t - s) over well separated times.

    ``samples`` has columns (t, s, quotient).  A small ``spread`` is the
    numerical signature of a global mean speed.
    """

    samples: np.ndarray
    spread: float
    mean_estimate: float
    delta_min: float

    def to_json(self):
        return {"spread": self.spread, "mean_estimate": self.mean_estimate,
                "delta_min": self.delta_min, "n_samples": int(len(self.samples)),
                "min": float(self.samples[:, 2].min()), "max": float(self.samples[:, 2].max())}


@dataclass
class DriftReport:
    c_ref: float
    G_hat: float
    sup_drift: float
    tail_drift: float

    def to_json(self):
        return asdict(self)


@dataclass
class OrderingReport:
    passed: bool
    margin: float
    n_checked: int
    first_violation: dict | None = None
    details: dict = field(default_factory=dict)

    def to_json(self):
        return asdict(self)


def _subsample(t, h, max_samples):
    if len(t) <= max_samples:
        return t, h
    idx = np.unique(np.linspace(0, len(t) - 1, max_samples).round().astype(int))
    return t[idx], h[idx]


def estimate_global_mean_speed(traj, delta_min: float | None = None,
                               max_samples: int = 400) -> SpeedReport:
    """All quotients over pairs |t - s| >= delta_min (default: a quarter of the window)."""
    t = np.asarray(traj.t, dtype=float)
    h = np.asarray(traj.h, dtype=float)
    span = float(t[-1] - t[0])
    if delta_min is None:
        delta_min = 0.25 * span
    if span < 2.0 * delta_min or delta_min <= 0:
        raise WindowTooShort(f"window {span:g} shorter than 2 * delta_min = {2 * delta_min:g}")
    ts, hs = _subsample(t, h, max_samples)
    i, j = np.triu_indices(len(ts), k=1)
    gap = ts[j] - ts[i]
    keep = gap >= delta_min * (1 - 1e-12)
    i, j, gap = i[keep], j[keep], gap[keep]
    quot = (hs[j] - hs[i]) / gap
    samples = np.column_stack([ts[j], ts[i], quot])
    return SpeedReport(samples, float(quot.max() - quot.min()), float(quot.mean()),
                       float(delta_min))


def drift(traj, c_ref: float, tail_fraction: float = 0.25) -> DriftReport:
    """Offset G = mean of h - c_ref t over the tail and the deviations from it."""
    t = np.asarray(traj.t, dtype=float)
    d = np.asarray(traj.h, dtype=float) - c_ref * t
    tail = t >= t[-1] - tail_fraction * (t[-1] - t[0])
    G = float(d[tail].mean())
    return DriftReport(float(c_ref), G, float(np.max(np.abs(d - G))),
                       float(np.max(np.abs(d[tail] - G))))


def profile_distance(state: FrontFixedState, prof) -> float:
    """sup over nodes of |w(xi) - q(-xi)|."""
    return float(np.max(np.abs(state.w - prof(-state.xi))))


def part_metric(w1, w2, slope_at_0=None, dx: float | None = None,
                order_tol: float = 1e-12) -> float:
    """ln of the least alpha >= 1 with w2 <= alpha w1, for w1 <= w2.

    Both fields live on a front-fixed grid whose last node is the front,
    where both vanish; there the nodal ratio is replaced by the ratio of
    the one-sided slopes (given as ``slope_at_0`` or computed with ``dx``).
    """
    w1 = np.asarray(w1, dtype=float)
    w2 = np.asarray(w2, dtype=float)
    if np.any(w1 > w2 + order_tol):
        k = int(np.argmax(w1 - w2))
        raise NotOrdered(f"w1 exceeds w2 by {w1[k] - w2[k]:.3e} at node {k}")
    if slope_at_0 is None:
        if dx is None:
            raise ValueError("pass slope_at_0 or dx")
        slope_at_0 = (one_sided_slope(w1, dx), one_sided_slope(w2, dx))
    s1, s2 = slope_at_0
    if not (s1 < 0 and s2 < 0):
        raise DegenerateSlope(f"one-sided slopes at the front must be negative, got {s1}, {s2}")
    a, b = w1[:-1], w2[:-1]
    if np.any(a <= 0):
        raise NotOrdered("w1 must be positive away from the front")
    ratio = max(float(np.max(b / a)), s2 / s1, 1.0)
    return float(np.log(ratio))


def _crossing(w, xi, level):
    above = np.nonzero(w >= level)[0]
    if above.size == 0:
        return None
    k = int(above[-1])  # last node at or above the level, nearest the front
    if k == len(w) - 1:
        return float(xi[k])
    w0, w1 = w[k], w[k + 1]
    s = (w0 - level) / (w0 - w1)
    return float(xi[k] + s * (xi[k + 1] - xi[k]))


def level_set_widths(traj, level: float) -> np.ndarray:
    """Distance from the front to the level crossing nearest it, per snapshot."""
    out = []
    for snap in traj.snapshots:
        xi_c = _crossing(snap.w, snap.xi, level)
        if xi_c is None:
            raise LevelNotAttained(f"level {level} not attained at t = {snap.t:g}")
        out.append(-xi_c)
    return np.array(out)


def level_set_width(traj, level: float) -> float:
    """sup over snapshots of the front-to-level distance."""
    if not traj.snapshots:
        raise LevelNotAttained("trajectory has no snapshots")
    return float(level_set_widths(traj, level).max())


def physical_field(state, x):
    """u(t, x) from a snapshot, zero outside the occupied interval, NaN beyond the grid."""
    x = np.asarray(x, dtype=float)
    if isinstance(state, TwoFrontState):
        xs, vals = state.x, state.v
        out = np.interp(x, xs, vals)
        out = np.where((x < state.g_minus) | (x > state.g_plus), 0.0, out)
        return out
    xs = state.x
    out = np.interp(x, xs, state.w)
    out = np.where(x > state.h, 0.0, out)
    return np.where(x < xs[0], np.nan, out)


def _fronts(state):
    if isinstance(state, TwoFrontState):
        return state.g_minus, state.g_plus
    return None, state.h


def verify_ordering(trajA, trajB, tol: float = 1e-8) -> OrderingReport:
    """Check u_A <= u_B and the front ordering at every shared output time.

    Fields are compared in physical coordinates x = xi + h: each node of
    run A is looked up in run B by linear interpolation.  Nodes of A
    outside the computational window of B are skipped.  For one-front runs
    the fronts must satisfy h_A <= h_B; for interval runs
    g-_B <= g-_A and g+_A <= g+_B.
    """
    margin = np.inf
    n_checked = 0
    first = None
    details = {"front_margin": np.inf, "field_margin": np.inf}

    tA, tB = np.asarray(trajA.t), np.asarray(trajB.t)
    if len(tA) != len(tB) or np.max(np.abs(tA - tB)) > 1e-9:
        raise ValueError("trajectories must share output times")
    gap = np.asarray(trajB.h) - np.asarray(trajA.h)
    if "g_minus" in trajA.channels and "g_minus" in trajB.channels:
        gap = np.minimum(gap, np.asarray(trajA.channels["g_minus"]) - trajB.channels["g_minus"])
    details["front_margin"] = float(gap.min())
    margin = min(margin, float(gap.min()))
    bad = np.nonzero(gap < -tol)[0]
    if bad.size:
        k = int(bad[0])
        first = {"t": float(tA[k]), "kind": "front", "amount": float(-gap[k])}

    for sa, sb in zip(trajA.snapshots, trajB.snapshots):
        if abs(sa.t - sb.t) > 1e-9:
            raise ValueError("snapshots must share output times")
        vals = sa.v if isinstance(sa, TwoFrontState) else sa.w
        uB = physical_field(sb, sa.x)
        ok = np.isfinite(uB)
        diff = uB[ok] - vals[ok]
        n_checked += int(ok.sum())
        if diff.size:
            m = float(diff.min())
            details["field_margin"] = min(details["field_margin"], m)
            margin = min(margin, m)
            if m < -tol and (first is None or sa.t < first["t"]):
                first = {"t": float(sa.t), "kind": "field", "amount": -m}
    return OrderingReport(first is None, float(margin), n_checked, first, details)


def energy_functional(state: FrontFixedState, c_star: float, F) -> float:
    """E = int e^{c z} (w_z^2 / 2 - F(w)) dz in the frame moving at c_star.

    With z = xi + h - c_star t the integral runs over the computational
    window, truncated at xi = -L where the weight is exponentially small.
    """
    w = state.w
    dx = state.dx
    wx = np.gradient(w, dx, edge_order=2)
    z = state.xi + state.h - c_star * state.t
    integrand = np.exp(c_star * z) * (0.5 * wx**2 - F(w))
    return float(np.trapezoid(integrand, state.xi))


def shift_tail_mean(traj, lo: float):
    """Mean of h' over t >= lo."""
    m = np.asarray(traj.t) >= lo
    return float(np.mean(np.asarray(traj.h_dot)[m]))


def field_at_front_position(traj, tau: float) -> np.ndarray:
    """Front-fixed field at the moment the front passes ``tau``.

    Interpolates linearly in h between the two snapshots bracketing tau.
    """
    hs = np.array([s.h for s in traj.snapshots])
    if hs.size < 2 or not (hs[0] <= tau <= hs[-1]):
        raise LevelNotAttained(f"front position {tau:g} not covered by the snapshots")
    k = int(np.searchsorted(hs, tau))
    k = min(max(k, 1), hs.size - 1)
    s0, s1 = traj.snapshots[k - 1], traj.snapshots[k]
    span = hs[k] - hs[k - 1]
    theta = 0.0 if span <= 0 else (tau - hs[k - 1]) / span
    return (1.0 - theta) * s0.w + theta * s1.w


def front_matched_difference(trajA, trajB, tau: float | None = None) -> dict:
    """sup |w_A - w_B| with both fields taken when their front sits at ``tau``.

    For spatially heterogeneous media the attracting wave is indexed by the
    front position, so this is the natural merge distance.  The default
    tau is the smaller of the two final front positions.
    """
    if tau is None:
        tau = min(trajA.snapshots[-1].h, trajB.snapshots[-1].h)
    wa = field_at_front_position(trajA, tau)
    wb = field_at_front_position(trajB, tau)
    return {"tau": float(tau), "sup_diff": float(np.max(np.abs(wa - wb)))}
