"""Reaction terms f(t, x, u) for the free boundary problem.

Three families are supported:

* homogeneous f(u) satisfying f(0)=f(1)=0, f'(1)<0 and f<0 above 1,
  shipped as named built-ins (``logistic``, ``bistable(theta)``,
  ``combustion(theta)``) or as polynomial coefficient lists;
* KPP terms u(c(t) - u) or u(a(x) - u) with a quasi-periodic coefficient;
* a two-phase term that switches smoothly in time from f1 to f2.

All reaction terms are wrapped in an immutable :class:`NonlinearitySpec`
whose evaluation clamps ``u`` into ``[0, u_cap]``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .errors import BadWindow, HypothesisViolation, MeanConditionViolation

HOMOGENEOUS = "homogeneous"
KPP_TIME_AP = "kpp_time_ap"
KPP_SPACE_AP = "kpp_space_ap"
TWO_PHASE_TIME = "two_phase_time"
KINDS = (HOMOGENEOUS, KPP_TIME_AP, KPP_SPACE_AP, TWO_PHASE_TIME)

SIGN_TOL = 1e-12


@dataclass(frozen=True)
class HomogeneousF:
    """A reaction term f(u) with derivative and antiderivative F(s) = int_0^s f.

    All three callables accept scalars or arrays.  ``name`` is the
    serialization label (``"logistic"``, ``"bistable(0.25)"``, ...); for
    polynomial terms it is ``None`` and ``coeffs`` holds the ascending
    coefficients.  ``kinks`` lists points in (0, 1) where f' jumps.
    """

    f: Callable
    df: Callable
    F: Callable
    name: str | None = None
    coeffs: tuple | None = None
    kinks: tuple = ()

    def __call__(self, u):
        return self.f(u)

    def to_json(self):
        if self.name is not None:
            return self.name
        return {"poly": list(self.coeffs)}


def logistic(rate: float = 1.0) -> HomogeneousF:
    """f(u) = rate * u * (1 - u)."""
    r = float(rate)
    name = "logistic" if r == 1.0 else f"logistic({r!r})"
    return HomogeneousF(
        f=lambda u: r * u * (1.0 - u),
        df=lambda u: r * (1.0 - 2.0 * u),
        F=lambda s: r * (s**2 / 2.0 - s**3 / 3.0),
        name=name,
    )


def bistable(theta: float = 0.25) -> HomogeneousF:
    """f(u) = u (1 - u) (u - theta) with 0 < theta < 1/2."""
    th = float(theta)
    return HomogeneousF(
        f=lambda u: u * (1.0 - u) * (u - th),
        df=lambda u: -3.0 * u**2 + 2.0 * (1.0 + th) * u - th,
        F=lambda s: -(s**4) / 4.0 + (1.0 + th) * s**3 / 3.0 - th * s**2 / 2.0,
        name=f"bistable({th!r})",
    )


def combustion(theta: float = 0.3) -> HomogeneousF:
    """f(u) = 0 on [0, theta] and (u - theta)(1 - u) above theta."""
    th = float(theta)

    def G(s):
        return -(s**3) / 3.0 + (1.0 + th) * s**2 / 2.0 - th * s

    G_th = G(th)

    def f(u):
        u = np.asarray(u, dtype=float)
        return np.where(u > th, (u - th) * (1.0 - u), 0.0)[()]

    def df(u):
        u = np.asarray(u, dtype=float)
        return np.where(u > th, 1.0 + th - 2.0 * u, 0.0)[()]

    def F(s):
        s = np.asarray(s, dtype=float)
        return np.where(s > th, G(s) - G_th, 0.0)[()]

    return HomogeneousF(f=f, df=df, F=F, name=f"combustion({th!r})", kinks=(th,))


def polynomial(coeffs: Sequence[float]) -> HomogeneousF:
    """Polynomial f with ascending coefficients, e.g. ``[0, 1, -1]`` for u(1-u)."""
    p = Polynomial([float(c) for c in coeffs])
    dp = p.deriv()
    ip = p.integ(lbnd=0.0)
    return HomogeneousF(f=p, df=dp, F=ip, coeffs=tuple(float(c) for c in coeffs))


_NAMED = {"logistic": logistic, "bistable": bistable, "combustion": combustion}
_NAME_RE = re.compile(r"^\s*([a-z_]+)\s*(?:\(\s*([^)]*)\s*\))?\s*$")


def homogeneous_from_json(obj) -> HomogeneousF:
    """Parse ``"logistic"``, ``"bistable(0.25)"``, ``{"poly": [...]}``."""
    if isinstance(obj, dict):
        if "poly" not in obj:
            raise ValueError(f"unrecognized reaction term {obj!r}")
        return polynomial(obj["poly"])
    if isinstance(obj, (list, tuple)):
        return polynomial(obj)
    m = _NAME_RE.match(str(obj))
    if m is None or m.group(1) not in _NAMED:
        raise ValueError(f"unrecognized reaction term {obj!r}")
    args = [float(a) for a in m.group(2).split(",")] if m.group(2) else []
    return _NAMED[m.group(1)](*args)


@dataclass(frozen=True)
class QuasiPeriodicSignal:
    """mean + sum_i a_i cos(omega_i t + phi_i)."""

    mean: float
    modes: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "modes", tuple((float(a), float(w), float(p)) for a, w, p in self.modes)
        )
        for _, w, _ in self.modes:
            if not w > 0:
                raise ValueError("mode frequencies must be positive")

    @classmethod
    def standard(cls, mean=1.0, amplitude=0.3, frequencies=(1.0, math.sqrt(2.0))):
        """Two incommensurate cosines, the default almost periodic coefficient."""
        return cls(mean, tuple((amplitude, w, 0.0) for w in frequencies))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, float(self.mean))
        for a, w, p in self.modes:
            out = out + a * np.cos(w * t + p)
        return out[()]

    def integral(self, t0, t1):
        """Exact int_{t0}^{t1} of the signal."""
        t0 = np.asarray(t0, dtype=float)
        t1 = np.asarray(t1, dtype=float)
        out = self.mean * (t1 - t0)
        for a, w, p in self.modes:
            out = out + (a / w) * (np.sin(w * t1 + p) - np.sin(w * t0 + p))
        return out[()] if isinstance(out, np.ndarray) else out

    @property
    def lower_bound(self):
        return self.mean - sum(abs(a) for a, _, _ in self.modes)

    @property
    def upper_bound(self):
        return self.mean + sum(abs(a) for a, _, _ in self.modes)

    def to_json(self):
        return {"mean": self.mean, "modes": [list(m) for m in self.modes]}

    @classmethod
    def from_json(cls, obj):
        return cls(float(obj["mean"]), tuple(tuple(m) for m in obj.get("modes", ())))


@dataclass(frozen=True)
class TwoPhaseF:
    """f1 for t <= t1, f2 for t >= t2, cosine blend in between."""

    f1: HomogeneousF
    f2: HomogeneousF
    t1: float
    t2: float

    def blend(self, t):
        if t <= self.t1:
            return 0.0
        if t >= self.t2:
            return 1.0
        return 0.5 * (1.0 - math.cos(math.pi * (t - self.t1) / (self.t2 - self.t1)))

    def __call__(self, t, u):
        b = self.blend(t)
        if b == 0.0:
            return self.f1(u)
        if b == 1.0:
            return self.f2(u)
        return (1.0 - b) * self.f1(u) + b * self.f2(u)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class NonlinearitySpec:
    """Immutable reaction term f(t, x, u) with an evaluation clamp.

    ``params`` is a :class:`HomogeneousF`, a :class:`QuasiPeriodicSignal`
    or a :class:`TwoPhaseF` depending on ``kind``.
    """

    kind: str
    params: object
    u_cap: float = 2.0
    _lip: float = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if not self.u_cap > 0:
            raise ValueError("u_cap must be positive")
        object.__setattr__(self, "_lip", _lipschitz(self))

    def __call__(self, t, x, u):
        u = np.clip(u, 0.0, self.u_cap)
        p = self.params
        if self.kind == HOMOGENEOUS:
            val = p.f(u)
        elif self.kind == KPP_TIME_AP:
            val = u * (p(t) - u)
        elif self.kind == KPP_SPACE_AP:
            val = u * (p(x) - u)
        else:
            val = p(t, u)
        # exact zero at u = 0 regardless of rounding in the formula
        return np.where(u == 0.0, 0.0, val)[()]

    def flow(self, t, dt, x, u):
        """Pointwise reaction step u -> u(t + dt) of u' = f(t, x, u).

        The KPP kinds use the exact solution (1/u solves a linear ODE);
        the other kinds take one explicit Euler step.
        """
        if self.kind == KPP_SPACE_AP:
            u = np.clip(u, 0.0, self.u_cap)
            a = self.params(x)
            ea = np.exp(a * dt)
            # int_0^dt e^{a s} ds, written stably for small a dt
            growth = dt * np.where(np.abs(a * dt) < 1e-8, 1.0 + 0.5 * a * dt, np.expm1(a * dt) / (a * dt))
            return u * ea / (1.0 + u * growth)
        if self.kind == KPP_TIME_AP:
            u = np.clip(u, 0.0, self.u_cap)
            s = t + 0.5 * dt * (1.0 + _GL_X)
            growth = 0.5 * dt * float(np.exp(self.params.integral(t, s)) @ _GL_W)
            ec = math.exp(float(self.params.integral(t, t + dt)))
            return u * ec / (1.0 + u * growth)
        return u + dt * self(t, x, u)

    @property
    def is_autonomous(self):
        return self.kind == HOMOGENEOUS

    @property
    def lipschitz(self):
        """Upper estimate of sup |df/du| on [0, u_cap]."""
        return self._lip

    def to_json(self):
        p = self.params
        if self.kind == HOMOGENEOUS:
            params = {"f": p.to_json()}
        elif self.kind in (KPP_TIME_AP, KPP_SPACE_AP):
            params = p.to_json()
        else:
            params = {"f1": p.f1.to_json(), "f2": p.f2.to_json(), "t1": p.t1, "t2": p.t2}
        return {"kind": self.kind, "u_cap": self.u_cap, "params": params}

    @classmethod
    def from_json(cls, obj):
        kind = obj["kind"]
        params = obj.get("params", {})
        u_cap = obj.get("u_cap")
        if kind == HOMOGENEOUS:
            spec = make_homogeneous(homogeneous_from_json(params["f"]))
        elif kind == KPP_TIME_AP:
            spec = make_kpp_time_ap(QuasiPeriodicSignal.from_json(params))
        elif kind == KPP_SPACE_AP:
            spec = make_kpp_space_ap(QuasiPeriodicSignal.from_json(params))
        elif kind == TWO_PHASE_TIME:
            spec = make_two_phase(
                homogeneous_from_json(params["f1"]),
                homogeneous_from_json(params["f2"]),
                float(params["t1"]),
                float(params["t2"]),
            )
        else:
            raise ValueError(f"unknown kind {kind!r}")
        if u_cap is not None and float(u_cap) != spec.u_cap:
            spec = cls(spec.kind, spec.params, float(u_cap))
        return spec


def _lipschitz(spec):
    us = np.linspace(0.0, spec.u_cap, 2001)
    p = spec.params
    if spec.kind == HOMOGENEOUS:
        return float(np.max(np.abs(p.df(us))))
    if spec.kind in (KPP_TIME_AP, KPP_SPACE_AP):
        return max(abs(p.upper_bound), abs(p.lower_bound)) + 2.0 * spec.u_cap
    return max(float(np.max(np.abs(p.f1.df(us)))), float(np.max(np.abs(p.f2.df(us)))))


def evaluate(spec: NonlinearitySpec, t, x, u):
    """f(t, x, clamp(u, 0, u_cap)); identically zero at u = 0."""
    return spec(t, x, u)


def check_hypothesis(f: HomogeneousF, grid_n: int = 1001, u_cap: float = 2.0):
    """Raise HypothesisViolation unless f(0)=f(1)=0, f'(1)<0, f<0 on (1, u_cap]."""
    if abs(float(f.f(0.0))) > SIGN_TOL or abs(float(f.f(1.0))) > SIGN_TOL:
        raise HypothesisViolation("f(0) = f(1) = 0 is required")
    if not float(f.df(1.0)) < 0.0:
        raise HypothesisViolation("f'(1) < 0 is required")
    above = np.linspace(1.0, u_cap, grid_n)[1:]
    if np.any(np.asarray(f.f(above)) > -SIGN_TOL):
        raise HypothesisViolation("f(u) < 0 for u > 1 is required")


def classify(f: HomogeneousF, grid_n: int = 1000) -> str:
    """Classify f as monostable, bistable, combustion or generic by sampling.

    Sign tests use a 1e-12 tolerance at the points of a uniform grid of
    ``grid_n`` nodes on [0, 1]; values within the tolerance count as zero.
    """
    check_hypothesis(f, grid_n)
    u = np.linspace(0.0, 1.0, grid_n)
    inner = u[1:-1]
    vals = np.asarray(f.f(inner), dtype=float)
    pos = vals > SIGN_TOL
    neg = vals < -SIGN_TOL
    zero = ~(pos | neg)
    df0 = float(f.df(0.0))

    if df0 > SIGN_TOL and pos.all():
        return "monostable"

    if zero[0]:
        # combustion: f vanishes on [0, theta], positive on (theta, 1)
        k = int(np.argmin(zero)) if not zero.all() else len(zero)
        if 0 < k < len(zero) and zero[:k].all() and pos[k:].all():
            if vals[k] > 0.0 and (k + 1 >= len(vals) or vals[k + 1] > vals[k]):
                return "combustion"
        return "generic"

    if df0 < -SIGN_TOL and neg[0]:
        # bistable: negative on (0, theta), positive on (theta, 1)
        k = int(np.argmax(~neg))
        rest_pos = pos[k + 1:].all() if zero[k] else pos[k:].all()
        if k > 0 and rest_pos and np.trapezoid(f.f(u), u) > 0.0:
            return "bistable"
    return "generic"


def make_homogeneous(f: HomogeneousF, u_cap: float = 2.0) -> NonlinearitySpec:
    check_hypothesis(f, u_cap=u_cap)
    return NonlinearitySpec(HOMOGENEOUS, f, u_cap)


def make_two_phase(f1: HomogeneousF, f2: HomogeneousF, t1: float, t2: float,
                   u_cap: float = 2.0) -> NonlinearitySpec:
    """Time-switching term equal to f1 up to t1 and to f2 from t2 on."""
    if not t1 < t2:
        raise BadWindow(f"need t1 < t2, got t1={t1}, t2={t2}")
    check_hypothesis(f1, u_cap=u_cap)
    check_hypothesis(f2, u_cap=u_cap)
    return NonlinearitySpec(TWO_PHASE_TIME, TwoPhaseF(f1, f2, float(t1), float(t2)), u_cap)


def _ap_cap(sig):
    return max(2.0, 2.0 * sig.upper_bound)


def make_kpp_time_ap(c: QuasiPeriodicSignal) -> NonlinearitySpec:
    """f(t, x, u) = u (c(t) - u); the time average of c must be positive."""
    if not c.mean > 0.0:
        raise MeanConditionViolation(f"time average of c must be positive, got {c.mean}")
    return NonlinearitySpec(KPP_TIME_AP, c, _ap_cap(c))


def make_kpp_space_ap(a: QuasiPeriodicSignal) -> NonlinearitySpec:
    """f(t, x, u) = u (a(x) - u); requires inf a > 0."""
    if not a.lower_bound > 0.0:
        raise MeanConditionViolation(
            f"a(x) must be bounded below by a positive constant, got bound {a.lower_bound}"
        )
    return NonlinearitySpec(KPP_SPACE_AP, a, _ap_cap(a))
