"""Exception types raised across the package."""


class StefanFrontError(Exception):
    """Base class for all errors raised by stefan_front."""


class HypothesisViolation(StefanFrontError):
    """A reaction term fails f(0)=f(1)=0, f'(1)<0, f<0 above 1."""


class BadWindow(StefanFrontError):
    """Two-phase switching window with t1 >= t2."""


class MeanConditionViolation(StefanFrontError):
    """Almost periodic coefficient fails its positivity/mean requirement."""


class NoSemiWave(StefanFrontError):
    """No sign change of the shooting residual below the bracket cap.

    The search cannot tell "no semi-wave exists" from "the speed lies beyond
    the cap"; ``c_cap`` and ``last_residual`` are kept for the caller.
    """

    def __init__(self, message, c_cap=None, last_residual=None):
        super().__init__(message)
        self.c_cap = c_cap
        self.last_residual = last_residual


class NonMonotoneScan(StefanFrontError):
    """More than one sign change of the residual on the coarse scan."""


class DegenerateCurve(StefanFrontError):
    """Phase curve with P(0) too small to reparameterize by z."""


class BlowUp(StefanFrontError):
    """Field exceeded 10 * u_cap during time stepping."""


class NonPositive(StefanFrontError):
    """Field undershoot beyond the clipping tolerance."""


class FrontCollision(StefanFrontError):
    """The two fronts of an interval problem came within 10 grid cells."""


class ShapeMismatch(StefanFrontError):
    """Initial data incompatible with the grid (wrong length or negative)."""


class PositivityViolation(StefanFrontError):
    """Spatial coefficient a(x) is not positive."""


class NoConvergence(StefanFrontError):
    """Parabolic relaxation did not reach its stopping criterion."""


class WindowTooShort(StefanFrontError):
    """Trajectory shorter than twice the minimum pair separation."""


class NotOrdered(StefanFrontError):
    """Fields passed to the part metric are not ordered."""


class DegenerateSlope(StefanFrontError):
    """One-sided slope at the front is not negative."""


class LevelNotAttained(StefanFrontError):
    """A snapshot never crosses the requested level."""
