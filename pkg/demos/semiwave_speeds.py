"""Semi-wave speeds by phase-plane shooting for the three reaction classes.

Prints c* and the shooting residual for a few free-boundary coefficients mu,
then shows that an unbalanced bistable term has no semi-wave.
"""
from stefan_front.errors import NoSemiWave
from stefan_front.nonlinearity import bistable, combustion, logistic
from stefan_front.semiwave import find_cstar

for f in (logistic(), bistable(0.25), combustion(0.3)):
    for mu in (0.5, 1.0, 2.0):
        prof = find_cstar(f, mu)
        print(f"{f.to_json():16s} mu={mu:<4} c*={prof.c_star:.10f} "
              f"residual={prof.residual:.1e} q'(0)={prof.slope0:.8f}")

try:
    find_cstar(bistable(0.6), 1.0)
except NoSemiWave as exc:
    print("bistable(0.6):", exc)
