"""Twin runs under quasi-periodic coefficients in time and in space.

Time case: both fronts converge to the same front-fixed field below u_c(t).
Space case: the fields agree once compared at equal front position.
"""
from pathlib import Path

from stefan_front.scenarios import ScenarioConfig, run

here = Path(__file__).parent
for name in ("time_ap", "space_ap"):
    rep = run(ScenarioConfig.load(here / "configs" / f"{name}.json"), here / "out" / name)
    print(name, "PASS" if rep.passed else "FAIL")
    for key, c in rep.criteria.items():
        print(f"  {key:30s} {c.get('value', c.get('passed'))}")
