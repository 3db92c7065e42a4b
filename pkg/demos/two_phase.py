"""A reaction term switching from f1 to f2 gives a front with no global mean speed."""
from pathlib import Path

from stefan_front.scenarios import ScenarioConfig, run

here = Path(__file__).parent
for name in ("two_phase_accelerating", "two_phase_decelerating"):
    rep = run(ScenarioConfig.load(here / "configs" / f"{name}.json"), here / "out" / name)
    d = rep.data
    print(f"{name}: c1*={d['c1_star']:.4f} c2*={d['c2_star']:.4f} "
          f"spread={d['speed_report']['spread']:.4f} passed={rep.passed}")
