"""Front-fixed runs: a semi-wave translating rigidly, then step data locking onto it.

Writes traj.csv, snapshots and summary.json under out/ for both runs.
"""
from pathlib import Path

from stefan_front.scenarios import ScenarioConfig, run

here = Path(__file__).parent
for name in ("hold_combustion", "step_logistic"):
    rep = run(ScenarioConfig.load(here / "configs" / f"{name}.json"), here / "out" / name)
    print(name, "PASS" if rep.passed else "FAIL")
    for key, c in rep.criteria.items():
        print(f"  {key:28s} {c.get('value', '')!s:>24} {c.get('op', '')} {c.get('limit', '')}")
