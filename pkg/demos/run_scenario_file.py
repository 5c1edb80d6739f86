"""Load a scenario document and print its text report.

Run:  python3 demos/run_scenario_file.py demos/scenarios/werner.json
The same thing from the shell:  entevidence run demos/scenarios/werner.json
"""
import sys
from pathlib import Path

from entevidence.scenarios import load_scenario, run_scenario

path = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent / "scenarios" / "werner.json"
report = run_scenario(load_scenario(path))
print(report.to_text())
