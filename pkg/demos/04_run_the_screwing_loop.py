"""
Running the screwing loop
=========================

The Screwing skill spins, releases, turns back and grasps again until the
torque reaches its target. With a torque increase of 0.4 per spin and a
target of 1.0 that takes three spins.
"""

import lrkit
from lrkit.pipeline import run_interpreted
from lrkit.trace import live_line

screwing = lrkit.load_corpus("screwing")
scenario = screwing.scenarios["tighten"]
print("world:", scenario.world, scenario.config)

# A listener sees each event as it happens: the live view of the run.
trace = run_interpreted(screwing.workspace, screwing.root, scenario,
                        listener=lambda e: print(live_line(e)))

spin = "ScrewAssembly/graspAndScrew/Screwing/spin"
torques = [e["result"].get("torque") for e in trace.of("call") if e["path"] == spin]
print("torque after each spin:", torques)
print("outcome:", trace.outcome, "after", len(trace), "events")

# Entry rules guard actions: a zero target torque stops the run.
try:
    run_interpreted(screwing.workspace, screwing.root, screwing.scenarios["no-torque"])
except lrkit.ExecutionError as exc:
    print(type(exc).__name__, exc)
