"""
Simulated worlds
================

Worlds answer the single device call each action makes. They are small
deterministic models, configured by scenario files.
"""

import lrkit

world = lrkit.make_world("screwdriver", {"torqueDelta": 0.4})
arm = world.device("Arm")
thread = world.resolve("thread")
for _ in range(3):
    result = world.dispatch("Arm", "rotate", [thread, 1.0], receiver=arm)
    print("torque", result.get("torque"))

blocks = lrkit.load_scenario('{"world": "blocks", "config": {"blocks": 4}}').make_world()
gripper = blocks.device("Gripper")
for _ in range(4):
    blocks.dispatch("Gripper", "pick", [blocks.resolve("table")], receiver=gripper)
    blocks.dispatch("Gripper", "place", [blocks.resolve("tower")], receiver=gripper)
print("tower height", blocks.tower, "blocks left on the table", blocks.table)

cleanup = lrkit.make_world("cleanup", {"blocks": [[2, 3, "blue"], [5, 1, "red"]]})
print(cleanup.dispatch("DistanceSensor", "scan", ["blue"], receiver=cleanup.device("DistanceSensor")))
