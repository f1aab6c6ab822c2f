"""Deterministic simulated robot cells.

Three analytic toy worlds implement the bundled robot API: a screwdriver
cell (torque accumulation, gripper, socket feeder), a block-stacking cell
and a cleanup grid. Nothing here reads the clock or a random source; every
call is a pure function of the world state and its arguments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import UnknownMethod, WorldFault
from .runtime import RunLimits
from .values import ApiObject, Opaque, record


class ScenarioError(ValueError):
    pass


class ScenarioParse(ScenarioError):
    pass


class UnknownWorld(ScenarioError):
    pass


class UnknownConfigKey(ScenarioError):
    pass


def motion(torque=0.0, force=0.0, displaced=False, contact=True):
    return record("MotionResult", torque=float(torque), force=float(force),
                  displaced=bool(displaced), contact=bool(contact))


def grasp(success, held, height):
    return record("GraspResult", success=bool(success), held=int(held), height=int(height))


class World:
    """Base world: owns devices, frames and dispatch bookkeeping."""

    kind = ""
    defaults: dict = {}
    devices = {
        "arm": "Arm", "tool": "Tool", "gripper": "Gripper", "linear": "LinearMotion",
        "rotary": "RotationalMotion", "torqueSensor": "TorqueSensor",
        "forceSensor": "ForceSensor", "frames": "FrameStore", "log": "Logger",
    }
    frames: tuple = ("home",)

    def __init__(self, config=None):
        config = dict(config or {})
        unknown = sorted(set(config) - set(self.defaults))
        if unknown:
            raise UnknownConfigKey(f"{self.kind} world has no config key(s) {', '.join(unknown)}")
        self.config = {**self.defaults, **config}
        self.objects = {}
        for handle, iface in self.devices.items():
            self.objects[handle] = ApiObject(iface, handle)
        for handle in self.frames:
            self.objects[handle] = Opaque(handle, "Frame")
        self.call_count = {}
        self.messages = []
        self.tool_closed = bool(self.config.get("gripperClosed", False))
        self.torque = 0.0
        self.force = 0.0
        self.position = "home"
        self.reset()

    def reset(self):
        """Hook for subclasses to initialise their state."""

    def device(self, interface):
        for handle in sorted(self.objects):
            obj = self.objects[handle]
            if isinstance(obj, ApiObject) and obj.interface == interface:
                return obj
        return None

    def resolve(self, handle):
        try:
            return self.objects[handle]
        except KeyError:
            raise ScenarioError(f"{self.kind} world has no object '@{handle}'") from None

    def dispatch(self, interface, method, args, receiver=None):
        if receiver is not None and self.objects.get(receiver.handle) != receiver:
            raise WorldFault(f"unknown device '@{receiver.handle}'")
        handler = getattr(self, f"{interface}_{method}", None)
        if handler is None:
            raise UnknownMethod(interface, method)
        key = f"{interface}.{method}"
        self.call_count[key] = self.call_count.get(key, 0) + 1
        return handler(*args)

    # -- shared devices --

    def Logger_log(self, message):
        self.messages.append(message)
        return None

    def FrameStore_lookup(self, name):
        obj = self.objects.get(name)
        if not isinstance(obj, Opaque):
            raise WorldFault(f"no frame named {name!r}")
        return obj

    def TorqueSensor_readTorque(self):
        return record("TorqueReading", torque=self.torque)

    def ForceSensor_readForce(self):
        return record("ForceReading", force=self.force)

    def _set_tool(self, closed):
        if self.config.get("strictGripper") and self.tool_closed == closed:
            raise WorldFault(f"gripper is already {'closed' if closed else 'open'}")
        self.tool_closed = closed

    def Tool_open(self):
        self._set_tool(False)

    def Tool_close(self):
        self._set_tool(True)

    def Arm_moveTo(self, target, stiffness, damping):
        self.position = target.handle
        return motion(self.torque, 0.0, False, False)

    def LinearMotion_moveLinear(self, target, stiffness, damping, max_force):
        self.position = target.handle
        self.force = min(float(self.config.get("contactForce", 0.0)), max_force)
        return motion(self.torque, self.force, False, True)


class ScrewdriverWorld(World):
    """Torque cell: each rotation adds ``torqueDelta`` up to ``torqueMax``.

    Also hosts a socket feeder (``sockets``) so that rail plugging runs in
    the same cell.
    """

    kind = "screwdriver"
    defaults = {
        "torqueDelta": 0.4,
        "torqueMax": 10.0,
        "backDelta": 0.0,
        "strictGripper": False,
        "gripperClosed": False,
        "sockets": 0,
        "displaceOnRotate": 0,
        "contactForce": 5.0,
    }
    frames = ("home", "screw", "thread", "feeder", "rail")

    def reset(self):
        self.rotations = 0
        self.holding = False
        self.sockets_left = int(self.config["sockets"])
        self.plugged = 0

    def Arm_rotate(self, frame, max_torque):
        self.rotations += 1
        self.torque = min(self.torque + self.config["torqueDelta"], float(self.config["torqueMax"]))
        displaced = self.rotations == self.config["displaceOnRotate"]
        return motion(self.torque, 0.0, displaced, True)

    def Arm_rotateBack(self, frame):
        return motion(self.torque, 0.0, False, True)

    def RotationalMotion_rotateAbout(self, frame, angle, stiffness, damping):
        return motion(self.torque, 0.0, False, True)

    def Tool_openAndReset(self):
        self._set_tool(False)
        self.torque = max(0.0, self.torque - self.config["backDelta"])

    def Gripper_pick(self, source):
        if self.holding:
            raise WorldFault("gripper already holds a part")
        if source.handle == "feeder":
            if self.sockets_left == 0:
                return grasp(False, 0, self.plugged)
            self.sockets_left -= 1
        self.holding = True
        return grasp(True, 1, self.plugged)

    def Gripper_place(self, target):
        if not self.holding:
            raise WorldFault("gripper holds nothing to place")
        self.holding = False
        if target.handle == "rail":
            self.plugged += 1
        return grasp(True, 0, self.plugged)

    def FrameStore_countParts(self, area):
        count = {"feeder": self.sockets_left, "rail": self.plugged}.get(area.handle, 0)
        return record("PartCount", count=count)


class BlocksWorld(World):
    """Stacking cell: blocks move between the table and the tower."""

    kind = "blocks"
    defaults = {"blocks": 4, "strictGripper": False, "contactForce": 3.0}
    frames = ("home", "table", "tower")

    def reset(self):
        self.table = int(self.config["blocks"])
        self.tower = 0
        self.holding = False

    def Gripper_pick(self, source):
        if self.holding:
            raise WorldFault("gripper already holds a block")
        if source.handle == "table" and self.table > 0:
            self.table -= 1
        elif source.handle == "tower" and self.tower > 0:
            self.tower -= 1
        else:
            return grasp(False, 0, self.tower)
        self.holding = True
        return grasp(True, 1, self.tower)

    def Gripper_place(self, target):
        if not self.holding:
            raise WorldFault("gripper holds no block")
        self.holding = False
        if target.handle == "tower":
            self.tower += 1
        else:
            self.table += 1
        return grasp(True, 0, self.tower)

    def FrameStore_countParts(self, area):
        count = {"table": self.table, "tower": self.tower}.get(area.handle, 0)
        return record("PartCount", count=count)


@dataclass
class Block:
    x: int
    y: int
    color: str


class CleanupWorld(World):
    """Grid with colored blocks; collected blocks end up in the container."""

    kind = "cleanup"
    defaults = {"width": 8, "height": 8, "blocks": [], "start": [0, 0], "strictGripper": False}
    devices = {
        "base": "Base", "gripper": "Gripper", "sonar": "DistanceSensor",
        "camera": "ColorSensor", "light": "LightSensor", "claw": "Tool",
        "frames": "FrameStore", "log": "Logger",
    }
    frames = ("home", "container")

    def reset(self):
        try:
            self.grid = [Block(int(x), int(y), str(c)) for x, y, c in self.config["blocks"]]
            sx, sy = self.config["start"]
            self.start = (int(sx), int(sy))
        except (TypeError, ValueError):
            raise ScenarioError("cleanup blocks must be [x, y, color] triples and start an [x, y] pair") from None
        self.initial_count = len(self.grid)
        self.pos = self.start
        self.container = []
        self.holding = None
        self.target = None

    @property
    def remaining(self) -> int:
        return len(self.grid) + (1 if self.holding is not None else 0)

    def _block_here(self):
        for b in self.grid:
            if (b.x, b.y) == self.pos:
                return b
        return None

    def DistanceSensor_scan(self, color):
        px, py = self.pos
        candidates = [b for b in self.grid if not color or b.color == color]
        if not candidates:
            self.target = None
            return record("ScanResult", found=False, distance=0.0, color="")
        best = min(candidates, key=lambda b: (abs(b.x - px) + abs(b.y - py), b.y, b.x))
        self.target = best
        return record("ScanResult", found=True, distance=float(abs(best.x - px) + abs(best.y - py)), color=best.color)

    def Base_approach(self):
        if self.target is None or self.target not in self.grid:
            return motion(contact=False)
        self.pos = (self.target.x, self.target.y)
        return motion()

    def Base_drive(self, distance):
        return motion()

    def Base_turn(self, angle):
        return motion()

    def Base_returnHome(self):
        self.pos = self.start
        return motion()

    def LightSensor_readLight(self):
        x, y = self.pos
        inside = 0 <= x < self.config["width"] and 0 <= y < self.config["height"]
        return record("LightReading", level=80 if inside else 10)

    def ColorSensor_readColor(self):
        b = self._block_here()
        return record("ColorReading", color=b.color if b else "")

    def Gripper_grip(self):
        if self.holding is not None:
            raise WorldFault("gripper already holds a block")
        b = self._block_here()
        if b is None:
            return grasp(False, 0, len(self.container))
        self.grid.remove(b)
        self.holding = b
        return grasp(True, 1, len(self.container))

    def Gripper_drop(self):
        if self.holding is None:
            return grasp(False, 0, len(self.container))
        self.container.append(self.holding)
        self.holding = None
        return grasp(True, 0, len(self.container))

    def FrameStore_countParts(self, area):
        count = len(self.container) if area.handle == "container" else len(self.grid)
        return record("PartCount", count=count)


WORLDS = {cls.kind: cls for cls in (ScrewdriverWorld, BlocksWorld, CleanupWorld)}


def make_world(kind, config=None) -> World:
    try:
        cls = WORLDS[kind]
    except KeyError:
        raise UnknownWorld(f"unknown world {kind!r}") from None
    return cls(config)


@dataclass
class Scenario:
    world: str
    config: dict = field(default_factory=dict)
    bindings: dict = field(default_factory=dict)
    limits: RunLimits = field(default_factory=RunLimits)

    def make_world(self) -> World:
        return make_world(self.world, self.config)

    def top_bindings(self, world: World) -> dict:
        """Binding values with ``"@handle"`` strings resolved in ``world``."""
        out = {}
        for name, value in self.bindings.items():
            if isinstance(value, str) and value.startswith("@"):
                value = world.resolve(value[1:])
            out[name] = value
        return out


SCENARIO_KEYS = ("world", "config", "bindings", "limits")


def load_scenario(text) -> Scenario:
    """Parse and validate a ``.scn`` document."""
    try:
        obj = json.loads(text)
    except (ValueError, TypeError) as exc:
        raise ScenarioParse(f"scenario is not valid JSON: {exc}") from None
    if not isinstance(obj, dict) or "world" not in obj:
        raise ScenarioParse("scenario must be an object with a 'world' key")
    extra = sorted(set(obj) - set(SCENARIO_KEYS))
    if extra:
        raise ScenarioParse(f"unknown scenario key(s) {', '.join(extra)}")
    config = obj.get("config", {})
    bindings = obj.get("bindings", {})
    limits = obj.get("limits", {})
    if not isinstance(config, dict) or not isinstance(bindings, dict) or not isinstance(limits, dict):
        raise ScenarioParse("config, bindings and limits must be objects")
    for name, value in bindings.items():
        if not isinstance(value, (bool, int, float, str)):
            raise ScenarioParse(f"binding {name!r} must be a number, boolean or string")
    if set(limits) - {"maxSteps"}:
        raise ScenarioParse("limits only supports maxSteps")
    try:
        run_limits = RunLimits(limits.get("maxSteps", RunLimits().max_steps))
    except ValueError as exc:
        raise ScenarioParse(str(exc)) from None
    scenario = Scenario(obj["world"], config, bindings, run_limits)
    world = scenario.make_world()
    scenario.top_bindings(world)
    return scenario
