"""Execution traces and their JSON Lines form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import StepLimitExceeded
from .values import to_json

# Global key order; each event kind uses a subset.
KEY_ORDER = ("step", "event", "path", "interface", "method", "args", "result",
             "outcome", "ruleIndex", "from", "to", "bindings", "steps")
KEYS = {
    "enter": ("path",),
    "call": ("path", "interface", "method", "args", "result"),
    "outcome": ("path", "outcome", "ruleIndex"),
    "transition": ("from", "to", "bindings"),
    "exit": ("path", "outcome"),
    "end": ("outcome", "steps"),
}


@dataclass(frozen=True)
class Event:
    step: int
    event: str
    data: dict

    def __getitem__(self, key):
        return self.data[key]

    def get(self, key, default=None):
        return self.data.get(key, default)

    def to_json(self) -> str:
        obj = {"step": self.step, "event": self.event}
        for key in KEYS[self.event]:
            value = self.data[key]
            if key == "args":
                value = [to_json(v) for v in value]
            elif key == "bindings":
                value = {k: to_json(v) for k, v in value}
            elif key == "result":
                value = to_json(value)
            obj[key] = value
        return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


@dataclass
class ExecutionTrace:
    events: list = field(default_factory=list)

    @property
    def outcome(self):
        if self.events and self.events[-1].event == "end":
            return self.events[-1]["outcome"]
        return None

    def of(self, kind):
        return [e for e in self.events if e.event == kind]

    def __len__(self):
        return len(self.events)


class Recorder:
    """Appends events, one step each, enforcing the step limit."""

    def __init__(self, max_steps: int):
        self.max_steps = max_steps
        self.trace = ExecutionTrace()
        self.listeners = []

    def _emit(self, kind, **data):
        step = len(self.trace.events) + 1
        if step > self.max_steps:
            raise StepLimitExceeded(self.max_steps)
        event = Event(step, kind, data)
        self.trace.events.append(event)
        for listener in self.listeners:
            listener(event)

    def enter(self, path):
        self._emit("enter", path=path)

    def call(self, path, interface, method, args, result):
        self._emit("call", path=path, interface=interface, method=method, args=tuple(args), result=result)

    def outcome(self, path, outcome, rule_index):
        self._emit("outcome", path=path, outcome=outcome, ruleIndex=rule_index)

    def transition(self, from_path, to_path, bindings):
        self._emit("transition", **{"from": from_path, "to": to_path, "bindings": tuple(bindings)})

    def exit(self, path, outcome):
        self._emit("exit", path=path, outcome=outcome)

    def end(self, outcome):
        self._emit("end", outcome=outcome, steps=len(self.trace.events) + 1)


def serialize_trace(trace: ExecutionTrace) -> str:
    return "".join(e.to_json() + "\n" for e in trace.events)


def diff_traces(a, b):
    """Smallest step whose lines differ, or None when equal.

    Accepts traces or their serialized text.
    """
    la = (a if isinstance(a, str) else serialize_trace(a)).splitlines()
    lb = (b if isinstance(b, str) else serialize_trace(b)).splitlines()
    for i, (x, y) in enumerate(zip(la, lb)):
        if x != y:
            return i + 1
    if len(la) != len(lb):
        return min(len(la), len(lb)) + 1
    return None


def live_lines(trace: ExecutionTrace):
    """``step N: path`` lines highlighting the active element at every step."""
    for e in trace.events:
        yield live_line(e)


def live_line(e: Event) -> str:
    if e.event == "transition":
        where = e["to"]
    elif e.event == "end":
        where = f"end {e['outcome']}"
    else:
        where = e["path"]
    return f"step {e.step}: {where}"
