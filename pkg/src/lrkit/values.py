"""Run-time values.

Primitive values are plain Python objects (``bool``, ``int``, ``float``,
``str``); the remaining variants are small frozen classes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class Opaque:
    handle: str
    type: str

    def __eq__(self, other):
        return isinstance(other, Opaque) and other.handle == self.handle

    def __hash__(self):
        return hash(("opaque", self.handle))


@dataclass(frozen=True)
class ApiObject:
    interface: str
    handle: str

    def __eq__(self, other):
        return isinstance(other, ApiObject) and other.handle == self.handle

    def __hash__(self):
        return hash(("api", self.handle))


@dataclass(frozen=True)
class Record:
    type: str
    fields: tuple  # ((name, value), ...) in declaration order

    def get(self, name):
        for key, value in self.fields:
            if key == name:
                return value
        raise KeyError(name)


def record(type_name, **fields) -> Record:
    return Record(type_name, tuple(fields.items()))


def type_name(v) -> str:
    if isinstance(v, bool):
        return "Bool"
    if isinstance(v, int):
        return "Int"
    if isinstance(v, float):
        return "Double"
    if isinstance(v, str):
        return "String"
    if isinstance(v, Opaque):
        return v.type
    if isinstance(v, ApiObject):
        return v.interface
    if isinstance(v, Record):
        return v.type
    raise TypeError(f"not a value: {v!r}")


def to_json(v):
    """JSON-ready form used in traces; handles render as ``"@handle"``."""
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    if isinstance(v, (Opaque, ApiObject)):
        return "@" + v.handle
    if isinstance(v, Record):
        return {k: to_json(x) for k, x in v.fields}
    raise TypeError(f"not a value: {v!r}")


def render(v) -> str:
    return json.dumps(to_json(v), ensure_ascii=False)
