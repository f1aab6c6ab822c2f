"""Code generation backends over the statechart IR.

A backend turns a :class:`StatechartIr` into a list of ``(filename,
content)`` pairs. Registries are immutable; registering returns a new one.
Third-party backends can be contributed through the ``lrkit.backends``
entry-point group, each entry point resolving to a :class:`Backend`.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib.metadata import entry_points
from types import MappingProxyType
from typing import Callable

from .printer import format_expr
from .statechart import ATOMIC, COMPOSITE, EXIT, StatechartIr, flatten, serialize_program

ENTRY_POINT_GROUP = "lrkit.backends"


class DuplicateBackend(ValueError):
    pass


class UnknownBackend(LookupError):
    pass


@dataclass(frozen=True)
class Backend:
    name: str
    transform: Callable[[StatechartIr], list]


class BackendRegistry:
    """Name to backend mapping that cannot be modified in place."""

    def __init__(self, backends=()):
        table = {}
        for b in backends:
            if b.name in table:
                raise DuplicateBackend(f"backend '{b.name}' is already registered")
            table[b.name] = b
        self._table = MappingProxyType(table)

    def __contains__(self, name):
        return name in self._table

    def __iter__(self):
        return iter(sorted(self._table))

    def get(self, name) -> Backend:
        try:
            return self._table[name]
        except KeyError:
            raise UnknownBackend(f"no backend named '{name}'") from None

    def backends(self):
        return [self._table[n] for n in sorted(self._table)]


def register_backend(registry: BackendRegistry, backend: Backend) -> BackendRegistry:
    return BackendRegistry([*registry.backends(), backend])


def list_backends(registry: BackendRegistry) -> list[str]:
    return sorted(registry)


# -- DOT ---------------------------------------------------------------------------

def _dot_string(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _label(s) -> str:
    return s.path.rsplit("/", 1)[-1]


def emit_dot(sc: StatechartIr) -> str:
    """Graphviz digraph of ``sc``.

    Each composite is a cluster holding a point node (its own id) from which a
    dashed edge leads to the initial child. Transitions into a composite
    child end at that child's point node.
    """
    lines = ["digraph statechart {", "    compound=true;", "    node [fontname=\"Helvetica\"];"]

    def emit_state(sid, depth):
        s = sc.states[sid]
        pad = "    " * depth
        if s.kind == COMPOSITE:
            lines.append(f"{pad}subgraph cluster_{s.id} {{")
            lines.append(f"{pad}    label={_dot_string(_label(s))};")
            lines.append(f"{pad}    {s.id} [shape=point, label=\"\"];")
            for child in s.children:
                emit_state(child, depth + 1)
            lines.append(f"{pad}}}")
        elif s.kind == ATOMIC:
            lines.append(f"{pad}{s.id} [shape=box, label={_dot_string(_label(s))}];")
        elif s.kind == EXIT:
            lines.append(f"{pad}{s.id} [shape=doublecircle, label={_dot_string(s.outcome)}];")

    emit_state(sc.root.id, 1)
    for comp in sc.composites():
        child, _ = sc.initial_of[comp.id]
        lines.append(f"    {comp.id} -> {child} [style=dashed];")
    for t in sorted(sc.transitions, key=lambda t: (t.source, t.target)):
        label = t.outcome if t.guard is None else f"{t.outcome}/{format_expr(t.guard)}"
        lines.append(f"    {t.source} -> {t.target} [label={_dot_string(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_lrf(sc: StatechartIr) -> str:
    return serialize_program(flatten(sc))


def _root_name(sc):
    return sc.root.path


DOT = Backend("dot", lambda sc: [(f"{_root_name(sc)}.dot", emit_dot(sc))])
LRF = Backend("lrf", lambda sc: [(f"{_root_name(sc)}.lrf", emit_lrf(sc))])

BASE_REGISTRY = BackendRegistry([LRF])


def default_registry(include_plugins: bool = True) -> BackendRegistry:
    """Built-in backends plus any installed through entry points."""
    registry = register_backend(BASE_REGISTRY, DOT)
    if include_plugins:
        for ep in entry_points(group=ENTRY_POINT_GROUP):
            registry = register_backend(registry, ep.load())
    return registry


def generate(sc: StatechartIr, backend: Backend) -> list:
    files = list(backend.transform(sc))
    for name, content in files:
        if not isinstance(name, str) or not isinstance(content, str) or "/" in name or name in ("", ".", ".."):
            raise ValueError(f"backend '{backend.name}' produced an invalid file entry {name!r}")
    return files
