"""Abstract syntax for domain models, actions and the three net languages.

All nodes are frozen dataclasses. Source positions never take part in
equality, so two trees parsed from differently formatted text compare equal
when their structure does.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .diagnostics import SourcePos

NOPOS = SourcePos("<builtin>", 1, 1)

PRIMITIVES = ("Double", "Int", "Bool", "String")

DOMAIN = "DomainModel"
ACTION = "Action"
SKILL = "Skill"
TASK = "Task"
PROCESS = "Process"
MODEL_KINDS = (DOMAIN, ACTION, SKILL, TASK, PROCESS)
NET_KINDS = (SKILL, TASK, PROCESS)

ROLE_TYPES = "types"
ROLE_ROBOTAPI = "robotapi"

KEYWORD_OF_KIND = {
    DOMAIN: "domainmodel",
    ACTION: "action",
    SKILL: "skill",
    TASK: "task",
    PROCESS: "process",
}
KIND_OF_KEYWORD = {v: k for k, v in KEYWORD_OF_KIND.items()}
EXTENSION_OF_KIND = {
    DOMAIN: ".dom",
    ACTION: ".action",
    SKILL: ".skill",
    TASK: ".task",
    PROCESS: ".process",
}
KIND_OF_EXTENSION = {v: k for k, v in EXTENSION_OF_KIND.items()}


def _pos():
    return field(default=NOPOS, compare=False, repr=False)


# -- expressions ------------------------------------------------------------

@dataclass(frozen=True)
class Literal:
    value: Union[bool, int, float, str]
    type: str
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class Name:
    """Reference to a parameter in scope."""
    name: str
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class ResultField:
    """``result.<field>``: a field of the execution call's return record."""
    field: str
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    pos: SourcePos = _pos()


Expr = Union[Literal, Name, ResultField, Unary, Binary]


def walk(expr):
    """Yield ``expr`` and all of its subexpressions, pre-order."""
    stack = [expr]
    while stack:
        e = stack.pop()
        yield e
        if isinstance(e, Binary):
            stack.append(e.right)
            stack.append(e.left)
        elif isinstance(e, Unary):
            stack.append(e.operand)


# -- declarations -------------------------------------------------------------

@dataclass(frozen=True)
class Param:
    type: str
    name: str
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class MethodDecl:
    return_type: str  # "void" or a type name
    name: str
    params: tuple[Param, ...]
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class InterfaceDecl:
    name: str
    methods: tuple[MethodDecl, ...]
    pos: SourcePos = _pos()

    def method(self, name):
        for m in self.methods:
            if m.name == name:
                return m
        return None


@dataclass(frozen=True)
class TypeDecl:
    name: str
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class RecordDecl:
    name: str
    fields: tuple[Param, ...]
    pos: SourcePos = _pos()

    def field_type(self, name):
        for f in self.fields:
            if f.name == name:
                return f.type
        return None


@dataclass(frozen=True)
class DomainBody:
    role: str
    interfaces: tuple[InterfaceDecl, ...]
    types: tuple[TypeDecl, ...]
    records: tuple[RecordDecl, ...]


@dataclass(frozen=True)
class ApiCall:
    receiver: str
    method: str
    args: tuple[Expr, ...]
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class ExitRule:
    condition: Expr
    outcome: str
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class ActionBody:
    parameters: tuple[Param, ...]
    execution: ApiCall
    entry: tuple[Expr, ...]
    exit: tuple[ExitRule, ...]

    @property
    def outcomes(self) -> tuple[str, ...]:
        seen = []
        for rule in self.exit:
            if rule.outcome not in seen:
                seen.append(rule.outcome)
        return tuple(seen)


@dataclass(frozen=True)
class NodeDecl:
    name: str
    model: str
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class Binding:
    param: str
    expr: Expr
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class Initial:
    node: str
    bindings: tuple[Binding, ...] = ()
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class Transition:
    """``source.outcome [when guard] -> target [with (...)]`` or ``-> end X``.

    Exactly one of ``target`` and ``end`` is set.
    """
    source: str
    outcome: str
    guard: Optional[Expr]
    target: Optional[str]
    bindings: tuple[Binding, ...]
    end: Optional[str]
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class NetBody:
    parameters: tuple[Param, ...]
    nodes: tuple[NodeDecl, ...]
    initial: Initial
    transitions: tuple[Transition, ...]

    def node(self, name):
        for n in self.nodes:
            if n.name == name:
                return n
        return None

    @property
    def outcomes(self) -> tuple[str, ...]:
        seen = []
        for t in self.transitions:
            if t.end is not None and t.end not in seen:
                seen.append(t.end)
        return tuple(seen)


Body = Union[DomainBody, ActionBody, NetBody]


@dataclass(frozen=True)
class ModelAst:
    kind: str
    name: str
    body: Body
    pos: SourcePos = _pos()

    @property
    def file(self) -> str:
        return self.pos.file

    @property
    def parameters(self) -> tuple[Param, ...]:
        return getattr(self.body, "parameters", ())

    @property
    def outcomes(self) -> tuple[str, ...]:
        return getattr(self.body, "outcomes", ())

    @property
    def is_net(self) -> bool:
        return self.kind in NET_KINDS
