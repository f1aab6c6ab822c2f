"""Name resolution over a set of parsed models.

Models are resolved by name across everything supplied; there are no
import statements. Each model kind has its own namespace, while interfaces,
opaque types and records share one global type namespace.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from types import MappingProxyType

from . import ast as A
from .diagnostics import ERROR, Diagnostic, LinkError, ParseError
from .parser import parse_model

PRIMITIVE = "Primitive"
OPAQUE = "Opaque"
RECORD = "Record"
INTERFACE = "Interface"

# Namespace a net's nodes are expected to reference; other namespaces are
# consulted afterwards so that level violations surface as WF10, not LINK.
NODE_LEVEL = {A.SKILL: A.ACTION, A.TASK: A.SKILL, A.PROCESS: A.TASK}
_NODE_SEARCH = (A.ACTION, A.SKILL, A.TASK, A.PROCESS)


@dataclass(frozen=True)
class TypeInfo:
    name: str
    kind: str
    decl: object = None  # InterfaceDecl / RecordDecl / TypeDecl, None for primitives
    domain: str | None = None


@dataclass(frozen=True)
class RefEdge:
    net_kind: str
    net: str
    node: str
    target_kind: str
    target: str


@dataclass(frozen=True)
class LinkedWorkspace:
    models: MappingProxyType  # kind -> {name -> ModelAst}
    types: MappingProxyType  # name -> TypeInfo
    ref_graph: tuple[RefEdge, ...]
    robot_api: frozenset  # names of domain models with the robotapi role
    _targets: MappingProxyType = field(repr=False, default=MappingProxyType({}))

    def get(self, kind, name):
        return self.models[kind].get(name)

    def of_kind(self, kind):
        """Models of one kind, sorted by name."""
        return [self.models[kind][n] for n in sorted(self.models[kind])]

    def all_models(self):
        out = []
        for kind in A.MODEL_KINDS:
            out.extend(self.of_kind(kind))
        return out

    def find(self, name):
        """All models named ``name`` regardless of kind."""
        return [self.models[k][name] for k in A.MODEL_KINDS if name in self.models[k]]

    def node_target(self, net: A.ModelAst, node: A.NodeDecl) -> A.ModelAst:
        kind, name = self._targets[(net.kind, net.name, node.name, node.model)]
        return self.models[kind][name]

    def type_info(self, name) -> TypeInfo | None:
        return self.types.get(name)

    def is_interface(self, name) -> bool:
        info = self.types.get(name)
        return info is not None and info.kind == INTERFACE

    def interface(self, name) -> A.InterfaceDecl | None:
        info = self.types.get(name)
        return info.decl if info is not None and info.kind == INTERFACE else None

    def record(self, name) -> A.RecordDecl | None:
        info = self.types.get(name)
        return info.decl if info is not None and info.kind == RECORD else None


def _dup(what, name, first, second) -> Diagnostic:
    return Diagnostic(ERROR, "LINK-DUP", f"duplicate {what} '{name}' (first declared at {first}, again at {second})", second)


def _unres(what, name, pos) -> Diagnostic:
    return Diagnostic(ERROR, "LINK-UNRES", f"unresolved {what} '{name}'", pos)


def link_workspace(models) -> LinkedWorkspace:
    """Resolve every cross-model reference in ``models``.

    Raises :class:`LinkError` listing every duplicate and unresolved name.
    The result does not depend on the order of ``models``.
    """
    models = sorted(models, key=lambda m: (m.pos.file, m.pos.line, m.pos.col, m.kind, m.name))
    diags = []
    namespaces = {k: {} for k in A.MODEL_KINDS}
    for m in models:
        ns = namespaces[m.kind]
        if m.name in ns:
            diags.append(_dup(A.KEYWORD_OF_KIND[m.kind], m.name, ns[m.name].pos, m.pos))
        else:
            ns[m.name] = m

    types = {p: TypeInfo(p, PRIMITIVE) for p in A.PRIMITIVES}
    robot_api = set()
    for dom in namespaces[A.DOMAIN].values():
        body = dom.body
        if body.role == A.ROLE_ROBOTAPI:
            robot_api.add(dom.name)
        decls = [(d, INTERFACE) for d in body.interfaces]
        decls += [(d, OPAQUE) for d in body.types]
        decls += [(d, RECORD) for d in body.records]
        for decl, kind in sorted(decls, key=lambda dk: (dk[0].pos.line, dk[0].pos.col)):
            prev = types.get(decl.name)
            if prev is not None:
                first = prev.decl.pos if prev.decl is not None else "builtin"
                diags.append(_dup("type", decl.name, first, decl.pos))
            else:
                types[decl.name] = TypeInfo(decl.name, kind, decl, dom.name)

    def check_type(name, pos):
        if name not in types:
            diags.append(_unres("type", name, pos))

    for dom in namespaces[A.DOMAIN].values():
        for iface in dom.body.interfaces:
            seen = {}
            for meth in iface.methods:
                if meth.name in seen:
                    diags.append(_dup(f"method in interface {iface.name}", meth.name, seen[meth.name], meth.pos))
                seen.setdefault(meth.name, meth.pos)
                if meth.return_type != "void":
                    check_type(meth.return_type, meth.pos)
                _check_params(meth.params, f"parameter of {iface.name}.{meth.name}", diags)
                for p in meth.params:
                    check_type(p.type, p.pos)
        for rec in dom.body.records:
            _check_params(rec.fields, f"field of record {rec.name}", diags)
            for f in rec.fields:
                if f.type not in A.PRIMITIVES:
                    diags.append(Diagnostic(
                        ERROR, "LINK-TYPE",
                        f"record field '{rec.name}.{f.name}' must have a primitive type, not '{f.type}'", f.pos))

    edges = []
    targets = {}
    for kind in (A.ACTION,) + A.NET_KINDS:
        for m in namespaces[kind].values():
            _check_params(m.parameters, f"parameter of {m.name}", diags)
            for p in m.parameters:
                check_type(p.type, p.pos)
            if kind == A.ACTION:
                continue
            for node in m.body.nodes:
                expected = NODE_LEVEL[kind]
                found = None
                for k in (expected,) + tuple(x for x in _NODE_SEARCH if x != expected):
                    if node.model in namespaces[k]:
                        found = k
                        break
                if found is None:
                    diags.append(_unres(f"model referenced by node {node.name}", node.model, node.pos))
                    continue
                targets[(kind, m.name, node.name, node.model)] = (found, node.model)
                edges.append(RefEdge(kind, m.name, node.name, found, node.model))

    if diags:
        raise LinkError(diags)
    return LinkedWorkspace(
        models=MappingProxyType({k: MappingProxyType(v) for k, v in namespaces.items()}),
        types=MappingProxyType(types),
        ref_graph=tuple(sorted(edges, key=lambda e: (e.net_kind, e.net, e.node, e.target))),
        robot_api=frozenset(robot_api),
        _targets=MappingProxyType(targets),
    )


def _check_params(params, what, diags):
    seen = {}
    for p in params:
        if p.name in seen:
            diags.append(_dup(what, p.name, seen[p.name], p.pos))
        else:
            seen[p.name] = p.pos


# -- loading -------------------------------------------------------------------

def model_files(dirs) -> list[str]:
    """Model files directly inside ``dirs``, in lexicographic order."""
    files = []
    for d in dirs:
        for name in sorted(os.listdir(d)):
            path = os.path.join(d, name)
            if os.path.splitext(name)[1] in A.KIND_OF_EXTENSION and os.path.isfile(path):
                files.append(path)
    return files


def load_models(dirs) -> list[A.ModelAst]:
    """Parse every model file in ``dirs``; raises ParseError with all failures."""
    models, diags = [], []
    for path in model_files(dirs):
        with open(path, "rb") as fh:
            data = fh.read()
        try:
            models.append(parse_model(data, path))
        except ParseError as exc:
            diags.extend(exc.diagnostics)
    if diags:
        raise ParseError(diags)
    return models


# -- statistics ------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusStats:
    processes: int
    tasks: int
    skills: int
    actions: int
    interfaces: int
    actions_per_skill: dict

    def summary(self) -> str:
        return (f"processes={self.processes} tasks={self.tasks} skills={self.skills} "
                f"actions={self.actions} interfaces={self.interfaces}")


def collect_stats(ws: LinkedWorkspace) -> CorpusStats:
    per_skill = {}
    for skill in ws.of_kind(A.SKILL):
        referenced = {e.target for e in ws.ref_graph
                      if e.net_kind == A.SKILL and e.net == skill.name and e.target_kind == A.ACTION}
        per_skill[skill.name] = len(referenced)
    return CorpusStats(
        processes=len(ws.models[A.PROCESS]),
        tasks=len(ws.models[A.TASK]),
        skills=len(ws.models[A.SKILL]),
        actions=len(ws.models[A.ACTION]),
        interfaces=sum(len(d.body.interfaces) for d in ws.models[A.DOMAIN].values()),
        actions_per_skill=per_skill,
    )
