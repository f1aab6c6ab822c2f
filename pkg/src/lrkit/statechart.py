"""Hierarchical statechart IR and its flat, serializable form.

Every node occurrence gets its own subtree, so two nodes that reference the
same skill are separate composites with separate parameter scopes. Net
outcomes become explicit Exit states inside their composite.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Optional

from . import ast as A
from .diagnostics import ParseError
from .errors import MalformedProgram
from .parser import parse_expression
from .printer import format_expr
from .runtime import NotAProcess, RootNotFound, find_process  # noqa: F401  (re-exported)
from .symbols import LinkedWorkspace

COMPOSITE = "Composite"
ATOMIC = "Atomic"
EXIT = "Exit"

LRF_VERSION = "lrf-1"


@dataclass(frozen=True)
class Call:
    receiver: str
    interface: str
    method: str
    args: tuple


@dataclass(frozen=True)
class State:
    id: int
    path: str
    kind: str
    parent: Optional[int]
    model: Optional[str] = None  # referenced model name; None for Exit states
    params: tuple = ()  # ((type, name), ...)
    call: Optional[Call] = None
    entry: tuple = ()
    exit_rules: tuple = ()  # ((Expr, outcome), ...)
    outcome: Optional[str] = None  # Exit states only
    children: tuple = ()


@dataclass(frozen=True)
class ScTransition:
    source: int
    outcome: str
    guard: Optional[object]
    target: int
    bindings: tuple  # ((name, Expr), ...)
    pos: object = None


@dataclass(frozen=True)
class StatechartIr:
    states: tuple
    transitions: tuple
    initial_of: dict  # composite id -> (child id, bindings)

    @property
    def root(self) -> State:
        return self.states[0]

    def composites(self):
        return [s for s in self.states if s.kind == COMPOSITE]

    def count(self, kind) -> int:
        return sum(1 for s in self.states if s.kind == kind)

    def by_path(self, path) -> State:
        for s in self.states:
            if s.path == path:
                return s
        raise KeyError(path)

    def transitions_in(self, composite_id):
        children = set(self.states[composite_id].children)
        return [t for t in self.transitions if t.source in children]


class _Builder:
    def __init__(self, ws: LinkedWorkspace):
        self.ws = ws
        self.states = []
        self.transitions = []
        self.initial_of = {}

    def new_state(self, **kw):
        sid = len(self.states)
        self.states.append(dict(id=sid, **kw))
        return sid

    def build(self, model, path, parent, active):
        if model.kind == A.ACTION:
            body = model.body
            ptypes = {p.name: p.type for p in model.parameters}
            call = Call(body.execution.receiver, ptypes.get(body.execution.receiver, ""),
                        body.execution.method, body.execution.args)
            return self.new_state(
                path=path, kind=ATOMIC, parent=parent, model=model.name,
                params=tuple((p.type, p.name) for p in model.parameters),
                call=call, entry=body.entry,
                exit_rules=tuple((r.condition, r.outcome) for r in body.exit),
                children=())
        if model.name in active:
            raise ValueError(f"recursive instantiation of {model.name}")
        sid = self.new_state(path=path, kind=COMPOSITE, parent=parent, model=model.name,
                             params=tuple((p.type, p.name) for p in model.parameters), children=())
        body = model.body
        ids = {}
        children = []
        for node in body.nodes:
            if node.name in ids:
                continue
            target = self.ws.node_target(model, node)
            cid = self.build(target, f"{path}/{node.name}", sid, active | {model.name})
            ids[node.name] = cid
            children.append(cid)
        exits = {}
        for outcome in body.outcomes:
            exits[outcome] = self.new_state(path=f"{path}/end:{outcome}", kind=EXIT, parent=sid,
                                            outcome=outcome, children=())
            children.append(exits[outcome])
        self.states[sid]["children"] = tuple(children)
        init = body.initial
        self.initial_of[sid] = (ids[init.node], tuple((b.param, b.expr) for b in init.bindings))
        for t in body.transitions:
            to = exits[t.end] if t.end is not None else ids[t.target]
            self.transitions.append(ScTransition(
                ids[t.source], t.outcome, t.guard, to,
                tuple((b.param, b.expr) for b in t.bindings), t.pos))
        return sid


def to_statechart(ws: LinkedWorkspace, root: str) -> StatechartIr:
    """Build the IR for process ``root`` (paths are ``Process/node/node/...``)."""
    process = find_process(ws, root)
    b = _Builder(ws)
    b.build(process, process.name, None, frozenset())
    states = tuple(State(**s) for s in b.states)
    return StatechartIr(states, tuple(b.transitions), dict(b.initial_of))


def reachable_outcomes(sc: StatechartIr) -> dict:
    """Outcomes each composite can end with, assuming every guard and exit rule can hold."""
    memo = {}

    def outcomes_of(sid):
        s = sc.states[sid]
        if s.kind == ATOMIC:
            return {o for _, o in s.exit_rules}
        if sid in memo:
            return memo[sid]
        memo[sid] = set()
        by_source = {}
        for t in sc.transitions_in(sid):
            by_source.setdefault(t.source, []).append(t)
        start = sc.initial_of[sid][0]
        seen = {start}
        queue = deque([start])
        found = set()
        while queue:
            cur = queue.popleft()
            possible = outcomes_of(cur)
            for t in by_source.get(cur, ()):
                if t.outcome not in possible:
                    continue
                target = sc.states[t.target]
                if target.kind == EXIT:
                    found.add(target.outcome)
                elif t.target not in seen:
                    seen.add(t.target)
                    queue.append(t.target)
        memo[sid] = found
        return found

    return {s.id: frozenset(outcomes_of(s.id)) for s in sc.composites()}


# -- flat program -----------------------------------------------------------------

@dataclass(frozen=True)
class FlatState:
    id: int
    path: str
    kind: str
    scope_id: Optional[int]
    params: tuple  # ((type, name), ...)
    call: Optional[dict]  # {"receiver","interface","method","args":[expr text]}
    entry: tuple  # expr text
    exit: object  # Atomic: ((expr text, outcome), ...); Exit: outcome name; else ()


@dataclass(frozen=True)
class FlatTransition:
    source: int
    outcome: Optional[str]  # None marks a composite's initial entry
    guard: Optional[str]
    target: int
    bindings: tuple  # ((name, expr text), ...)


@dataclass(frozen=True)
class FlatProgram:
    version: str
    states: tuple
    transitions: tuple
    initial: tuple  # ((state id, ((name, expr text), ...)), ...) root entry chain


def flatten(sc: StatechartIr) -> FlatProgram:
    states = []
    for s in sc.states:
        call = None
        if s.call is not None:
            call = {"receiver": s.call.receiver, "interface": s.call.interface,
                    "method": s.call.method, "args": [format_expr(a) for a in s.call.args]}
        if s.kind == ATOMIC:
            exit_ = tuple((format_expr(c), o) for c, o in s.exit_rules)
        elif s.kind == EXIT:
            exit_ = s.outcome
        else:
            exit_ = ()
        states.append(FlatState(s.id, s.path, s.kind, s.parent, tuple(s.params), call,
                                tuple(format_expr(e) for e in s.entry), exit_))

    def text_bindings(bindings):
        return tuple((name, format_expr(e)) for name, e in bindings)

    transitions = []
    for comp in sc.composites():
        child, binds = sc.initial_of[comp.id]
        transitions.append(FlatTransition(comp.id, None, None, child, text_bindings(binds)))
        for t in sc.transitions_in(comp.id):
            guard = format_expr(t.guard) if t.guard is not None else None
            transitions.append(FlatTransition(t.source, t.outcome, guard, t.target, text_bindings(t.bindings)))

    chain = [(0, ())]
    cur = 0
    while sc.states[cur].kind == COMPOSITE:
        child, binds = sc.initial_of[cur]
        chain.append((child, text_bindings(binds)))
        cur = child
    return FlatProgram(LRF_VERSION, tuple(states), tuple(transitions), tuple(chain))


def _state_json(s: FlatState) -> dict:
    if s.kind == ATOMIC:
        exit_ = [[c, o] for c, o in s.exit]
    elif s.kind == EXIT:
        exit_ = s.exit
    else:
        exit_ = []
    return {
        "id": s.id,
        "path": s.path,
        "kind": s.kind,
        "scopeId": s.scope_id,
        "params": [[t, n] for t, n in s.params],
        "call": s.call,
        "entry": list(s.entry),
        "exit": exit_,
    }


def serialize_program(prog: FlatProgram) -> str:
    obj = {
        "version": prog.version,
        "states": [_state_json(s) for s in prog.states],
        "transitions": [
            {"from": t.source, "outcome": t.outcome, "guard": t.guard, "to": t.target,
             "bindings": dict(t.bindings)}
            for t in prog.transitions
        ],
        "initial": [{"state": sid, "bindings": dict(b)} for sid, b in prog.initial],
    }
    return json.dumps(obj, ensure_ascii=False, indent=1) + "\n"


def _expect(cond, message):
    if not cond:
        raise MalformedProgram(message)


def _expr_text(text, where):
    _expect(isinstance(text, str), f"{where}: expression must be a string")
    try:
        parse_expression(text)
    except ParseError as exc:
        raise MalformedProgram(f"{where}: {exc}") from None
    return text


def _bindings(obj, where):
    _expect(isinstance(obj, dict), f"{where}: bindings must be an object")
    for k in obj:
        _expect(isinstance(k, str), f"{where}: binding names must be strings")
    return tuple((k, _expr_text(v, f"{where}.{k}")) for k, v in obj.items())


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def deserialize_program(text) -> FlatProgram:
    """Parse and validate an ``.lrf`` document; raises MalformedProgram."""
    try:
        obj = json.loads(text)
    except (ValueError, TypeError) as exc:
        raise MalformedProgram(f"not valid JSON: {exc}") from None
    _expect(isinstance(obj, dict), "program must be a JSON object")
    _expect(list(obj) == ["version", "states", "transitions", "initial"],
            "program keys must be exactly version, states, transitions, initial")
    _expect(obj["version"] == LRF_VERSION, f"unsupported version {obj['version']!r}")
    raw_states = obj["states"]
    _expect(isinstance(raw_states, list) and raw_states, "states must be a non-empty array")
    n = len(raw_states)
    states = []
    for i, s in enumerate(raw_states):
        where = f"states[{i}]"
        _expect(isinstance(s, dict) and list(s) == ["id", "path", "kind", "scopeId", "params", "call", "entry", "exit"],
                f"{where}: malformed state object")
        _expect(s["id"] == i and _is_int(s["id"]), f"{where}: ids must be dense and ordered")
        _expect(isinstance(s["path"], str), f"{where}: path must be a string")
        kind = s["kind"]
        _expect(kind in (COMPOSITE, ATOMIC, EXIT), f"{where}: unknown kind {kind!r}")
        scope = s["scopeId"]
        if i == 0:
            _expect(scope is None and kind == COMPOSITE, "state 0 must be the root composite")
        else:
            _expect(_is_int(scope) and 0 <= scope < i and raw_states[scope].get("kind") == COMPOSITE,
                    f"{where}: scopeId must reference an earlier composite")
        params = s["params"]
        _expect(isinstance(params, list) and all(
            isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p) for p in params),
            f"{where}: params must be [type, name] pairs")
        call = s["call"]
        entry = s["entry"]
        _expect(isinstance(entry, list), f"{where}: entry must be an array")
        if kind == ATOMIC:
            _expect(isinstance(call, dict) and list(call) == ["receiver", "interface", "method", "args"]
                    and all(isinstance(call[k], str) for k in ("receiver", "interface", "method"))
                    and isinstance(call["args"], list), f"{where}: malformed call")
            call = dict(call, args=[_expr_text(a, f"{where}.call") for a in call["args"]])
            _expect(isinstance(s["exit"], list) and s["exit"] and all(
                isinstance(r, list) and len(r) == 2 and isinstance(r[1], str) for r in s["exit"]),
                f"{where}: exit must be a non-empty array of [condition, outcome]")
            exit_ = tuple((_expr_text(c, f"{where}.exit"), o) for c, o in s["exit"])
        elif kind == EXIT:
            _expect(call is None and not entry and isinstance(s["exit"], str), f"{where}: malformed exit state")
            exit_ = s["exit"]
        else:
            _expect(call is None and not entry and s["exit"] == [], f"{where}: malformed composite")
            exit_ = ()
        states.append(FlatState(i, s["path"], kind, scope, tuple((t, nm) for t, nm in params), call,
                                tuple(_expr_text(e, f"{where}.entry") for e in entry), exit_))

    raw_trans = obj["transitions"]
    _expect(isinstance(raw_trans, list), "transitions must be an array")
    transitions = []
    inits = set()
    for i, t in enumerate(raw_trans):
        where = f"transitions[{i}]"
        _expect(isinstance(t, dict) and list(t) == ["from", "outcome", "guard", "to", "bindings"],
                f"{where}: malformed transition object")
        src, dst = t["from"], t["to"]
        _expect(_is_int(src) and 0 <= src < n and _is_int(dst) and 0 <= dst < n, f"{where}: state id out of range")
        if t["outcome"] is None:
            _expect(states[src].kind == COMPOSITE and states[dst].scope_id == src and t["guard"] is None,
                    f"{where}: malformed initial entry")
            _expect(src not in inits, f"{where}: second initial entry for state {src}")
            inits.add(src)
        else:
            _expect(isinstance(t["outcome"], str), f"{where}: outcome must be a string")
            _expect(states[src].kind != EXIT and states[src].scope_id is not None
                    and states[src].scope_id == states[dst].scope_id,
                    f"{where}: endpoints must be siblings")
        guard = None if t["guard"] is None else _expr_text(t["guard"], f"{where}.guard")
        transitions.append(FlatTransition(src, t["outcome"], guard, dst, _bindings(t["bindings"], where)))
    for s in states:
        _expect(s.kind != COMPOSITE or s.id in inits, f"composite {s.id} has no initial entry")

    raw_init = obj["initial"]
    _expect(isinstance(raw_init, list) and raw_init, "initial must be a non-empty array")
    chain = []
    for i, entry in enumerate(raw_init):
        _expect(isinstance(entry, dict) and list(entry) == ["state", "bindings"]
                and _is_int(entry["state"]) and 0 <= entry["state"] < n, f"initial[{i}]: malformed entry")
        chain.append((entry["state"], _bindings(entry["bindings"], f"initial[{i}]")))
    _expect(chain[0] == (0, ()), "initial chain must start at the root without bindings")
    return FlatProgram(LRF_VERSION, tuple(states), tuple(transitions), tuple(chain))
