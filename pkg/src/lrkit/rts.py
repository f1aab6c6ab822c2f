"""Minimal run-time system for flat programs (``.lrf``).

The RTS knows nothing about models: it walks state ids, scope ids and
resolved transitions. Its traces must be byte-identical to the
interpreter's on the same inputs.
"""

from __future__ import annotations

from .errors import EntryViolated, ExecutionError, MalformedProgram, NoOutcome, NoTransition
from .parser import parse_expression
from .runtime import (Environment, RunLimits, bind_child, bind_root, dispatch_call,
                      eval_expr)
from .statechart import ATOMIC, COMPOSITE, EXIT, FlatProgram, deserialize_program
from .trace import ExecutionTrace, Recorder


class _Loaded:
    """Program with expressions parsed and transitions indexed."""

    def __init__(self, prog: FlatProgram):
        cache = {}

        def expr(text):
            if text not in cache:
                cache[text] = parse_expression(text)
            return cache[text]

        self.states = prog.states
        self.entry = {s.id: [expr(e) for e in s.entry] for s in prog.states}
        self.exit = {s.id: [(expr(c), o) for c, o in s.exit] for s in prog.states if s.kind == ATOMIC}
        self.args = {s.id: [expr(a) for a in s.call["args"]] for s in prog.states if s.kind == ATOMIC}
        self.init = {}
        self.outgoing = {}
        for t in prog.transitions:
            item = (None if t.guard is None else expr(t.guard), t.target,
                    [(name, expr(e)) for name, e in t.bindings])
            if t.outcome is None:
                self.init[t.source] = item
            else:
                self.outgoing.setdefault((t.source, t.outcome), []).append(item)
        self._check_chain(prog.initial)

    def _check_chain(self, chain):
        cur = 0
        for sid, bindings in chain[1:]:
            _, target, binds = self.init[cur]
            if sid != target or [n for n, _ in binds] != [n for n, _ in bindings]:
                raise MalformedProgram("initial chain disagrees with the composites' initial entries")
            cur = sid
        if self.states[cur].kind != ATOMIC:
            raise MalformedProgram("initial chain must end at an atomic state")


def execute_flat(prog, world, top_bindings=None, limits: RunLimits = RunLimits(),
                 listener=None) -> ExecutionTrace:
    """Execute a FlatProgram (or its serialized text) against ``world``."""
    if isinstance(prog, (str, bytes)):
        prog = deserialize_program(prog)
    try:
        loaded = _Loaded(prog)
    except (KeyError, IndexError) as exc:
        raise MalformedProgram(f"inconsistent program: {exc}") from None
    rec = Recorder(limits.max_steps)
    if listener is not None:
        rec.listeners.append(listener)
    try:
        _run(loaded, world, top_bindings, rec)
    except ExecutionError as exc:
        exc.trace = rec.trace
        raise
    return rec.trace


def _run(p: _Loaded, world, top_bindings, rec: Recorder):
    states = p.states
    env = Environment()
    root = states[0]
    env.push(0, bind_root(root.params, top_bindings, world))
    rec.enter(root.path)
    cur = 0
    while True:
        state = states[cur]
        if state.kind == COMPOSITE:
            _, target, bindings = p.init[cur]
            frame, _ = bind_child(states[target].params, bindings, env)
            env.push(target, frame)
            rec.enter(states[target].path)
            cur = target
            continue
        if state.kind != ATOMIC:
            raise MalformedProgram(f"control reached non-executable state {cur}")

        for i, cond in enumerate(p.entry[cur]):
            if not eval_expr(cond, env):
                raise EntryViolated(state.path, i)
        call = state.call
        receiver = env.lookup(call["receiver"])
        args = [eval_expr(a, env) for a in p.args[cur]]
        result = dispatch_call(world, state.path, call["interface"], call["method"], receiver, args, rec)
        for i, (cond, outcome) in enumerate(p.exit[cur]):
            if eval_expr(cond, env, result):
                break
        else:
            raise NoOutcome(state.path)
        rec.outcome(state.path, outcome, i)
        rec.exit(state.path, outcome)
        env.pop()

        # Route the outcome upwards until some composite continues with a sibling.
        child = cur
        while True:
            scope = states[child].scope_id
            chosen = None
            for guard, target, bindings in p.outgoing.get((child, outcome), ()):
                if guard is None or eval_expr(guard, env):
                    chosen = (target, bindings)
                    break
            if chosen is None:
                raise NoTransition(states[child].path, outcome)
            target, bindings = chosen
            if states[target].kind == EXIT:
                outcome = states[target].exit
                rec.exit(states[scope].path, outcome)
                env.pop()
                if states[scope].scope_id is None:
                    rec.end(outcome)
                    return
                child = scope
                continue
            frame, explicit = bind_child(states[target].params, bindings, env)
            rec.transition(states[child].path, states[target].path, explicit)
            env.push(target, frame)
            rec.enter(states[target].path)
            cur = target
            break
