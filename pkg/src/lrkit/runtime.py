"""Expression evaluation and the model-tree interpreter.

The interpreter walks the linked models directly. It is the reference the
flat-program RTS (:mod:`lrkit.rts`) is checked against, so both share the
evaluator, the binding rules and the trace recorder, but not control flow.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ast as A
from .errors import (BindingTypeError, DivisionByZero, EntryViolated, ExecutionError,
                     NoOutcome, NoTransition, UnboundParameter)
from .symbols import LinkedWorkspace
from .trace import ExecutionTrace, Recorder
from .values import ApiObject, Opaque, Record


@dataclass(frozen=True)
class RunLimits:
    max_steps: int = 10000

    def __post_init__(self):
        if not isinstance(self.max_steps, int) or self.max_steps < 1:
            raise ValueError("max_steps must be a positive integer")


class Environment:
    """Stack of parameter frames; lookups search innermost first."""

    def __init__(self):
        self.frames = []

    def push(self, scope, values: dict):
        self.frames.append((scope, values))

    def pop(self):
        return self.frames.pop()

    @property
    def top(self) -> dict:
        return self.frames[-1][1]

    def lookup(self, name):
        for _, values in reversed(self.frames):
            if name in values:
                return values[name]
        raise UnboundParameter(name)


def _numeric(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _div(a, b):
    if b == 0:
        raise DivisionByZero()
    if isinstance(a, int) and isinstance(b, int):
        q = abs(a) // abs(b)
        return q if (a < 0) == (b < 0) else -q
    return a / b


def _arith(op, a, b):
    if not (isinstance(a, int) and isinstance(b, int)):
        a, b = float(a), float(b)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    return _div(a, b)


def eval_expr(e, env: Environment, result=None):
    """Evaluate ``e`` strictly; ``&&`` and ``||`` short-circuit."""
    if isinstance(e, A.Literal):
        return e.value
    if isinstance(e, A.Name):
        return env.lookup(e.name)
    if isinstance(e, A.ResultField):
        if not isinstance(result, Record):
            raise UnboundParameter("result")
        return result.get(e.field)
    if isinstance(e, A.Unary):
        v = eval_expr(e.operand, env, result)
        return (not v) if e.op == "!" else -v
    if isinstance(e, A.Binary):
        op = e.op
        if op == "&&":
            return bool(eval_expr(e.left, env, result)) and bool(eval_expr(e.right, env, result))
        if op == "||":
            return bool(eval_expr(e.left, env, result)) or bool(eval_expr(e.right, env, result))
        a = eval_expr(e.left, env, result)
        b = eval_expr(e.right, env, result)
        if op in ("+", "-", "*", "/"):
            return _arith(op, a, b)
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        return a >= b
    raise TypeError(f"not an expression: {e!r}")


def coerce(value, type_name, name):
    """Check a top-level binding against its declared type (Int widens to Double)."""
    if type_name == "Double":
        if _numeric(value):
            return float(value)
    elif type_name == "Int":
        if isinstance(value, int) and not isinstance(value, bool):
            return value
    elif type_name == "Bool":
        if isinstance(value, bool):
            return value
    elif type_name == "String":
        if isinstance(value, str):
            return value
    elif isinstance(value, ApiObject) and value.interface == type_name:
        return value
    elif isinstance(value, Opaque) and value.type == type_name:
        return value
    raise BindingTypeError(f"parameter '{name}' needs {type_name}, got {value!r}")


def bind_root(params, top_bindings, world) -> dict:
    """Frame for the root process.

    Interface-typed parameters missing from ``top_bindings`` are bound to
    the world's device implementing that interface.
    """
    top_bindings = dict(top_bindings or {})
    declared = {name for _, name in params}
    for extra in sorted(set(top_bindings) - declared):
        raise BindingTypeError(f"root process has no parameter '{extra}'")
    frame = {}
    for type_name, name in params:
        if name in top_bindings:
            frame[name] = coerce(top_bindings[name], type_name, name)
            continue
        device = world.device(type_name) if world is not None else None
        if device is None:
            raise UnboundParameter(name)
        frame[name] = device
    return frame


def bind_child(params, bindings, env: Environment):
    """Frame for a node being entered plus the evaluated explicit bindings.

    ``params`` is a list of (type, name); ``bindings`` a list of
    (name, Expr) evaluated in the enclosing net's frame. Unbound parameters
    are propagated by name from that frame.
    """
    explicit = [(name, eval_expr(expr, env)) for name, expr in bindings]
    values = dict(explicit)
    parent = env.top
    frame = {}
    for _, name in params:
        if name in values:
            frame[name] = values[name]
        elif name in parent:
            frame[name] = parent[name]
        else:
            raise UnboundParameter(name)
    return frame, explicit


def dispatch_call(world, path, interface, method, receiver, args, rec: Recorder):
    if not isinstance(receiver, ApiObject):
        raise BindingTypeError(f"receiver of {interface}.{method} at {path} is not a device")
    result = world.dispatch(interface, method, list(args), receiver=receiver)
    rec.call(path, interface, method, args, result)
    return result


class RootNotFound(LookupError):
    pass


class NotAProcess(ValueError):
    pass


def find_process(ws: LinkedWorkspace, name):
    model = ws.get(A.PROCESS, name)
    if model is not None:
        return model
    if ws.find(name):
        raise NotAProcess(f"{name} is not a process")
    raise RootNotFound(f"no model named {name}")


def _params(model):
    return [(p.type, p.name) for p in model.parameters]


def _pairs(bindings):
    return [(b.param, b.expr) for b in bindings]


class _Interpreter:
    def __init__(self, ws, world, rec):
        self.ws = ws
        self.world = world
        self.rec = rec
        self.env = Environment()

    def run_model(self, model, path, frame):
        self.env.push(path, frame)
        self.rec.enter(path)
        if model.kind == A.ACTION:
            return self.run_action(model, path)
        return self.run_net(model, path)

    def run_action(self, action, path):
        body = action.body
        for i, cond in enumerate(body.entry):
            if not eval_expr(cond, self.env):
                raise EntryViolated(path, i)
        call = body.execution
        receiver = self.env.lookup(call.receiver)
        args = [eval_expr(a, self.env) for a in call.args]
        interface = dict((p.name, p.type) for p in action.parameters)[call.receiver]
        result = dispatch_call(self.world, path, interface, call.method, receiver, args, self.rec)
        for i, rule in enumerate(body.exit):
            if eval_expr(rule.condition, self.env, result):
                self.rec.outcome(path, rule.outcome, i)
                self.rec.exit(path, rule.outcome)
                self.env.pop()
                return rule.outcome
        raise NoOutcome(path)

    def run_net(self, net, path):
        body = net.body
        nodes = {}
        for n in body.nodes:
            nodes.setdefault(n.name, n)
        node = body.initial.node
        frame, _ = bind_child(_params(self.ws.node_target(net, nodes[node])), _pairs(body.initial.bindings), self.env)
        while True:
            child_path = f"{path}/{node}"
            outcome = self.run_model(self.ws.node_target(net, nodes[node]), child_path, frame)
            chosen = None
            for t in body.transitions:
                if t.source == node and t.outcome == outcome:
                    if t.guard is None or eval_expr(t.guard, self.env):
                        chosen = t
                        break
            if chosen is None:
                raise NoTransition(child_path, outcome)
            if chosen.end is not None:
                self.rec.exit(path, chosen.end)
                self.env.pop()
                return chosen.end
            target = self.ws.node_target(net, nodes[chosen.target])
            frame, explicit = bind_child(_params(target), _pairs(chosen.bindings), self.env)
            self.rec.transition(child_path, f"{path}/{chosen.target}", explicit)
            node = chosen.target


def interpret(ws: LinkedWorkspace, root: str, world, top_bindings=None,
              limits: RunLimits = RunLimits(), listener=None) -> ExecutionTrace:
    """Run process ``root`` against ``world`` and return its trace.

    Raises an :class:`ExecutionError` subclass on failure; the partial trace
    is attached as ``exc.trace``.
    """
    process = find_process(ws, root)
    rec = Recorder(limits.max_steps)
    if listener is not None:
        rec.listeners.append(listener)
    interp = _Interpreter(ws, world, rec)
    try:
        frame = bind_root(_params(process), top_bindings, world)
        outcome = interp.run_model(process, process.name, frame)
        rec.end(outcome)
    except ExecutionError as exc:
        exc.trace = rec.trace
        raise
    return rec.trace
