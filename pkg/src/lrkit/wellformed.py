"""Context conditions WF01..WF13 over a linked workspace.

Each rule is a function ``ws -> list[Diagnostic]`` registered in ``RULES``.
Rules are written so that a violation is reported by exactly one rule:
where two rules could both see a problem, one of them defers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import ast as A
from .diagnostics import ERROR, WARNING, Diagnostic
from .symbols import NODE_LEVEL, LinkedWorkspace

NUMERIC = ("Int", "Double")
COMPARISON = ("<", "<=", ">", ">=")
ARITHMETIC = ("+", "-", "*", "/")


class UnknownRule(KeyError):
    pass


@dataclass(frozen=True)
class RuleReport:
    rule: str
    diagnostics: tuple[Diagnostic, ...]

    @property
    def errors(self):
        return [d for d in self.diagnostics if d.is_error]

    @property
    def warnings(self):
        return [d for d in self.diagnostics if not d.is_error]


# -- expression typing -------------------------------------------------------------

@dataclass(frozen=True)
class TypeIssue:
    message: str
    pos: object
    result_ref: bool = False  # issue is a `result` reference where none is allowed


def type_of(expr, scope, result_record=None, allow_result=False):
    """Infer the type of ``expr``.

    ``scope`` maps parameter names to type names. ``result_record`` is the
    RecordDecl returned by the execution call (or None when the return type
    is void, opaque or unknown). Returns ``(type_or_None, issues)``; a type
    of None means "unknown" and suppresses follow-on issues.
    """
    issues = []

    def go(e):
        if isinstance(e, A.Literal):
            return e.type
        if isinstance(e, A.Name):
            if e.name not in scope:
                issues.append(TypeIssue(f"unknown parameter '{e.name}'", e.pos))
                return None
            return scope[e.name]
        if isinstance(e, A.ResultField):
            if not allow_result:
                issues.append(TypeIssue("'result' is not available here", e.pos, result_ref=True))
                return None
            if result_record is None:
                return None
            t = result_record.field_type(e.field)
            if t is None:
                issues.append(TypeIssue(f"record {result_record.name} has no field '{e.field}'", e.pos))
            return t
        if isinstance(e, A.Unary):
            t = go(e.operand)
            if t is None:
                return None
            if e.op == "!":
                if t != "Bool":
                    issues.append(TypeIssue(f"operator ! needs Bool, found {t}", e.pos))
                return "Bool"
            if t not in NUMERIC:
                issues.append(TypeIssue(f"operator - needs a number, found {t}", e.pos))
                return None
            return t
        if isinstance(e, A.Binary):
            lt, rt = go(e.left), go(e.right)
            if e.op in ("&&", "||"):
                for t in (lt, rt):
                    if t is not None and t != "Bool":
                        issues.append(TypeIssue(f"operator {e.op} needs Bool operands, found {t}", e.pos))
                return "Bool"
            if lt is None or rt is None:
                return "Bool" if e.op in COMPARISON + ("==", "!=") else None
            if e.op in ("==", "!="):
                if lt != rt and not (lt in NUMERIC and rt in NUMERIC):
                    issues.append(TypeIssue(f"cannot compare {lt} with {rt}", e.pos))
                return "Bool"
            if lt not in NUMERIC or rt not in NUMERIC:
                issues.append(TypeIssue(f"operator {e.op} needs numbers, found {lt} and {rt}", e.pos))
                return "Bool" if e.op in COMPARISON else None
            if e.op in COMPARISON:
                return "Bool"
            return "Int" if lt == rt == "Int" else "Double"
        raise TypeError(f"not an expression: {e!r}")

    t = go(expr)
    return t, issues


# -- helpers ---------------------------------------------------------------------------

def _err(rule, message, pos):
    return Diagnostic(ERROR, rule, message, pos)


def _nets(ws):
    for kind in A.NET_KINDS:
        yield from ws.of_kind(kind)


def _scope(params):
    scope = {}
    for p in params:
        scope.setdefault(p.name, p.type)
    return scope


def _targets(ws, net):
    """node name -> referenced model, first declaration wins."""
    out = {}
    for node in net.body.nodes:
        if node.name not in out:
            out[node.name] = ws.node_target(net, node)
    return out


def _incoming_edges(net):
    """(target node, bindings, pos) for the initial edge and every node transition."""
    body = net.body
    yield body.initial.node, body.initial.bindings, body.initial.pos
    for t in body.transitions:
        if t.target is not None:
            yield t.target, t.bindings, t.pos


def _execution_method(ws, action):
    """(interface, method) called by the action's execution block, or (None, None)."""
    call = action.body.execution
    scope = _scope(action.parameters)
    iface = ws.interface(scope.get(call.receiver, ""))
    if iface is None:
        return None, None
    return iface, iface.method(call.method)


def _result_record(ws, action):
    _, method = _execution_method(ws, action)
    if method is None or method.return_type == "void":
        return None
    return ws.record(method.return_type)


def _article(word):
    return f"an {word}" if word[0] in "aeiou" else f"a {word}"


def _at(pos):
    return f"{pos.line}:{pos.col}"


def _param_types(model):
    return _scope(model.parameters)


# -- rules -------------------------------------------------------------------------------

def wf01_unique_nodes(ws):
    out = []
    for net in _nets(ws):
        seen = {}
        for node in net.body.nodes:
            if node.name in seen:
                out.append(_err("WF01", f"node '{node.name}' declared twice in {net.name} (first at {_at(seen[node.name])})", node.pos))
            else:
                seen[node.name] = node.pos
    return out


def wf02_transition_sources(ws):
    out = []
    for net in _nets(ws):
        targets = _targets(ws, net)
        for t in net.body.transitions:
            model = targets.get(t.source)
            if model is None:
                out.append(_err("WF02", f"transition source '{t.source}' is not a node of {net.name}", t.pos))
            elif t.outcome not in model.outcomes:
                out.append(_err("WF02", f"{model.name} has no outcome '{t.outcome}' (node {t.source})", t.pos))
            if t.target is not None and t.target not in targets:
                out.append(_err("WF02", f"transition target '{t.target}' is not a node of {net.name}", t.pos))
    return out


def wf03_execution_call(ws):
    out = []
    for action in ws.of_kind(A.ACTION):
        call = action.body.execution
        scope = _scope(action.parameters)
        rtype = scope.get(call.receiver)
        if rtype is None:
            out.append(_err("WF03", f"receiver '{call.receiver}' is not a parameter of {action.name}", call.pos))
            continue
        iface = ws.interface(rtype)
        if iface is None:
            out.append(_err("WF03", f"receiver '{call.receiver}' has type {rtype}, which is not an interface", call.pos))
            continue
        method = iface.method(call.method)
        if method is None:
            out.append(_err("WF03", f"interface {iface.name} declares no method '{call.method}'", call.pos))
            continue
        if len(call.args) != len(method.params):
            out.append(_err(
                "WF03",
                f"{iface.name}.{method.name} expects {len(method.params)} argument(s), got {len(call.args)}",
                call.pos))
            continue
        for arg, p in zip(call.args, method.params):
            if ws.is_interface(p.type):
                if not (isinstance(arg, A.Name) and scope.get(arg.name) == p.type):
                    out.append(_err("WF03", f"argument '{p.name}' must be a parameter of interface type {p.type}", arg.pos))
                continue
            t, issues = type_of(arg, scope)
            for issue in issues:
                out.append(_err("WF03", f"in argument '{p.name}': {issue.message}", issue.pos))
            if t is not None and not issues and t != p.type:
                out.append(_err("WF03", f"argument '{p.name}' of {iface.name}.{method.name} needs {p.type}, found {t}", arg.pos))
    return out


def wf04_no_api_in_nets(ws):
    out = []
    for net in _nets(ws):
        exprs = [b.expr for b in net.body.initial.bindings]
        for t in net.body.transitions:
            if t.guard is not None:
                exprs.append(t.guard)
            exprs.extend(b.expr for b in t.bindings)
        for e in exprs:
            for sub in A.walk(e):
                if isinstance(sub, A.ResultField):
                    out.append(_err("WF04", f"{net.kind.lower()} {net.name} references the robot API via 'result.{sub.field}'", sub.pos))
    return out


def wf05_binding_completeness(ws):
    out = []
    for net in _nets(ws):
        targets = _targets(ws, net)
        enclosing = _param_types(net)
        for node, bindings, pos in _incoming_edges(net):
            model = targets.get(node)
            if model is None:
                continue
            declared = _param_types(model)
            bound = set()
            for b in bindings:
                if b.param not in declared:
                    out.append(_err("WF05", f"{model.name} has no parameter '{b.param}'", b.pos))
                elif b.param in bound:
                    out.append(_err("WF05", f"parameter '{b.param}' bound twice", b.pos))
                bound.add(b.param)
            for p in model.parameters:
                if p.name in bound:
                    continue
                if enclosing.get(p.name) != p.type:
                    out.append(_err("WF05", f"parameter '{p.type} {p.name}' of node '{node}' is neither bound nor propagated from {net.name}", pos))
    return out


def wf06_expression_types(ws):
    out = []

    def report(issues, context):
        for issue in issues:
            out.append(_err("WF06", f"{context}: {issue.message}", issue.pos))

    for action in ws.of_kind(A.ACTION):
        scope = _scope(action.parameters)
        for e in action.body.entry:
            t, issues = type_of(e, scope)
            report(issues, "entry rule")
            if t is not None and t != "Bool":
                out.append(_err("WF06", f"entry rule must be Bool, found {t}", e.pos))
        iface, method = _execution_method(ws, action)
        record = _result_record(ws, action)
        result_known = method is not None
        for rule in action.body.exit:
            t, issues = type_of(rule.condition, scope, record, allow_result=True)
            if result_known and record is None:
                for sub in A.walk(rule.condition):
                    if isinstance(sub, A.ResultField):
                        issues.append(TypeIssue(
                            f"{iface.name}.{method.name} returns {method.return_type}, which has no fields", sub.pos))
            report(issues, f"exit rule for '{rule.outcome}'")
            if t is not None and t != "Bool":
                out.append(_err("WF06", f"exit rule for '{rule.outcome}' must be Bool, found {t}", rule.pos))

    for net in _nets(ws):
        scope = _scope(net.parameters)
        targets = _targets(ws, net)
        for node, bindings, _ in _incoming_edges(net):
            model = targets.get(node)
            if model is None:
                continue
            declared = _param_types(model)
            for b in bindings:
                ptype = declared.get(b.param)
                if ptype is None or ws.is_interface(ptype):
                    continue
                t, issues = type_of(b.expr, scope)
                report([i for i in issues if not i.result_ref], f"binding '{b.param}'")
                if t is not None and not issues and t != ptype:
                    out.append(_err("WF06", f"binding '{b.param}' needs {ptype}, found {t}", b.pos))
        for t in net.body.transitions:
            if t.guard is None:
                continue
            gt, issues = type_of(t.guard, scope)
            report([i for i in issues if not i.result_ref], "guard")
            if gt is not None and gt != "Bool":
                out.append(_err("WF06", f"guard must be Bool, found {gt}", t.guard.pos))
    return out


def wf07_initial(ws):
    out = []
    for net in _nets(ws):
        init = net.body.initial
        if init is None:
            out.append(_err("WF07", f"{net.name} has no initial node", net.pos))
        elif net.body.node(init.node) is None:
            out.append(_err("WF07", f"initial node '{init.node}' is not a node of {net.name}", init.pos))
    return out


def wf08_has_outcome(ws):
    return [_err("WF08", f"{net.kind.lower()} {net.name} has no 'end' transition", net.pos)
            for net in _nets(ws) if not net.body.outcomes]


def wf09_reachability(ws):
    out = []
    for net in _nets(ws):
        body = net.body
        if body.node(body.initial.node) is None:
            continue
        succ = {}
        for t in body.transitions:
            if t.target is not None:
                succ.setdefault(t.source, []).append(t.target)
        seen = {body.initial.node}
        queue = deque(seen)
        while queue:
            for nxt in succ.get(queue.popleft(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        for node in body.nodes:
            if node.name not in seen:
                out.append(Diagnostic(WARNING, "WF09", f"node '{node.name}' is unreachable in {net.name}", node.pos))
    return out


def wf10_level_discipline(ws):
    out = []
    for net in _nets(ws):
        expected = NODE_LEVEL[net.kind]
        for node in net.body.nodes:
            target = ws.node_target(net, node)
            if target.kind != expected:
                out.append(_err(
                    "WF10",
                    f"{net.kind.lower()} node '{node.name}' must reference {_article(expected.lower())}, "
                    f"but {target.name} is {_article(target.kind.lower())}", node.pos))
    return out


def wf11_robotapi_interfaces_only(ws):
    out = []
    for dom in ws.of_kind(A.DOMAIN):
        if dom.body.role != A.ROLE_ROBOTAPI:
            continue
        for decl in dom.body.types + dom.body.records:
            what = "type" if isinstance(decl, A.TypeDecl) else "record"
            out.append(_err("WF11", f"robotapi model {dom.name} may only declare interfaces, found {what} {decl.name}", decl.pos))
    return out


def wf12_exit_outcomes(ws):
    out = []
    for action in ws.of_kind(A.ACTION):
        rules = action.body.exit
        if not rules:
            out.append(_err("WF12", f"action {action.name} has no exit rules", action.pos))
        seen = {}
        for rule in rules:
            if rule.outcome in seen:
                out.append(_err("WF12", f"outcome '{rule.outcome}' of {action.name} already used at {_at(seen[rule.outcome])}", rule.pos))
            else:
                seen[rule.outcome] = rule.pos
    return out


def wf13_interface_bindings(ws):
    out = []
    for net in _nets(ws):
        scope = _scope(net.parameters)
        targets = _targets(ws, net)
        for node, bindings, _ in _incoming_edges(net):
            model = targets.get(node)
            if model is None:
                continue
            declared = _param_types(model)
            for b in bindings:
                ptype = declared.get(b.param)
                if ptype is None or not ws.is_interface(ptype):
                    continue
                if not (isinstance(b.expr, A.Name) and scope.get(b.expr.name) == ptype):
                    out.append(_err("WF13", f"interface parameter '{b.param}' must be bound to a {ptype} parameter", b.pos))
    return out


RULES = {
    "WF01": wf01_unique_nodes,
    "WF02": wf02_transition_sources,
    "WF03": wf03_execution_call,
    "WF04": wf04_no_api_in_nets,
    "WF05": wf05_binding_completeness,
    "WF06": wf06_expression_types,
    "WF07": wf07_initial,
    "WF08": wf08_has_outcome,
    "WF09": wf09_reachability,
    "WF10": wf10_level_discipline,
    "WF11": wf11_robotapi_interfaces_only,
    "WF12": wf12_exit_outcomes,
    "WF13": wf13_interface_bindings,
}


def check_rule(ws: LinkedWorkspace, rule: str) -> RuleReport:
    try:
        fn = RULES[rule]
    except KeyError:
        raise UnknownRule(rule) from None
    return RuleReport(rule, tuple(sorted(fn(ws), key=Diagnostic.sort_key)))


def check_all(ws: LinkedWorkspace) -> list[RuleReport]:
    return [check_rule(ws, rule) for rule in sorted(RULES)]


def findings(reports) -> list[Diagnostic]:
    return sorted((d for r in reports for d in r.diagnostics), key=Diagnostic.sort_key)


def error_count(reports) -> int:
    return sum(len(r.errors) for r in reports)
