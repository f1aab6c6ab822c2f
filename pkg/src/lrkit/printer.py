"""Canonical text rendering of models and expressions."""

from __future__ import annotations

from decimal import Decimal

from . import ast as A
from .parser import PRECEDENCE, UNARY_PRECEDENCE

INDENT = "    "


def format_double(x: float) -> str:
    """Shortest round-trip decimal text for ``x`` without an exponent."""
    text = repr(float(x))
    if "e" in text or "E" in text:
        text = format(Decimal(text), "f")
    if "." not in text:
        text += ".0"
    return text


def quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t") + '"'


def _prec(e) -> int:
    if isinstance(e, A.Binary):
        return PRECEDENCE[e.op]
    if isinstance(e, A.Unary):
        return UNARY_PRECEDENCE
    return UNARY_PRECEDENCE + 1


def format_expr(e) -> str:
    if isinstance(e, A.Literal):
        if e.type == "Bool":
            return "true" if e.value else "false"
        if e.type == "Double":
            return format_double(e.value)
        if e.type == "String":
            return quote(e.value)
        return str(e.value)
    if isinstance(e, A.Name):
        return e.name
    if isinstance(e, A.ResultField):
        return f"result.{e.field}"
    if isinstance(e, A.Unary):
        inner = format_expr(e.operand)
        if _prec(e.operand) < UNARY_PRECEDENCE:
            inner = f"({inner})"
        return f"{e.op}{inner}"
    if isinstance(e, A.Binary):
        p = PRECEDENCE[e.op]
        left = format_expr(e.left)
        right = format_expr(e.right)
        if _prec(e.left) < p:
            left = f"({left})"
        # Left-associative: an equal-precedence right operand needs parens.
        if _prec(e.right) <= p:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression: {e!r}")


def _bindings(bindings) -> str:
    if not bindings:
        return ""
    inner = ", ".join(f"{b.param} = {format_expr(b.expr)}" for b in bindings)
    return f" with ({inner})"


def _params(params, out, depth=1):
    pad = INDENT * depth
    out.append(f"{pad}parameters {{")
    for p in params:
        out.append(f"{pad}{INDENT}{p.type} {p.name};")
    out.append(f"{pad}}}")


def pretty_print(model: A.ModelAst) -> str:
    out = []
    keyword = A.KEYWORD_OF_KIND[model.kind]
    body = model.body
    if model.kind == A.DOMAIN:
        out.append(f"{keyword} {model.name} {body.role} {{")
        for iface in body.interfaces:
            out.append(f"{INDENT}interface {iface.name} {{")
            for m in iface.methods:
                params = ", ".join(f"{p.type} {p.name}" for p in m.params)
                out.append(f"{INDENT * 2}{m.return_type} {m.name}({params});")
            out.append(f"{INDENT}}}")
        for t in body.types:
            out.append(f"{INDENT}type {t.name};")
        for r in body.records:
            out.append(f"{INDENT}record {r.name} {{")
            for f in r.fields:
                out.append(f"{INDENT * 2}{f.type} {f.name};")
            out.append(f"{INDENT}}}")
    elif model.kind == A.ACTION:
        out.append(f"{keyword} {model.name} {{")
        _params(body.parameters, out)
        call = body.execution
        args = ", ".join(format_expr(a) for a in call.args)
        out.append(f"{INDENT}execution {{")
        out.append(f"{INDENT * 2}{call.receiver}.{call.method}({args})")
        out.append(f"{INDENT}}}")
        if body.entry:
            out.append(f"{INDENT}entry {{")
            for e in body.entry:
                out.append(f"{INDENT * 2}{format_expr(e)};")
            out.append(f"{INDENT}}}")
        out.append(f"{INDENT}exit {{")
        for rule in body.exit:
            out.append(f"{INDENT * 2}{format_expr(rule.condition)} -> {rule.outcome};")
        out.append(f"{INDENT}}}")
    else:
        out.append(f"{keyword} {model.name} {{")
        _params(body.parameters, out)
        out.append(f"{INDENT}nodes {{")
        for n in body.nodes:
            out.append(f"{INDENT * 2}{n.name}: {n.model};")
        out.append(f"{INDENT}}}")
        out.append(f"{INDENT}initial {body.initial.node}{_bindings(body.initial.bindings)};")
        out.append(f"{INDENT}transitions {{")
        for t in body.transitions:
            guard = f" when {format_expr(t.guard)}" if t.guard is not None else ""
            target = f"end {t.end}" if t.end is not None else t.target + _bindings(t.bindings)
            out.append(f"{INDENT * 2}{t.source}.{t.outcome}{guard} -> {target};")
        out.append(f"{INDENT}}}")
    out.append("}")
    return "\n".join(out) + "\n"
