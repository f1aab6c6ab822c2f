"""Recursive-descent parser for the five model languages.

Parsing stops at the first problem; the resulting :class:`ParseError`
always carries exactly one positioned diagnostic.
"""

from __future__ import annotations

import os

from . import ast as A
from .diagnostics import ERROR, Diagnostic, ParseError, SourcePos
from .lexer import Token, decode, tokenize

# Binary operator precedence, loosest first.
PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "<": 3, "<=": 3, ">": 3, ">=": 3, "==": 3, "!=": 3,
    "+": 4, "-": 4,
    "*": 5, "/": 5,
}
UNARY_PRECEDENCE = 6
MAX_NESTING = 200


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0
        self.depth = 0

    # -- token helpers --

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError([Diagnostic(ERROR, "PARSE", f"expected {expected}, found {found}", tok.pos)])

    def at(self, text) -> bool:
        t = self.tok
        return t.kind in ("op", "keyword") and t.text == text

    def accept(self, text):
        if self.at(text):
            tok = self.tok
            self.i += 1
            return tok
        return None

    def expect(self, text) -> Token:
        tok = self.accept(text)
        if tok is None:
            self.fail(repr(text))
        return tok

    def ident(self, what="identifier") -> Token:
        tok = self.tok
        if tok.kind != "ident":
            self.fail(what)
        self.i += 1
        return tok

    def type_ref(self) -> Token:
        tok = self.tok
        if tok.kind == "ident" or (tok.kind == "keyword" and tok.text in A.PRIMITIVES):
            self.i += 1
            return tok
        self.fail("type")

    # -- models --

    def model(self) -> A.ModelAst:
        tok = self.tok
        if tok.kind == "keyword" and tok.text in A.KIND_OF_KEYWORD:
            kind = A.KIND_OF_KEYWORD[tok.text]
            self.i += 1
            name = self.ident("model name").text
            if kind == A.DOMAIN:
                body = self.domain_body()
            elif kind == A.ACTION:
                body = self.action_body()
            else:
                body = self.net_body()
            if self.tok.kind != "eof":
                self.fail("end of input")
            return A.ModelAst(kind, name, body, tok.pos)
        self.fail("'action', 'skill', 'task', 'process' or 'domainmodel'")

    def domain_body(self) -> A.DomainBody:
        role = A.ROLE_TYPES
        if self.tok.kind == "ident" and self.tok.text in (A.ROLE_TYPES, A.ROLE_ROBOTAPI):
            role = self.tok.text
            self.i += 1
        self.expect("{")
        interfaces, types, records = [], [], []
        while not self.accept("}"):
            if self.at("interface"):
                interfaces.append(self.interface_decl())
            elif self.at("type"):
                start = self.expect("type")
                name = self.ident("type name")
                self.expect(";")
                types.append(A.TypeDecl(name.text, start.pos))
            elif self.at("record"):
                records.append(self.record_decl())
            else:
                self.fail("'interface', 'type', 'record' or '}'")
        return A.DomainBody(role, tuple(interfaces), tuple(types), tuple(records))

    def interface_decl(self) -> A.InterfaceDecl:
        start = self.expect("interface")
        name = self.ident("interface name")
        self.expect("{")
        methods = []
        while not self.accept("}"):
            if self.at("void"):
                ret = self.expect("void")
            else:
                ret = self.type_ref()
            mname = self.ident("method name")
            self.expect("(")
            params = []
            if not self.at(")"):
                while True:
                    ptype = self.type_ref()
                    pname = self.ident("parameter name")
                    params.append(A.Param(ptype.text, pname.text, ptype.pos))
                    if not self.accept(","):
                        break
            self.expect(")")
            self.expect(";")
            methods.append(A.MethodDecl(ret.text, mname.text, tuple(params), ret.pos))
        return A.InterfaceDecl(name.text, tuple(methods), start.pos)

    def record_decl(self) -> A.RecordDecl:
        start = self.expect("record")
        name = self.ident("record name")
        self.expect("{")
        fields = []
        while not self.accept("}"):
            ftype = self.type_ref()
            fname = self.ident("field name")
            self.expect(";")
            fields.append(A.Param(ftype.text, fname.text, ftype.pos))
        return A.RecordDecl(name.text, tuple(fields), start.pos)

    def params_block(self) -> tuple[A.Param, ...]:
        self.expect("parameters")
        self.expect("{")
        params = []
        while not self.accept("}"):
            ptype = self.type_ref()
            pname = self.ident("parameter name")
            self.expect(";")
            params.append(A.Param(ptype.text, pname.text, ptype.pos))
        return tuple(params)

    def action_body(self) -> A.ActionBody:
        self.expect("{")
        params = self.params_block()
        self.expect("execution")
        self.expect("{")
        receiver = self.ident("receiver")
        self.expect(".")
        method = self.ident("method name")
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.expr())
            while self.accept(","):
                args.append(self.expr())
        self.expect(")")
        self.expect("}")
        call = A.ApiCall(receiver.text, method.text, tuple(args), receiver.pos)
        entry = []
        if self.accept("entry"):
            self.expect("{")
            while not self.accept("}"):
                entry.append(self.expr())
                self.expect(";")
        self.expect("exit")
        self.expect("{")
        rules = []
        while True:
            start = self.tok
            cond = self.expr()
            self.expect("->")
            outcome = self.ident("outcome name")
            self.expect(";")
            rules.append(A.ExitRule(cond, outcome.text, start.pos))
            if self.accept("}"):
                break
        self.expect("}")
        return A.ActionBody(params, call, tuple(entry), tuple(rules))

    def bindings(self) -> tuple[A.Binding, ...]:
        if not self.accept("with"):
            return ()
        self.expect("(")
        result = []
        while True:
            name = self.ident("parameter name")
            self.expect("=")
            result.append(A.Binding(name.text, self.expr(), name.pos))
            if not self.accept(","):
                break
        self.expect(")")
        return tuple(result)

    def net_body(self) -> A.NetBody:
        self.expect("{")
        params = self.params_block()
        self.expect("nodes")
        self.expect("{")
        nodes = []
        while not self.accept("}"):
            name = self.ident("node name")
            self.expect(":")
            model = self.ident("model name")
            self.expect(";")
            nodes.append(A.NodeDecl(name.text, model.text, name.pos))
        start = self.expect("initial")
        node = self.ident("node name")
        initial = A.Initial(node.text, self.bindings(), start.pos)
        self.expect(";")
        self.expect("transitions")
        self.expect("{")
        transitions = []
        while not self.accept("}"):
            source = self.ident("node name")
            self.expect(".")
            outcome = self.ident("outcome name")
            guard = self.expr() if self.accept("when") else None
            self.expect("->")
            if self.accept("end"):
                end = self.ident("outcome name").text
                target, binds = None, ()
            else:
                target = self.ident("node name or 'end'").text
                binds = self.bindings()
                end = None
            self.expect(";")
            transitions.append(A.Transition(source.text, outcome.text, guard, target, binds, end, source.pos))
        self.expect("}")
        return A.NetBody(params, tuple(nodes), initial, tuple(transitions))

    # -- expressions --

    def expr(self, min_prec=1):
        left = self.unary()
        while True:
            tok = self.tok
            prec = PRECEDENCE.get(tok.text) if tok.kind == "op" else None
            if prec is None or prec < min_prec:
                return left
            self.i += 1
            right = self.expr(prec + 1)
            left = A.Binary(tok.text, left, right, left.pos)

    def unary(self):
        tok = self.tok
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise ParseError([Diagnostic(ERROR, "PARSE", "expression nested too deeply", tok.pos)])
        try:
            if tok.kind == "op" and tok.text in ("!", "-"):
                self.i += 1
                return A.Unary(tok.text, self.unary(), tok.pos)
            return self.primary()
        finally:
            self.depth -= 1

    def primary(self):
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return A.Literal(tok.value, "Int", tok.pos)
        if tok.kind == "double":
            self.i += 1
            return A.Literal(tok.value, "Double", tok.pos)
        if tok.kind == "string":
            self.i += 1
            return A.Literal(tok.value, "String", tok.pos)
        if tok.kind == "keyword" and tok.text in ("true", "false"):
            self.i += 1
            return A.Literal(tok.value, "Bool", tok.pos)
        if self.accept("result"):
            self.expect(".")
            return A.ResultField(self.ident("field name").text, tok.pos)
        if tok.kind == "ident":
            self.i += 1
            return A.Name(tok.text, tok.pos)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        self.fail("expression")


def parse_model(text, file: str = "<string>") -> A.ModelAst:
    """Parse one model file.

    ``text`` may be ``str`` or UTF-8 ``bytes``. Raises :class:`ParseError`
    carrying one positioned diagnostic when the text is not a model. If
    ``file`` has one of the known model extensions, the declared kind must
    agree with it.
    """
    text = decode(text, file)
    model = _Parser(tokenize(text, file)).model()
    ext = os.path.splitext(file)[1]
    expected = A.KIND_OF_EXTENSION.get(ext)
    if expected is not None and expected != model.kind:
        keyword = A.KEYWORD_OF_KIND[model.kind]
        raise ParseError([Diagnostic(
            ERROR, "PARSE",
            f"file extension {ext} expects a {A.KEYWORD_OF_KIND[expected]} model, found {keyword}",
            model.pos)])
    return model


def parse_expression(text, file: str = "<expr>"):
    """Parse a standalone condition or binding expression."""
    text = decode(text, file)
    p = _Parser(tokenize(text, file))
    e = p.expr()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return e


def eof_position(text: str, file: str = "<string>") -> SourcePos:
    line = text.count("\n") + 1
    col = len(text) - (text.rfind("\n") + 1) + 1
    return SourcePos(file, line, col)
