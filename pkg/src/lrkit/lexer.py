"""Tokenizer for the model languages."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .diagnostics import ERROR, Diagnostic, ParseError, SourcePos

KEYWORDS = frozenset("""
    action skill task process domainmodel interface type record parameters
    execution entry exit nodes initial transitions end when with result true
    false void Double Int Bool String
""".split())

# Longest first so that "->" wins over "-" and "<=" over "<".
OPERATORS = (
    "->", "==", "!=", "<=", ">=", "&&", "||",
    "{", "}", "(", ")", ";", ":", ",", ".", "=", "<", ">", "!", "+", "-", "*", "/",
)

_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}

INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, int, double, string, op, eof
    text: str
    value: object
    pos: SourcePos


def lex_error(message, pos) -> ParseError:
    return ParseError([Diagnostic(ERROR, "PARSE", f"lex error: {message}", pos)])


def decode(data, file):
    """Decode UTF-8 bytes, reporting the first invalid byte as a lex error."""
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        prefix = data[: exc.start].decode("utf-8", errors="replace")
        line = prefix.count("\n") + 1
        col = len(prefix) - (prefix.rfind("\n") + 1) + 1
        raise lex_error("invalid UTF-8 byte", SourcePos(file, line, col)) from None


def tokenize(text: str, file: str = "<string>") -> list[Token]:
    tokens = []
    i = 0
    line = 1
    line_start = 0
    n = len(text)

    def here(at=None):
        at = i if at is None else at
        return SourcePos(file, line, at - line_start + 1)

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            line_start = i
            continue
        if c in " \t\r":
            i += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("/*", i):
            start = here()
            j = text.find("*/", i + 2)
            if j < 0:
                raise lex_error("unterminated block comment", start)
            for k in range(i, j):
                if text[k] == "\n":
                    line += 1
                    line_start = k + 1
            i = j + 2
            continue
        pos = here()
        if c.isascii() and (c.isalpha() or c == "_"):
            j = i + 1
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in ("true", "false"):
                tokens.append(Token("keyword", word, word == "true", pos))
            else:
                tokens.append(Token("keyword" if word in KEYWORDS else "ident", word, word, pos))
            i = j
            continue
        if c.isascii() and c.isdigit():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isascii() and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isascii() and text[j].isdigit():
                    j += 1
                value = float(text[i:j])
                if not math.isfinite(value):
                    raise lex_error("Double literal out of range", pos)
                tokens.append(Token("double", text[i:j], value, pos))
            else:
                value = int(text[i:j])
                if value > INT64_MAX:
                    raise lex_error("Int literal out of range", pos)
                tokens.append(Token("int", text[i:j], value, pos))
            if j < n and (text[j].isalpha() or text[j] in "_."):
                raise lex_error(f"malformed number {text[i:j + 1]!r}", pos)
            i = j
            continue
        if c == '"':
            j = i + 1
            chars = []
            while True:
                if j >= n or text[j] == "\n":
                    raise lex_error("unterminated string literal", pos)
                ch = text[j]
                if ch == '"':
                    break
                if ch == "\\":
                    if j + 1 >= n or text[j + 1] not in _ESCAPES:
                        raise lex_error("invalid escape sequence", here(j))
                    chars.append(_ESCAPES[text[j + 1]])
                    j += 2
                    continue
                chars.append(ch)
                j += 1
            tokens.append(Token("string", text[i:j + 1], "".join(chars), pos))
            i = j + 1
            continue
        for op in OPERATORS:
            if text.startswith(op, i):
                tokens.append(Token("op", op, op, pos))
                i += len(op)
                break
        else:
            raise lex_error(f"unexpected character {c!r}", pos)
    tokens.append(Token("eof", "", None, here()))
    return tokens
