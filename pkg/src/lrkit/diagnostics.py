"""Source positions and diagnostics shared by every compiler stage."""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True, order=True)
class SourcePos:
    file: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    rule: str
    message: str
    pos: SourcePos

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def sort_key(self):
        return (self.pos.file, self.pos.line, self.pos.col, self.rule, self.message)

    def format(self) -> str:
        return f"{self.pos}: {self.severity} {self.rule}: {self.message}"

    __str__ = format


def format_diagnostics(diags) -> str:
    return "".join(d.format() + "\n" for d in sorted(diags, key=Diagnostic.sort_key))


class DiagnosticError(Exception):
    """Raised by a stage that cannot produce its result; carries the findings."""

    def __init__(self, diagnostics):
        self.diagnostics = sorted(diagnostics, key=Diagnostic.sort_key)
        super().__init__("\n".join(d.format() for d in self.diagnostics))


class ParseError(DiagnosticError):
    pass


class LinkError(DiagnosticError):
    pass
