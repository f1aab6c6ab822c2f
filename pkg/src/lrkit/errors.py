"""Run-time failures shared by the interpreter, the RTS and the worlds."""

from __future__ import annotations


class ExecutionError(Exception):
    """Base class for run failures. ``trace`` holds the events emitted so far."""

    trace = None

    def __init__(self, message):
        super().__init__(message)
        self.message = message


class EntryViolated(ExecutionError):
    def __init__(self, path, rule_index):
        super().__init__(f"entry rule {rule_index} of {path} does not hold")
        self.path = path
        self.rule_index = rule_index


class NoOutcome(ExecutionError):
    def __init__(self, path):
        super().__init__(f"no exit rule of {path} is satisfied")
        self.path = path


class NoTransition(ExecutionError):
    def __init__(self, path, outcome):
        super().__init__(f"no enabled transition for outcome '{outcome}' of {path}")
        self.path = path
        self.outcome = outcome


class StepLimitExceeded(ExecutionError):
    def __init__(self, limit):
        super().__init__(f"step limit of {limit} exceeded")
        self.limit = limit


class WorldFault(ExecutionError):
    pass


class UnknownMethod(ExecutionError):
    def __init__(self, interface, method):
        super().__init__(f"world does not implement {interface}.{method}")
        self.interface = interface
        self.method = method


class DivisionByZero(ExecutionError):
    def __init__(self):
        super().__init__("division by zero")


class UnboundParameter(ExecutionError):
    def __init__(self, name):
        super().__init__(f"parameter '{name}' is not bound")
        self.name = name


class BindingTypeError(ExecutionError):
    pass


class MalformedProgram(ExecutionError):
    pass
