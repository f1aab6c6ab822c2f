"""lrkit: a compiler and runtime for layered robot assembly models.

Models come in five kinds (domain model, action, skill, task, process), one
per file. The pipeline parses them (:mod:`lrkit.parser`), links them by name
(:mod:`lrkit.symbols`), checks thirteen well-formedness rules
(:mod:`lrkit.wellformed`), lowers a process to a hierarchical statechart and
a flat program (:mod:`lrkit.statechart`), and executes either form against a
simulated world (:mod:`lrkit.runtime`, :mod:`lrkit.rts`,
:mod:`lrkit.simworld`). Backends in :mod:`lrkit.codegen` emit DOT and the
flat program format.
"""

from .codegen import (Backend, BackendRegistry, DuplicateBackend, default_registry, emit_dot,
                      emit_lrf, list_backends, register_backend)
from .corpora import UnknownCorpus, load_corpus
from .diagnostics import Diagnostic, LinkError, ParseError, SourcePos
from .errors import ExecutionError
from .parser import parse_expression, parse_model
from .printer import pretty_print
from .rts import execute_flat
from .runtime import RunLimits, eval_expr, interpret
from .simworld import Scenario, load_scenario, make_world
from .statechart import (deserialize_program, flatten, reachable_outcomes, serialize_program,
                         to_statechart)
from .symbols import collect_stats, link_workspace, load_models
from .trace import diff_traces, serialize_trace
from .wellformed import check_all, check_rule

__version__ = "0.1.0"

__all__ = [
    "Backend", "BackendRegistry", "Diagnostic", "DuplicateBackend", "ExecutionError",
    "LinkError", "ParseError", "RunLimits", "Scenario", "SourcePos", "UnknownCorpus",
    "check_all", "check_rule", "collect_stats", "default_registry", "deserialize_program",
    "diff_traces", "emit_dot", "emit_lrf", "eval_expr", "execute_flat", "flatten",
    "interpret", "link_workspace", "list_backends", "load_corpus", "load_models",
    "load_scenario", "make_world", "parse_expression", "parse_model", "pretty_print",
    "reachable_outcomes", "register_backend", "serialize_program", "serialize_trace",
    "to_statechart",
]
