"""The ``lr`` command line tool.

Exit codes: 0 success, 1 diagnostics or trace mismatch, 2 runtime error,
3 usage error. Results go to standard output, diagnostics to standard
error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .codegen import UnknownBackend, default_registry, generate, list_backends
from .diagnostics import DiagnosticError, format_diagnostics
from .errors import ExecutionError
from .pipeline import run_flat, run_interpreted
from .runtime import NotAProcess, RootNotFound, RunLimits
from .simworld import ScenarioError, load_scenario
from .statechart import to_statechart
from .symbols import collect_stats, link_workspace, load_models
from .trace import diff_traces, live_line, serialize_trace
from .wellformed import check_all, error_count, findings

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_RUNTIME = 2
EXIT_USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _build_parser(registry) -> argparse.ArgumentParser:
    p = _Parser(prog="lr", description="Check, run and compile layered robot assembly models.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="command")
    sub.required = True

    c = sub.add_parser("check", help="parse, link and check models")
    c.add_argument("dirs", nargs="+")

    s = sub.add_parser("stats", help="count processes, tasks, skills, actions and interfaces")
    s.add_argument("dirs", nargs="+")

    r = sub.add_parser("run", help="interpret a process against a scenario")
    r.add_argument("--model", required=True)
    r.add_argument("--scenario", required=True)
    r.add_argument("--trace")
    r.add_argument("--max-steps", type=int)
    r.add_argument("--live", action="store_true")
    r.add_argument("dirs", nargs="+")

    g = sub.add_parser("gen", help="generate code with a backend")
    g.add_argument("--model", required=True)
    g.add_argument("--backend", required=True, help="one of: " + ", ".join(list_backends(registry)))
    g.add_argument("-o", "--output", required=True)
    g.add_argument("dirs", nargs="+")

    x = sub.add_parser("rts", help="execute a compiled .lrf program")
    x.add_argument("--program", required=True)
    x.add_argument("--scenario", required=True)
    x.add_argument("--trace")
    x.add_argument("--max-steps", type=int)
    x.add_argument("--live", action="store_true")

    d = sub.add_parser("diff-trace", help="compare two trace files")
    d.add_argument("a")
    d.add_argument("b")
    return p


def _read(path) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _dirs(dirs):
    for d in dirs:
        if not os.path.isdir(d):
            raise UsageError(f"not a directory: {d}")
    return dirs


def _workspace(dirs):
    return link_workspace(load_models(_dirs(dirs)))


def _checked_workspace(dirs, err):
    """Linked workspace, or None after printing its errors."""
    ws = _workspace(dirs)
    reports = check_all(ws)
    if error_count(reports):
        err.write(format_diagnostics([d for d in findings(reports) if d.is_error]))
        return None
    return ws


def _scenario(path, max_steps):
    scenario = load_scenario(_read(path))
    if max_steps is not None:
        try:
            scenario.limits = RunLimits(max_steps)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return scenario


def _emit_trace(trace, path, out):
    text = serialize_trace(trace)
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def _execute(run, args, out, err):
    listener = (lambda e: print(live_line(e), file=out)) if args.live else None
    try:
        trace = run(listener)
    except ExecutionError as exc:
        if exc.trace is not None and args.trace:
            _emit_trace(exc.trace, args.trace, out)
        print(f"lr: runtime error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_RUNTIME
    if args.trace or not args.live:
        _emit_trace(trace, args.trace, out)
    return EXIT_OK


def _cmd_check(args, out, err, registry):
    ws = _workspace(args.dirs)
    diags = findings(check_all(ws))
    if diags:
        err.write(format_diagnostics(diags))
    return EXIT_FINDINGS if any(d.is_error for d in diags) else EXIT_OK


def _cmd_stats(args, out, err, registry):
    stats = collect_stats(_workspace(args.dirs))
    print(stats.summary(), file=out)
    for skill in sorted(stats.actions_per_skill):
        print(f"skill {skill}: actions={stats.actions_per_skill[skill]}", file=out)
    return EXIT_OK


def _cmd_run(args, out, err, registry):
    ws = _checked_workspace(args.dirs, err)
    if ws is None:
        return EXIT_FINDINGS
    scenario = _scenario(args.scenario, args.max_steps)
    return _execute(lambda listener: run_interpreted(ws, args.model, scenario, listener), args, out, err)


def _cmd_gen(args, out, err, registry):
    backend = registry.get(args.backend)
    ws = _checked_workspace(args.dirs, err)
    if ws is None:
        return EXIT_FINDINGS
    files = generate(to_statechart(ws, args.model), backend)
    os.makedirs(args.output, exist_ok=True)
    for name, content in files:
        path = os.path.join(args.output, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
        print(path, file=out)
    return EXIT_OK


def _cmd_rts(args, out, err, registry):
    program = _read(args.program)
    scenario = _scenario(args.scenario, args.max_steps)
    return _execute(lambda listener: run_flat(program, scenario, listener), args, out, err)


def _cmd_diff(args, out, err, registry):
    step = diff_traces(_read(args.a), _read(args.b))
    if step is None:
        print("equal", file=out)
        return EXIT_OK
    print(f"differ at step {step}", file=out)
    return EXIT_FINDINGS


COMMANDS = {
    "check": _cmd_check,
    "stats": _cmd_stats,
    "run": _cmd_run,
    "gen": _cmd_gen,
    "rts": _cmd_rts,
    "diff-trace": _cmd_diff,
}


def main(argv=None, registry=None, out=None, err=None) -> int:
    """Run ``lr`` with ``argv`` and return the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    registry = registry if registry is not None else default_registry()
    try:
        args = _build_parser(registry).parse_args(argv)
        return COMMANDS[args.command](args, out, err, registry)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_USAGE
    except DiagnosticError as exc:
        err.write(format_diagnostics(exc.diagnostics))
        return EXIT_FINDINGS
    except (ScenarioError, RootNotFound, NotAProcess, UnknownBackend) as exc:
        print(f"lr: {exc}", file=err)
        return EXIT_USAGE
    except OSError as exc:
        print(f"lr: {exc.filename}: {exc.strerror}", file=err)
        return EXIT_USAGE
    except ExecutionError as exc:
        print(f"lr: runtime error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_RUNTIME


def entry_point():  # pragma: no cover - console script wrapper
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    entry_point()
