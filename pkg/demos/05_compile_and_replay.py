"""
Compiling to a flat program
===========================

The flat program format (.lrf) is what the small run-time system executes.
Its traces must match the interpreter's byte for byte.
"""

import lrkit
from lrkit.pipeline import compile_lrf, run_flat, run_interpreted

for name in ("screwing", "stacking", "plugging", "cleanup"):
    corpus = lrkit.load_corpus(name)
    program = compile_lrf(corpus.workspace, corpus.root)
    for sname, scenario in sorted(corpus.scenarios.items()):
        try:
            a = lrkit.serialize_trace(run_interpreted(corpus.workspace, corpus.root, scenario))
            b = lrkit.serialize_trace(run_flat(program, scenario))
        except lrkit.ExecutionError as exc:
            print(f"{name}:{sname}: stops with {type(exc).__name__}")
            continue
        verdict = "equal" if lrkit.diff_traces(a, b) is None else "DIFFERENT"
        print(f"{name}:{sname}: {len(a.splitlines())} events, {verdict}, {len(program)} bytes of lrf")
