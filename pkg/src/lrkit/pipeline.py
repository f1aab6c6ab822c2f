"""Glue for running a scenario through either execution path."""

from __future__ import annotations

from .rts import execute_flat
from .runtime import interpret
from .simworld import Scenario
from .statechart import flatten, serialize_program, to_statechart


def run_interpreted(ws, root, scenario: Scenario, listener=None, limits=None):
    """Interpret process ``root`` in a fresh world built from ``scenario``."""
    world = scenario.make_world()
    return interpret(ws, root, world, scenario.top_bindings(world),
                     limits or scenario.limits, listener=listener)


def run_flat(program, scenario: Scenario, listener=None, limits=None):
    """Execute a FlatProgram (or its ``.lrf`` text) in a fresh world."""
    world = scenario.make_world()
    return execute_flat(program, world, scenario.top_bindings(world),
                        limits or scenario.limits, listener=listener)


def compile_lrf(ws, root) -> str:
    return serialize_program(flatten(to_statechart(ws, root)))
