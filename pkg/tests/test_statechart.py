from collections import deque

import pytest

from lrkit import ast as A
from lrkit.errors import MalformedProgram
from lrkit.runtime import NotAProcess, RootNotFound
from lrkit.statechart import (ATOMIC, COMPOSITE, EXIT, ScTransition, State, StatechartIr,
                              deserialize_program, flatten, reachable_outcomes, serialize_program,
                              to_statechart)
from lrkit.symbols import link_workspace
from lrkit.wellformed import check_all, error_count, findings

from conftest import corpus, runnable_corpora
from netgen import random_corpus


def ir(name):
    c = corpus(name)
    return to_statechart(c.workspace, c.root)


# -- independent oracles over the AST ---------------------------------------------------

def instantiated(ws, model, counts=None):
    """Count instantiated node occurrences per kind by walking the AST."""
    counts = counts if counts is not None else {A.TASK: 0, A.SKILL: 0, A.ACTION: 0}
    seen = set()
    for node in model.body.nodes:
        if node.name in seen:
            continue
        seen.add(node.name)
        target = ws.node_target(model, node)
        counts[target.kind] += 1
        if target.kind != A.ACTION:
            instantiated(ws, target, counts)
    return counts


def oracle_outcomes(ws, model, memo=None):
    """Outcomes a net can end with: breadth-first search over its node graph."""
    memo = {} if memo is None else memo
    if model.kind == A.ACTION:
        return {r.outcome for r in model.body.exit}
    key = (model.kind, model.name)
    if key in memo:
        return memo[key]
    memo[key] = set()
    nodes = {}
    for node in model.body.nodes:
        nodes.setdefault(node.name, ws.node_target(model, node))
    result = set()
    start = model.body.initial.node
    visited, queue = {start}, deque([start])
    while queue:
        cur = queue.popleft()
        produced = oracle_outcomes(ws, nodes[cur], memo)
        for t in model.body.transitions:
            if t.source != cur or t.outcome not in produced:
                continue
            if t.end is not None:
                result.add(t.end)
            elif t.target not in visited:
                visited.add(t.target)
                queue.append(t.target)
    memo[key] = result
    return result


def compare_reachability(ws, root):
    sc = to_statechart(ws, root)
    got = reachable_outcomes(sc)
    mismatches = []
    for state in sc.composites():
        model = None
        for kind in A.NET_KINDS:
            model = ws.get(kind, state.model) if state.model in ws.models[kind] else model
        expected = oracle_outcomes(ws, model)
        if got[state.id] != expected:
            mismatches.append((state.path, got[state.id], expected))
    return mismatches


# -- structure ----------------------------------------------------------------------------

def test_grasp_and_screw_ir():
    sc = ir("screwing")
    screwing = sc.by_path("ScrewAssembly/graspAndScrew/Screwing")
    kinds = [sc.states[c].kind for c in screwing.children]
    assert kinds.count(ATOMIC) == 4
    assert kinds.count(EXIT) >= 2
    assert {sc.states[c].outcome for c in screwing.children if sc.states[c].kind == EXIT} == \
        {"screwTightened", "failed"}


def test_single_chain_ir():
    sc = ir("minimal")
    assert sum(1 for s in sc.states if s.kind != EXIT) == 4
    assert sc.count(EXIT) == 3
    prog = flatten(sc)
    assert len(prog.states) == 7
    assert len(prog.initial) == 4
    assert [s.path for s in prog.states if s.kind != EXIT] == \
        ["Chain", "Chain/job", "Chain/job/work", "Chain/job/work/close"]


@pytest.mark.parametrize("name", runnable_corpora())
def test_structure_preservation(name):
    c = corpus(name)
    ws = c.workspace
    sc = to_statechart(ws, c.root)
    counts = instantiated(ws, ws.get(A.PROCESS, c.root))
    assert sc.count(COMPOSITE) == 1 + counts[A.TASK] + counts[A.SKILL]
    assert sc.count(ATOMIC) == counts[A.ACTION]
    assert [s.id for s in sc.states] == list(range(len(sc.states)))
    assert sum(1 for s in sc.states if s.parent is None) == 1


@pytest.mark.parametrize("name", runnable_corpora())
def test_ir_invariants(name):
    sc = ir(name)
    for comp in sc.composites():
        child, _ = sc.initial_of[comp.id]
        assert sc.states[child].parent == comp.id
    for t in sc.transitions:
        assert sc.states[t.source].parent == sc.states[t.target].parent


def _net_transitions(ws, model, path, out):
    seen = set()
    for t in model.body.transitions:
        out.append((path, t.pos))
    for node in model.body.nodes:
        if node.name in seen:
            continue
        seen.add(node.name)
        target = ws.node_target(model, node)
        if target.kind != A.ACTION:
            _net_transitions(ws, target, f"{path}/{node.name}", out)
    return out


@pytest.mark.parametrize("name", runnable_corpora())
def test_transition_bijection(name):
    c = corpus(name)
    ws = c.workspace
    sc = to_statechart(ws, c.root)
    from_ast = sorted(_net_transitions(ws, ws.get(A.PROCESS, c.root), c.root, []),
                      key=lambda x: (x[0], x[1].file, x[1].line, x[1].col))
    from_ir = sorted(((sc.states[sc.states[t.source].parent].path, t.pos) for t in sc.transitions),
                     key=lambda x: (x[0], x[1].file, x[1].line, x[1].col))
    assert from_ir == from_ast


def test_atomic_count_matches_skill_node_sum():
    c = corpus("plugging")
    ws = c.workspace
    sc = to_statechart(ws, c.root)
    total = 0
    for state in sc.composites():
        if state.model in ws.models[A.SKILL]:
            total += len({n.name for n in ws.get(A.SKILL, state.model).body.nodes})
    assert sc.count(ATOMIC) == total


def test_root_errors():
    ws = corpus("screwing").workspace
    with pytest.raises(RootNotFound):
        to_statechart(ws, "Nope")
    with pytest.raises(NotAProcess):
        to_statechart(ws, "Screwing")


def test_two_nodes_on_one_skill_get_separate_subtrees():
    sc = ir("stacking")
    move_paths = [s.path for s in sc.states if s.model == "MoveTo"]
    assert len(move_paths) == len(set(move_paths)) == 3


# -- flat programs ------------------------------------------------------------------------

@pytest.mark.parametrize("name", runnable_corpora())
def test_lrf_round_trip(name):
    prog = flatten(ir(name))
    assert deserialize_program(serialize_program(prog)) == prog
    assert serialize_program(deserialize_program(serialize_program(prog))) == serialize_program(prog)


def test_flat_paths_include_spin():
    prog = flatten(ir("screwing"))
    assert any(s.path.endswith("/Screwing/spin") for s in prog.states)


def test_flat_program_has_no_model_names():
    text = serialize_program(flatten(ir("screwing")))
    assert "GraspScrew" not in text and '"Spin"' not in text


def test_flatten_is_injective_on_corpus():
    texts = [serialize_program(flatten(ir(n))) for n in runnable_corpora()]
    assert len(set(texts)) == len(texts)


@pytest.mark.parametrize("mutate", [
    lambda t: t[: len(t) // 2],
    lambda t: t.replace('"lrf-1"', '"lrf-9"'),
    lambda t: t.replace('"Atomic"', '"Weird"', 1),
    lambda t: t.replace('"scopeId": null', '"scopeId": 99', 1),
    lambda t: t.replace('"version"', '"versión"'),
    lambda t: "[]",
    lambda t: t.replace('"true"', '"true &&"', 1),
    lambda t: t.replace('"method": "close"', '"method": 7', 1),
])
def test_malformed_programs(mutate):
    text = serialize_program(flatten(ir("minimal")))
    with pytest.raises(MalformedProgram):
        deserialize_program(mutate(text))


def test_lrf_key_order():
    import json
    obj = json.loads(serialize_program(flatten(ir("minimal"))))
    assert list(obj) == ["version", "states", "transitions", "initial"]
    assert list(obj["states"][0]) == ["id", "path", "kind", "scopeId", "params", "call", "entry", "exit"]


# -- reachability -------------------------------------------------------------------------

def test_screwing_outcomes_reachable():
    sc = ir("screwing")
    got = reachable_outcomes(sc)
    assert got[sc.by_path("ScrewAssembly/graspAndScrew/Screwing").id] == {"screwTightened", "failed"}


def test_exit_without_incoming_transition_is_absent():
    root = State(0, "P", COMPOSITE, None, "P", children=(1, 2, 3))
    states = (
        root,
        State(1, "P/a", ATOMIC, 0, "A", exit_rules=((None, "x"),)),
        State(2, "P/end:ok", EXIT, 0, outcome="ok"),
        State(3, "P/end:lost", EXIT, 0, outcome="lost"),
    )
    sc = StatechartIr(states, (ScTransition(1, "x", None, 2, ()),), {0: (1, ())})
    assert reachable_outcomes(sc) == {0: frozenset({"ok"})}


@pytest.mark.parametrize("name", runnable_corpora())
def test_reachability_matches_ast_oracle(name):
    c = corpus(name)
    assert compare_reachability(c.workspace, c.root) == []


def test_reachability_on_random_nets():
    nontrivial = 0
    for seed in range(200):
        models, root = random_corpus(seed)
        ws = link_workspace(models)
        reports = check_all(ws)
        assert error_count(reports) == 0, seed
        assert {d.rule for d in findings(reports)} <= {"WF09"}, seed
        assert compare_reachability(ws, root) == [], seed
        sc = to_statechart(ws, root)
        got = reachable_outcomes(sc)
        declared = {s.id: {sc.states[c].outcome for c in s.children if sc.states[c].kind == EXIT}
                    for s in sc.composites()}
        nontrivial += any(got[k] != declared[k] for k in got)
    # The generator must exercise composites with unreachable outcomes.
    assert nontrivial > 20


def test_reachability_on_random_well_formed_nets():
    for seed in range(200):
        models, root = random_corpus(seed, connected=True)
        ws = link_workspace(models)
        assert findings(check_all(ws)) == [], seed
        assert compare_reachability(ws, root) == [], seed
