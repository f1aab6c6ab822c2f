import io
import os
import re
import subprocess
import sys

import pytest

from lrkit.cli import main
from lrkit.corpora import CORPORA_DIR

from conftest import corpus, corpus_dir, scenario_matrix


def lr(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def scn(name, scenario):
    return corpus(name).scenario_file(scenario)


def snapshot(root):
    state = {}
    for dirpath, _, files in os.walk(root):
        for f in files:
            if "__pycache__" in dirpath:
                continue
            p = os.path.join(dirpath, f)
            st = os.stat(p)
            state[p] = (st.st_size, st.st_mtime_ns)
    return state


# -- spec examples ----------------------------------------------------------------------

def test_stats_cleanup():
    code, out, _ = lr("stats", corpus_dir("cleanup"))
    assert code == 0
    assert "tasks=3 skills=6 actions=14" in out
    assert re.match(r"processes=\d+ tasks=\d+ skills=\d+ actions=\d+ interfaces=\d+", out)


def test_check_wf04():
    code, _, err = lr("check", corpus_dir("fixtures/wf04"))
    lines = err.splitlines()
    assert code == 1 and len(lines) == 1
    assert re.match(r"^\S+:\d+:\d+: error WF04: ", lines[0])


def test_check_clean_corpus():
    assert lr("check", corpus_dir("screwing")) == (0, "", "")


def test_diff_trace_same_file(tmp_path):
    t = tmp_path / "t.jsonl"
    assert lr("run", "--model", "Chain", "--scenario", scn("minimal", "empty"), "--trace", str(t),
              corpus_dir("minimal"))[0] == 0
    assert lr("diff-trace", str(t), str(t)) == (0, "equal\n", "")


def test_diff_trace_reports_first_step(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    lr("run", "--model", "ScrewAssembly", "--scenario", scn("screwing", "tighten"), "--trace", str(a),
       corpus_dir("screwing"))
    lr("run", "--model", "ScrewAssembly", "--scenario", scn("screwing", "quick"), "--trace", str(b),
       corpus_dir("screwing"))
    code, out, _ = lr("diff-trace", str(a), str(b))
    assert code == 1 and re.fullmatch(r"differ at step \d+\n", out)


# -- the full pipeline ------------------------------------------------------------------

@pytest.mark.parametrize("pair", scenario_matrix(), ids=lambda p: f"{p[0]}:{p[1]}")
def test_run_gen_rts_diff(pair, tmp_path):
    name, scenario = pair
    c = corpus(name)
    expects_error = "error" in c.manifest["scenarios"][scenario]
    run_code, _, _ = lr("run", "--model", c.root, "--scenario", scn(name, scenario),
                        "--trace", str(tmp_path / "a.jsonl"), c.path)
    assert run_code == (2 if expects_error else 0)
    assert lr("gen", "--model", c.root, "--backend", "lrf", "-o", str(tmp_path / "out"), c.path)[0] == 0
    program = tmp_path / "out" / f"{c.root}.lrf"
    rts_code, _, _ = lr("rts", "--program", str(program), "--scenario", scn(name, scenario),
                        "--trace", str(tmp_path / "b.jsonl"))
    assert rts_code == run_code
    assert lr("diff-trace", str(tmp_path / "a.jsonl"), str(tmp_path / "b.jsonl")) == (0, "equal\n", "")


def test_trace_to_stdout():
    code, out, _ = lr("run", "--model", "Chain", "--scenario", scn("minimal", "empty"), corpus_dir("minimal"))
    assert code == 0 and len(out.splitlines()) == 11
    assert out.splitlines()[-1] == '{"step":11,"event":"end","outcome":"done","steps":11}'


def test_live_view():
    code, out, _ = lr("run", "--live", "--model", "Chain", "--scenario", scn("minimal", "empty"),
                      corpus_dir("minimal"))
    assert code == 0
    lines = out.splitlines()
    assert lines[:4] == ["step 1: Chain", "step 2: Chain/job", "step 3: Chain/job/work",
                         "step 4: Chain/job/work/close"]
    assert lines[-1] == "step 11: end done"


def test_live_with_trace_file(tmp_path):
    t = tmp_path / "t.jsonl"
    code, out, _ = lr("rts", "--live", "--program", str(_compile(tmp_path, "minimal")),
                      "--scenario", scn("minimal", "empty"), "--trace", str(t))
    assert code == 0 and out.startswith("step 1: Chain\n")
    assert len(t.read_text().splitlines()) == 11


def _compile(tmp_path, name):
    c = corpus(name)
    lr("gen", "--model", c.root, "--backend", "lrf", "-o", str(tmp_path / "gen"), c.path)
    return tmp_path / "gen" / f"{c.root}.lrf"


def test_gen_dot(tmp_path):
    code, out, _ = lr("gen", "--model", "ScrewAssembly", "--backend", "dot", "-o", str(tmp_path),
                      corpus_dir("screwing"))
    assert code == 0 and out.strip() == str(tmp_path / "ScrewAssembly.dot")
    assert (tmp_path / "ScrewAssembly.dot").read_text().startswith("digraph")


# -- exit codes -------------------------------------------------------------------------

def test_runtime_error_exit_code(tmp_path):
    t = tmp_path / "t.jsonl"
    code, _, err = lr("run", "--model", "ScrewAssembly", "--scenario", scn("screwing", "no-torque"),
                      "--trace", str(t), corpus_dir("screwing"))
    assert code == 2 and "EntryViolated" in err
    assert len(t.read_text().splitlines()) == corpus("screwing").manifest["scenarios"]["no-torque"]["events"]


def test_step_limit_exit_code():
    code, _, err = lr("run", "--max-steps", "5", "--model", "ScrewAssembly",
                      "--scenario", scn("screwing", "tighten"), corpus_dir("screwing"))
    assert code == 2 and "StepLimitExceeded" in err


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["check"],
    ["run", "--model", "X"],
    ["check", "/no/such/dir"],
    ["run", "--max-steps", "0", "--model", "ScrewAssembly", "--scenario", "SCN", "SCREWING"],
    ["run", "--model", "Nope", "--scenario", "SCN", "SCREWING"],
    ["run", "--model", "Screwing", "--scenario", "SCN", "SCREWING"],
    ["run", "--model", "ScrewAssembly", "--scenario", "/no/such.scn", "SCREWING"],
    ["gen", "--model", "ScrewAssembly", "--backend", "cobol", "-o", "OUT", "SCREWING"],
    ["rts", "--program", "/no/such.lrf", "--scenario", "SCN"],
    ["diff-trace", "/no/a", "/no/b"],
    ["run", "--model", "ScrewAssembly", "--scenario", "SCN", "--trace", "/no/dir/t.jsonl", "SCREWING"],
])
def test_usage_errors(argv, tmp_path):
    subst = {"SCN": scn("screwing", "tighten"), "SCREWING": corpus_dir("screwing"), "OUT": str(tmp_path)}
    code, _, err = lr(*[subst.get(a, a) for a in argv])
    assert code == 3 and err


def test_bad_scenario_file(tmp_path):
    bad = tmp_path / "bad.scn"
    bad.write_text('{"world":"teleport"}')
    code, _, err = lr("run", "--model", "Chain", "--scenario", str(bad), corpus_dir("minimal"))
    assert code == 3 and "teleport" in err


def test_malformed_program_exit_code(tmp_path):
    prog = tmp_path / "p.lrf"
    prog.write_text(_compile(tmp_path, "minimal").read_text()[:100])
    code, _, err = lr("rts", "--program", str(prog), "--scenario", scn("minimal", "empty"))
    assert code == 2 and "MalformedProgram" in err


def test_run_refuses_ill_formed_models(tmp_path):
    code, out, err = lr("run", "--model", "Main", "--scenario", scn("minimal", "empty"),
                        corpus_dir("fixtures/wf04"))
    assert code == 1 and "WF04" in err and out == ""


def test_parse_errors_exit_1(tmp_path):
    (tmp_path / "Bad.action").write_text("action Bad {")
    code, _, err = lr("check", str(tmp_path))
    assert code == 1 and "Bad.action:1:" in err


# -- side effects -----------------------------------------------------------------------

def test_no_writes_outside_flagged_paths(tmp_path, monkeypatch):
    cwd = tmp_path / "cwd"
    cwd.mkdir()
    monkeypatch.chdir(cwd)
    before = snapshot(CORPORA_DIR)
    out = tmp_path / "out"
    out.mkdir()
    lr("check", corpus_dir("screwing"))
    lr("stats", corpus_dir("screwing"))
    lr("run", "--model", "ScrewAssembly", "--scenario", scn("screwing", "tighten"), "--trace",
       str(out / "t.jsonl"), corpus_dir("screwing"))
    lr("gen", "--model", "ScrewAssembly", "--backend", "lrf", "-o", str(out), corpus_dir("screwing"))
    lr("rts", "--program", str(out / "ScrewAssembly.lrf"), "--scenario", scn("screwing", "tighten"),
       "--trace", str(out / "u.jsonl"))
    assert lr("diff-trace", str(out / "t.jsonl"), str(out / "u.jsonl"))[1] == "equal\n"
    assert snapshot(CORPORA_DIR) == before
    assert os.listdir(cwd) == []
    assert sorted(os.listdir(out)) == ["ScrewAssembly.lrf", "t.jsonl", "u.jsonl"]


def test_console_script():
    result = subprocess.run([sys.executable, "-m", "lrkit.cli", "stats", corpus_dir("cleanup")],
                            capture_output=True, text=True, check=False)
    assert result.returncode == 0
    assert "tasks=3 skills=6 actions=14" in result.stdout


def test_check_warnings_exit_0():
    code, _, err = lr("check", corpus_dir("fixtures/wf09"))
    assert code == 0
    assert re.match(r"^\S+:\d+:\d+: warning WF09: node 'spare' is unreachable", err)
