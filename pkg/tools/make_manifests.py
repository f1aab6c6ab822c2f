"""Regenerate the bundled corpus manifests.

Stats come from collect_stats and are cross-checked against the published
counts by the test suite. Trace digests pin today's traces so that any
behavioural drift shows up as a test failure; they are regression anchors,
not oracles. Run from the repository root: ``python3 tools/make_manifests.py``.
"""

import hashlib
import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from lrkit.corpora import CORPORA_DIR  # noqa: E402
from lrkit.errors import ExecutionError  # noqa: E402
from lrkit.pipeline import run_interpreted  # noqa: E402
from lrkit.simworld import load_scenario  # noqa: E402
from lrkit.symbols import collect_stats, link_workspace, load_models, model_files  # noqa: E402
from lrkit.trace import serialize_trace  # noqa: E402

ROOTS = {
    "screwing": "ScrewAssembly",
    "stacking": "StackBlocks",
    "plugging": "PlugSockets",
    "cleanup": "CollectBlueObjects",
    "minimal": "Chain",
    "fixtures/clean": "Main",
}


def manifest_for(name, path):
    ws = link_workspace(load_models([path]))
    stats = collect_stats(ws)
    manifest = {
        "name": name,
        "root": ROOTS.get(name),
        "files": [os.path.basename(f) for f in model_files([path])],
        "stats": {
            "processes": stats.processes,
            "tasks": stats.tasks,
            "skills": stats.skills,
            "actions": stats.actions,
            "interfaces": stats.interfaces,
            "actionsPerSkill": dict(sorted(stats.actions_per_skill.items())),
        },
        "scenarios": {},
    }
    if name.startswith("fixtures/wf"):
        manifest["expectedRule"] = name.split("/")[1].upper()
    scen_dir = os.path.join(path, "scenarios")
    if os.path.isdir(scen_dir):
        for fname in sorted(os.listdir(scen_dir)):
            if not fname.endswith(".scn"):
                continue
            with open(os.path.join(scen_dir, fname), encoding="utf-8") as fh:
                scenario = load_scenario(fh.read())
            entry = {"file": f"scenarios/{fname}"}
            try:
                trace = run_interpreted(ws, manifest["root"], scenario)
                entry["outcome"] = trace.outcome
            except ExecutionError as exc:
                trace = exc.trace
                entry["error"] = type(exc).__name__
            text = serialize_trace(trace)
            entry["events"] = len(trace.events)
            entry["traceSha256"] = hashlib.sha256(text.encode("utf-8")).hexdigest()
            manifest["scenarios"][fname[:-4]] = entry
    return manifest


def main():
    names = [n for n in ROOTS if not n.startswith("fixtures/")]
    names += ["fixtures/clean"] + [f"fixtures/wf{i:02d}" for i in range(1, 14)]
    for name in names:
        path = os.path.join(CORPORA_DIR, *name.split("/"))
        manifest = manifest_for(name, path)
        with open(os.path.join(path, "manifest.json"), "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
        print(name, manifest["stats"]["actions"], sorted(manifest["scenarios"]))


if __name__ == "__main__":
    main()
