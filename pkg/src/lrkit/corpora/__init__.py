"""Bundled model corpora.

Each corpus is a directory holding one model per file, a ``manifest.json``
and optional ``scenarios/*.scn`` files. The reconstructed case studies are
``screwing``, ``stacking``, ``plugging`` and ``cleanup``; ``minimal`` is a
single chain through all four levels. ``fixtures/clean`` is a small
well-formed base and ``fixtures/wf01`` .. ``fixtures/wf13`` each break
exactly one well-formedness rule.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property

from ..simworld import Scenario, load_scenario
from ..symbols import LinkedWorkspace, link_workspace, load_models, model_files

CORPORA_DIR = os.path.dirname(os.path.abspath(__file__))
SHARED_DIR = os.path.join(CORPORA_DIR, "_shared")


class UnknownCorpus(LookupError):
    pass


def corpus_names() -> list[str]:
    """Every corpus with a manifest, case studies first, then fixtures."""
    names = []
    for entry in sorted(os.listdir(CORPORA_DIR)):
        if os.path.isfile(os.path.join(CORPORA_DIR, entry, "manifest.json")):
            names.append(entry)
    fixtures = os.path.join(CORPORA_DIR, "fixtures")
    for entry in sorted(os.listdir(fixtures)):
        if os.path.isfile(os.path.join(fixtures, entry, "manifest.json")):
            names.append(f"fixtures/{entry}")
    return names


def case_studies() -> list[str]:
    return [n for n in corpus_names() if not n.startswith("fixtures/")]


def corpus_path(name: str) -> str:
    if name not in corpus_names():
        raise UnknownCorpus(f"no bundled corpus named {name!r}")
    return os.path.join(CORPORA_DIR, *name.split("/"))


@dataclass
class Corpus:
    name: str
    path: str
    manifest: dict
    models: list
    scenarios: dict = field(default_factory=dict)  # scenario name -> Scenario

    @property
    def root(self):
        """Name of the process to run, or None for corpora without one."""
        return self.manifest.get("root")

    @property
    def files(self) -> list[str]:
        return model_files([self.path])

    @cached_property
    def workspace(self) -> LinkedWorkspace:
        return link_workspace(self.models)

    def scenario_text(self, scenario: str) -> str:
        with open(self.scenario_file(scenario), encoding="utf-8") as fh:
            return fh.read()

    def scenario_file(self, scenario: str) -> str:
        return os.path.join(self.path, self.manifest["scenarios"][scenario]["file"])


def load_corpus(name: str) -> Corpus:
    """Parse every model of a bundled corpus and load its scenarios."""
    path = corpus_path(name)
    with open(os.path.join(path, "manifest.json"), encoding="utf-8") as fh:
        manifest = json.load(fh)
    models = load_models([path])
    scenarios = {}
    for sname, entry in manifest.get("scenarios", {}).items():
        with open(os.path.join(path, entry["file"]), encoding="utf-8") as fh:
            scenarios[sname] = load_scenario(fh.read())
    return Corpus(name, path, manifest, models, scenarios)


__all__ = ["CORPORA_DIR", "SHARED_DIR", "Corpus", "Scenario", "UnknownCorpus",
           "case_studies", "corpus_names", "corpus_path", "load_corpus"]
