"""Shared fixtures: bundled corpora, linked workspaces and the scenario matrix."""

import functools
import os

import pytest

from lrkit.corpora import CORPORA_DIR, case_studies, corpus_names, load_corpus

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN_DIR = os.path.join(HERE, "golden")


@functools.lru_cache(maxsize=None)
def corpus(name):
    return load_corpus(name)


def workspace(name):
    return corpus(name).workspace


def corpus_dir(name):
    return os.path.join(CORPORA_DIR, *name.split("/"))


def scenario_matrix():
    """Every (corpus, scenario) pair shipped with the case studies."""
    pairs = []
    for name in case_studies():
        for scenario in sorted(corpus(name).scenarios):
            pairs.append((name, scenario))
    return pairs


def completing_matrix():
    """Matrix pairs whose run reaches an end rather than a run-time error."""
    return [(n, s) for n, s in scenario_matrix() if "error" not in corpus(n).manifest["scenarios"][s]]


def runnable_corpora():
    return [n for n in corpus_names() if corpus(n).root]


def wf_fixtures():
    return [n for n in corpus_names() if n.startswith("fixtures/wf")]


def all_model_files():
    files = []
    for name in corpus_names():
        files.extend(corpus(name).files)
    return files


@pytest.fixture(params=scenario_matrix(), ids=lambda p: f"{p[0]}:{p[1]}")
def matrix_pair(request):
    return request.param
