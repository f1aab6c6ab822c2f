"""
Linking and checking models
===========================

Models refer to each other by name. Linking resolves those names across a
directory, and the checker then applies the thirteen well-formedness rules.
"""

import lrkit
from lrkit.corpora import corpus_path

# The cleanup case study: three tasks, six skills and fourteen actions.
ws = lrkit.link_workspace(lrkit.load_models([corpus_path("cleanup")]))
stats = lrkit.collect_stats(ws)
print(stats.summary())
for skill, n in sorted(stats.actions_per_skill.items()):
    print(f"  {skill}: {n} actions")

# A clean corpus has no findings at all.
print("cleanup findings:", sum(len(r.diagnostics) for r in lrkit.check_all(ws)))

# Each fixture under fixtures/ breaks exactly one rule.
bad = lrkit.link_workspace(lrkit.load_models([corpus_path("fixtures/wf04")]))
for report in lrkit.check_all(bad):
    for d in report.diagnostics:
        print(d.format())
