"""
Adding a code generation backend
================================

A backend maps a statechart to a list of (file name, content) pairs.
Registries never change in place, so registering returns a new one.
"""

import lrkit
from lrkit.codegen import generate


def to_csv(sc):
    rows = ["id,path,kind"] + [f"{s.id},{s.path},{s.kind}" for s in sc.states]
    return [(f"{sc.root.path}.csv", "\n".join(rows) + "\n")]


registry = lrkit.register_backend(lrkit.default_registry(), lrkit.Backend("csv", to_csv))
print("backends:", lrkit.list_backends(registry))

minimal = lrkit.load_corpus("minimal")
sc = lrkit.to_statechart(minimal.workspace, minimal.root)
for name, content in generate(sc, registry.get("csv")):
    print(f"--- {name}")
    print(content, end="")

try:
    lrkit.register_backend(registry, lrkit.Backend("lrf", to_csv))
except lrkit.DuplicateBackend as exc:
    print("refused:", exc)
