"""
From nets to statecharts
========================

A process becomes a tree of composite, atomic and exit states. The same
tree answers which outcomes each composite can actually reach.
"""

import lrkit

screwing = lrkit.load_corpus("screwing")
sc = lrkit.to_statechart(screwing.workspace, screwing.root)

for state in sc.states:
    depth = state.path.count("/")
    print("  " * depth + f"{state.kind:<9} {state.path.rsplit('/', 1)[-1]}")

reachable = lrkit.reachable_outcomes(sc)
for comp in sc.composites():
    print(f"{comp.path}: {sorted(reachable[comp.id])}")

# The DOT backend draws the same tree; pipe it to `dot -Tsvg` to look at it.
dot = lrkit.emit_dot(sc)
print(dot.splitlines()[0], "...", f"{len(dot.splitlines())} lines")
