"""
Parsing and printing a model
============================

Every model file holds one model. Parsing gives a frozen AST; printing it
gives canonical text that parses back to the same AST.
"""

import lrkit

text = """action Spin {
  parameters { Arm arm; Frame threadPose; Double maxTorque; }
  execution { arm.rotate(threadPose, maxTorque) }
  entry { maxTorque > 0.0; }
  exit {
    result.displaced -> displaced;
    result.torque >= maxTorque -> tightened;
    true -> turned;
  }
}"""

model = lrkit.parse_model(text, "Spin.action")
print(model.kind, model.name, [p.name for p in model.parameters])

# The canonical layout: one declaration per line, four-space indentation.
canonical = lrkit.pretty_print(model)
print(canonical)
assert lrkit.parse_model(canonical, "Spin.action") == model

# Errors carry a position and a message instead of an exception trace.
try:
    lrkit.parse_model("action Broken { parameters { Arm } }", "Broken.action")
except lrkit.ParseError as exc:
    for d in exc.diagnostics:
        print(d.format())
